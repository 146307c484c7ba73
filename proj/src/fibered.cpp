#include "regop/fibered.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

FiberedOperator::FiberedOperator(std::vector<double> pi_grid, std::vector<DomainedOperator> fibers,
                                 std::vector<BoundaryTag> tags)
    : pi_grid_(std::move(pi_grid)), fibers_(std::move(fibers)), tags_(std::move(tags)) {
  if (fibers_.empty()) throw Error(ErrorCode::ShapeMismatch, "a fibered operator needs fibers");
  if (pi_grid_.size() != fibers_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one fiber per grid point required");
  }
  if (!tags_.empty() && tags_.size() != fibers_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "tags must be absent or one per fiber");
  }
  if (pi_grid_.front() != 0.0) throw Error(ErrorCode::ShapeMismatch, "pi grid must start at 0");
  for (std::size_t i = 1; i < pi_grid_.size(); ++i) {
    if (!(pi_grid_[i] > pi_grid_[i - 1])) {
      throw Error(ErrorCode::ShapeMismatch, "pi grid must be strictly increasing");
    }
  }
  for (const auto& f : fibers_) {
    if (f.ambient_dim() != fibers_.front().ambient_dim()) {
      throw Error(ErrorCode::ShapeMismatch, "fibers live on different spaces");
    }
  }
}

std::optional<BoundaryTag> FiberedOperator::tag(std::size_t i) const {
  if (tags_.empty()) return std::nullopt;
  return tags_[i];
}

void FiberedOperator::set_continuity_profile(std::vector<double> p) {
  if (!p.empty() && p.size() + 1 != fibers_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "profile needs one value per adjacent pair");
  }
  profile_ = std::move(p);
}

std::vector<double> uniform_pi_grid(Index count) {
  if (count < 2) throw Error(ErrorCode::GridTooCoarse, "pi grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) g[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

FiberedOperator build_counterexample_t(Index n_pi, Index n_x) {
  if (n_pi < 2) throw Error(ErrorCode::GridTooCoarse, "counterexample needs n_pi >= 2");
  if (n_x < 32) throw Error(ErrorCode::GridTooCoarse, "counterexample needs n_x >= 32");
  const GridOperator at0 = build_derivative(n_x, BoundaryTag::minimal(), GridLayout::Periodic);
  const GridOperator rest = build_derivative(n_x, BoundaryTag::periodic(), GridLayout::Periodic);
  std::vector<DomainedOperator> fibers{at0.as_domained()};
  std::vector<BoundaryTag> tags{at0.tag()};
  for (Index i = 1; i < n_pi; ++i) {
    fibers.push_back(rest.as_domained());
    tags.push_back(rest.tag());
  }
  return FiberedOperator(uniform_pi_grid(n_pi), std::move(fibers), std::move(tags));
}

double default_modulus(const FiberedOperator& f) {
  if (auto g = f.gauge_modulus()) return 10.0 * *g;
  return 1e-6;
}

namespace {
bool same_matrix(const Matrix& a, const Matrix& b);
}  // namespace

std::vector<LinearRelation> continuity_restrict(const std::vector<LinearRelation>& fibers,
                                                double modulus) {
  if (fibers.size() < 2 || std::isinf(modulus)) return fibers;
  std::vector<LinearRelation> out;
  const double cut = modulus * modulus;
  for (std::size_t i = 0; i < fibers.size(); ++i) {
    // fiber 0 is read as the limit from the right, so the last fiber never
    // leans on it; with two points the last one stands alone
    const std::size_t j = i + 1 < fibers.size() ? i + 1 : (i > 1 ? i - 1 : i);
    const Matrix& gi = fibers[i].frame();
    const Matrix& gj = fibers[j].frame();
    if (gi.cols() == 0 || same_matrix(gi, gj)) {
      out.push_back(fibers[i]);
      continue;
    }
    // sin^2 of the principal angles between span(gi) and span(gj)
    const Matrix outside = gi - gj * (gj.adjoint() * gi);
    const Matrix k = outside.adjoint() * outside;
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(k));
    const RealVector ev = es.eigenvalues();
    const Index keep = static_cast<Index>((ev.array() <= cut).count());
    out.emplace_back(gi * es.eigenvectors().leftCols(keep), fibers[i].ambient_dim());
  }
  return out;
}

namespace {

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

// Fibers built identically (the counterexample at pi > 0) are computed once.
bool repeats_previous(const FiberedOperator& f, std::size_t i) {
  return i > 0 && same_matrix(f.fiber(i).action(), f.fiber(i - 1).action()) &&
         same_matrix(f.fiber(i).frame(), f.fiber(i - 1).frame());
}

FiberedOperator from_relations(const FiberedOperator& like, const std::vector<LinearRelation>& rel) {
  std::vector<DomainedOperator> ops;
  for (std::size_t i = 0; i < rel.size(); ++i) {
    if (i > 0 && same_matrix(rel[i].frame(), rel[i - 1].frame())) ops.push_back(ops.back());
    else ops.push_back(rel[i].operator_part());
  }
  FiberedOperator out(like.pi_grid(), std::move(ops));
  if (auto g = like.gauge_modulus()) out.set_gauge_modulus(*g);
  return out;
}

}  // namespace

FiberedOperator fibered_adjoint(const FiberedOperator& f, std::optional<double> modulus) {
  std::vector<LinearRelation> rel;
  for (std::size_t i = 0; i < f.size(); ++i) {
    rel.push_back(repeats_previous(f, i) ? rel.back() : adjoint_relation(f.fiber(i)));
  }
  return from_relations(f, continuity_restrict(rel, modulus.value_or(default_modulus(f))));
}

FiberedOperator tilde_extension(const FiberedOperator& f, std::optional<double> modulus) {
  std::vector<LinearRelation> rel;
  for (const auto& op : f.fibers()) rel.push_back(LinearRelation::graph_of(op));
  return from_relations(f, continuity_restrict(rel, modulus.value_or(default_modulus(f))));
}

ZFieldReport zfield(FiberedOperator& f) {
  ZFieldReport r;
  for (std::size_t i = 0; i < f.size(); ++i) {
    r.z.push_back(repeats_previous(f, i) ? r.z.back() : z_transform(f.fiber(i)));
    r.gaps.push_back(r.z.back().density_gap);
  }
  for (std::size_t i = 0; i + 1 < r.z.size(); ++i) {
    r.deviations.push_back(linalg::op_norm(r.z[i + 1].z - r.z[i].z));
  }
  if (!r.deviations.empty()) {
    std::vector<double> sorted = r.deviations;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    r.median = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  }
  r.threshold = std::max(10.0 * r.median, tol::kAlg);
  for (std::size_t i = 0; i < r.deviations.size(); ++i) {
    if (r.deviations[i] > r.threshold) r.jumps.push_back(i);
  }
  f.set_continuity_profile(r.deviations);
  return r;
}

double fiber_identity_check(const FiberedOperator& t, const AlgebraElement& a) {
  const FiberIndex& index = a.index();
  if (index.size() != t.size()) throw Error(ErrorCode::ShapeMismatch, "one fiber per point of X");
  const Index k = t.ambient_dim();
  for (Index d : index.dims()) {
    if (d != k) throw Error(ErrorCode::ShapeMismatch, "fibers must act on C^k with k = fiber size");
  }

  // a(x) must have its columns in D(T_x)
  for (std::size_t x = 0; x < t.size(); ++x) {
    const double out = linalg::containment_residual(t.fiber(x).frame(), a.fiber(x));
    if (out > tol::kGraph * std::max(1.0, linalg::op_norm(a.fiber(x)))) {
      throw Error(ErrorCode::DomainViolation, "a(" + index.label(x) + ") is not in the fiber domain",
                  out);
    }
  }

  // assembled operator on vec(A): block diagonal of (I_k kron T_x)
  const Index big = index.vectorized_dim();
  Matrix action = Matrix::Zero(big, big);
  Matrix frame = Matrix::Zero(big, 0);
  {
    Index off = 0, width = 0;
    for (std::size_t x = 0; x < t.size(); ++x) width += k * t.fiber(x).domain_dim();
    frame = Matrix::Zero(big, width);
    Index fc = 0;
    for (std::size_t x = 0; x < t.size(); ++x) {
      const DomainedOperator& op = t.fiber(x);
      for (Index c = 0; c < k; ++c) {
        action.block(off + c * k, off + c * k, k, k) = op.action();
        frame.block(off + c * k, fc, k, op.domain_dim()) = op.frame();
        fc += op.domain_dim();
      }
      off += k * k;
    }
  }
  const DomainedOperator global(action, frame);
  const DomainedOperator global_adj = adjoint_via_graph(global);
  const Vector va = vectorize(a);
  const Vector image = va + global_adj.apply(global.apply(va));
  const AlgebraElement route2 = devectorize(index, image);

  double worst = 0.0;
  for (std::size_t x = 0; x < t.size(); ++x) {
    const DomainedOperator& op = t.fiber(x);
    const DomainedOperator adj = adjoint_via_graph(op);
    const Matrix route1 = a.fiber(x) + adj.action() * (op.action() * a.fiber(x));
    worst = std::max(worst, linalg::op_norm(route1 - route2.fiber(x)));
  }
  return worst;
}

ExtensionReport extension_inclusion_check(const FiberedOperator& s, const FiberedOperator& t,
                                          double tol_graph, std::optional<double> modulus) {
  if (s.size() != t.size() || s.ambient_dim() != t.ambient_dim()) {
    throw Error(ErrorCode::ShapeMismatch, "fields differ in grid or ambient dimension");
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::abs(s.pi_grid()[i] - t.pi_grid()[i]) > 1e-14) {
      throw Error(ErrorCode::ShapeMismatch, "fields live on different pi grids");
    }
  }
  auto all_in = [&](const FiberedOperator& a, const FiberedOperator& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!graph_inclusion(a.fiber(i), b.fiber(i), tol_graph).included) return false;
    }
    return true;
  };

  ExtensionReport r;
  r.fiberwise = true;
  for (std::size_t i = 0; i < s.size(); ++i) {
    FiberInclusion fi{s.pi_grid()[i], graph_inclusion(s.fiber(i), t.fiber(i), tol_graph)};
    if (!fi.result.included) {
      r.fiberwise = false;
      r.failing_pi.push_back(fi.pi);
    }
    r.fibers.push_back(fi);
  }
  const FiberedOperator s_tilde = tilde_extension(s, modulus);
  const FiberedOperator t_tilde = tilde_extension(t, modulus);
  r.s_in_s_tilde = all_in(s, s_tilde);
  r.s_tilde_in_t_tilde = all_in(s_tilde, t_tilde);
  r.t_tilde_is_t = all_in(t, t_tilde) && all_in(t_tilde, t);
  r.included = r.fiberwise && r.s_in_s_tilde && r.s_tilde_in_t_tilde && r.t_tilde_is_t;
  return r;
}

std::vector<double> core_check(const FiberedOperator& f) {
  std::vector<double> out;
  for (const auto& op : f.fibers()) {
    const DomainedOperator adj = adjoint_via_graph(op);
    const Index n = op.ambient_dim();
    const Matrix leave = (Matrix::Identity(n, n) - linalg::projector(adj.frame())) *
                         op.restricted_action();
    const Matrix core = op.frame() * linalg::null_space(leave);
    const DomainedOperator on_core(op.action(), linalg::orth(core));
    // closure of the graph over the core is its span at finite size
    out.push_back(graph_inclusion(op, on_core).residual());
  }
  return out;
}

std::optional<BoundaryTag> identify_tag(const DomainedOperator& op, Index n, GridLayout layout,
                                        bool check_action, double tol) {
  std::vector<BoundaryTag> candidates{BoundaryTag::minimal(), BoundaryTag::periodic()};
  if (layout == GridLayout::Full) candidates.push_back(BoundaryTag::maximal());
  if (op.ambient_dim() != (layout == GridLayout::Full ? n + 1 : n)) return std::nullopt;

  // twist estimate from the seam
  double theta = 0.0;
  if (layout == GridLayout::Full) {
    const Vector p0 = op.frame() * op.frame().adjoint().col(0);
    if (std::abs(p0(0)) > 1e-3) theta = std::arg(p0(n) / p0(0));
  } else {
    const Complex seam = op.action()(n - 1, 0) / Complex(0.0, 0.5 * static_cast<double>(n));
    theta = std::arg(seam);
  }
  candidates.push_back(BoundaryTag::twisted(theta));

  for (const auto& tag : candidates) {
    const GridOperator g = build_derivative(n, tag, layout);
    if (linalg::subspace_distance(g.frame(), op.frame()) > tol) continue;
    if (check_action) {
      const Matrix diff = (g.matrix() - op.action()) * op.frame();
      if (linalg::op_norm(diff) > tol * std::max(1.0, linalg::op_norm(g.matrix()))) continue;
    }
    // an untwisted match is reported as PERIODIC
    if (tag.kind == BoundaryKind::Twisted && (std::abs(tag.theta) < tol ||
                                              std::abs(tag.theta - 2 * std::numbers::pi) < tol)) {
      return BoundaryTag::periodic();
    }
    return tag;
  }
  return std::nullopt;
}

}  // namespace regop
