// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "regop/algebra.hpp"
#include "regop/correspondence.hpp"
#include "regop/diffop.hpp"
#include "regop/errors.hpp"
#include "regop/fibered.hpp"
#include "regop/linalg.hpp"
#include "regop/unbounded.hpp"
#include "support.hpp"

using namespace regop;
using regop::testing::Rng;

namespace {

int failures = 0;

void verdict(int n, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s %s\n", n, pass ? "PASS" : "FAIL", detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double max_from(const std::vector<double>& v, std::size_t first) {
  double m = 0.0;
  for (std::size_t i = first; i < v.size(); ++i) m = std::max(m, v[i]);
  return m;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelReport k400 = kernel_certificate(400);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const KernelReport k200 = kernel_certificate(200);
  const double ratio = k200.l2_error / k400.l2_error;
  const bool pass = k400.l2_error <= 5e-3 && k400.kernel_dim == 1 && secs < 1.0 && ratio >= 3 && ratio <= 5;
  verdict(1, pass,
          fmt("l2_error=%.3e dim=%.0f runtime=%.3fs ratio200/400=%.4f", k400.l2_error,
              static_cast<double>(k400.kernel_dim), secs, ratio) +
              fmt(" oracle=%.3e", fixtures::kKernelError400));
}

void criterion2() {
  const RealVector s = composite_singular_values(400, BoundaryTag::periodic());
  const double smin = s.minCoeff();
  verdict(2, smin >= 0.999, fmt("sigma_min=%.12f", smin));
}

void criterion3() {
  FiberedOperator t = build_counterexample_t(16, 400);
  const ZFieldReport z = zfield(t);
  const double flat = max_from(z.deviations, 1);
  const double jump = z.deviations.front();
  const bool pass = flat <= 1e-8 && jump >= 1e-2 && std::abs(jump - fixtures::kJump400) <= 1e-9;
  verdict(3, pass, fmt("jump=%.12f oracle=%.12f max_pi>0=%.3e", jump, fixtures::kJump400, flat));
}

void criterion4() {
  FiberedOperator adj = fibered_adjoint(build_counterexample_t(16, 400));
  const ZFieldReport z = zfield(adj);
  const double dev = max_from(z.deviations, 0);
  verdict(4, dev <= 1e-8, fmt("max_deviation=%.3e", dev));
}

void criterion5() {
  Rng rng(501);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.integer(1, 16);
    const Matrix a = rng.matrix(n, n) * rng.uniform(0.1, 10.0);
    const DomainedOperator back = from_z(z_transform(DomainedOperator::full(a)));
    double err = linalg::op_norm(back.action() * back.frame() * back.frame().adjoint() - a);
    if (back.domain_dim() != n) err = 1e300;
    worst = std::max(worst, err / (1e-8 * (1.0 + linalg::op_norm(a))));
  }
  verdict(5, worst <= 1.0, fmt("worst error / (1e-8 (1 + |T|)) = %.3e", worst));
}

// u = V diag(e^{i theta}) V* with V the eigenbasis of 1 - z*z.
Matrix commuting_unitary(Rng& rng, const Matrix& z) {
  const Index n = z.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(n, n) - z.adjoint() * z);
  Vector ph(n);
  for (Index i = 0; i < n; ++i) ph(i) = std::polar(1.0, rng.uniform(-3.0, 3.0));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

void criterion6() {
  Rng rng(601);
  int accepted = 0, rejected = 0;
  double worst_eq61 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.integer(2, 8);
    const ZTransform z = z_transform(DomainedOperator::full(rng.matrix(n, n)));
    const Matrix u = commuting_unitary(rng, z.z);
    const FiberIndex idx({"x"}, {n});
    try {
      const ZTransform zs = restrict_via_isometry(z, AlgebraElement(idx, {u}));
      const InclusionResult inc = graph_inclusion(from_z(zs), from_z(z), 1e-9);
      const RestrictionWitness w = restriction_witness(z, zs);
      if (inc.included && linalg::op_norm(w.w - u) <= 1e-9) ++accepted;
    } catch (const Error& e) {
      worst_eq61 = std::max(worst_eq61, e.residual());
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = rng.integer(2, 8);
    const ZTransform z = z_transform(DomainedOperator::full(rng.matrix(n, n)));
    const FiberIndex idx({"x"}, {n});
    try {
      restrict_via_isometry(z, AlgebraElement(idx, {rng.unitary(n)}));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Eq61Violated) ++rejected;
    }
  }
  verdict(6, accepted == 50 && rejected == 50,
          fmt("commuting pairs accepted %.0f/50 (largest identity residual %.3e), adversarial rejected %.0f/50",
              accepted, worst_eq61, rejected));
}

Matrix submodule_frame(const Matrix& v, const ModuleShape& shape) {
  const Matrix q = linalg::orth(v);
  Matrix f = Matrix::Zero(shape.module_dim(), shape.k * q.cols());
  for (Index j = 0; j < shape.k; ++j) f.block(j * shape.m, j * q.cols(), shape.m, q.cols()) = q;
  return f;
}

void criterion7() {
  Rng rng(701);
  double worst = 0.0;
  int unequal = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index k = rng.integer(1, 3);
    const Index m = rng.integer(1, 8 / k);
    const ModuleShape shape{m, k};
    const Matrix t = rng.matrix(m, m);
    const DomainedOperator op(module_left_multiplication(t, shape),
                              submodule_frame(rng.matrix(m, rng.integer(1, m)), shape));
    const RoundtripReport a = roundtrip_check_module(op, shape);
    const RoundtripReport b = roundtrip_check_compact(phi1(op, shape), shape);
    worst = std::max({worst, a.inclusion.residual(), a.reverse.residual(), b.inclusion.residual(),
                      b.reverse.residual(), a.domain_distance, b.domain_distance});
    if (!a.closures_equal || !b.closures_equal) ++unequal;
  }
  verdict(7, worst <= 1e-10 && unequal == 0, fmt("worst residual=%.3e unequal closures=%.0f", worst, unequal));
}

void criterion8() {
  Rng rng(801);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index points = rng.integer(1, 8), k = rng.integer(1, 4);
    std::vector<DomainedOperator> ops;
    std::vector<Matrix> fibers;
    for (Index x = 0; x < points; ++x) {
      ops.emplace_back(rng.matrix(k, k), rng.frame(k, rng.integer(1, k)));
      fibers.push_back(ops.back().frame() * rng.matrix(ops.back().domain_dim(), k));
    }
    std::vector<double> grid(points);
    for (Index x = 0; x < points; ++x) grid[x] = static_cast<double>(x);
    const FiberedOperator t(grid, ops);
    worst = std::max(worst, fiber_identity_check(t, AlgebraElement(FiberIndex::uniform(points, k), fibers)));
  }
  verdict(8, worst <= 1e-9, fmt("worst residual=%.3e", worst));
}

void criterion9() {
  const Index n = 64;
  const GridOperator t0 = build_derivative(n, BoundaryTag::periodic(), GridLayout::Periodic);
  const GaugeExtension e = gauge_extension(t0, GaugeField::linear_phase(uniform_pi_grid(16), n));
  const ExtensionReport inc = extension_inclusion_check(build_counterexample_t(16, n), e.field);
  const bool rate = e.z_ratio >= 0.33 && e.z_ratio <= 0.75;
  double worst = 0.0;
  for (const auto& f : inc.fibers) worst = std::max(worst, f.result.residual());
  verdict(9, rate && inc.fiberwise,
          fmt("deviation=%.4e constant=%.4f halving ratio=%.4f; fiberwise inclusion failing at %.0f",
              e.z_deviation, e.z_deviation * 15.0, e.z_ratio, static_cast<double>(inc.failing_pi.size())) +
              fmt(" fibers (worst residual %.3e)", worst));
}

bool same_field(const FiberedOperator& a, const FiberedOperator& b, double& worst) {
  bool ok = a.size() == b.size();
  for (std::size_t i = 0; ok && i < a.size(); ++i) {
    const double d = linalg::subspace_distance(a.fiber(i).frame(), b.fiber(i).frame());
    const double act = linalg::op_norm((a.fiber(i).action() - b.fiber(i).action()) * a.fiber(i).frame()) /
                       std::max(1.0, linalg::op_norm(a.fiber(i).action()));
    worst = std::max({worst, d, act});
    ok = d <= 1e-9 && act <= 1e-9;
  }
  return ok;
}

void criterion10() {
  Rng rng(1001);
  std::vector<FiberedOperator> models{build_counterexample_t(6, 64)};
  // restriction at pi = 0, the full operator elsewhere; and constant fields
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.integer(2, 6), count = rng.integer(2, 5);
    const Matrix a = rng.matrix(n, n);
    std::vector<DomainedOperator> ops(count, DomainedOperator::full(a));
    if (trial % 2 == 0) ops.front() = DomainedOperator(a, rng.frame(n, rng.integer(1, n)));
    models.emplace_back(uniform_pi_grid(count), ops);
  }
  int failed = 0;
  double worst = 0.0;
  for (const auto& s : models) {
    const FiberedOperator st = tilde_extension(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!graph_inclusion(s.fiber(i), st.fiber(i), 1e-9).included) ++failed;
    }
    if (!same_field(fibered_adjoint(st), tilde_extension(fibered_adjoint(s)), worst)) ++failed;
  }
  const GridOperator t0 = build_derivative(64, BoundaryTag::periodic(), GridLayout::Periodic);
  const GaugeExtension g = gauge_extension(t0, GaugeField::linear_phase(uniform_pi_grid(16), 64));
  if (!same_field(tilde_extension(g.field), g.field, worst)) ++failed;
  verdict(10, failed == 0, fmt("failed laws=%.0f worst deviation=%.3e", failed, worst));
}

bool span_oracle(const std::vector<AlgebraElement>& gens, std::size_t fiber) {
  const Index d = gens.front().index().dim(fiber);
  Matrix all(d * d, static_cast<Index>(gens.size()) * d * d);
  Index c = 0;
  for (const auto& g : gens)
    for (Index r = 0; r < d; ++r)
      for (Index s = 0; s < d; ++s) {
        Matrix e = Matrix::Zero(d, d);
        e(r, s) = 1.0;
        all.col(c++) = (g.fiber(fiber) * e).reshaped();
      }
  return linalg::numerical_rank(all) == d * d;
}

void criterion11() {
  Rng rng(1101);
  int disagreements = 0, dense = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const FiberIndex idx = rng.index(6, 4);
    std::vector<AlgebraElement> gens;
    const Index count = rng.integer(1, 3);
    for (Index g = 0; g < count; ++g) {
      // random ranks so both verdicts occur
      std::vector<Matrix> fibers;
      for (Index d : idx.dims()) {
        const Index r = rng.integer(0, d);
        fibers.push_back(rng.matrix(d, r) * rng.matrix(r, d));
      }
      gens.emplace_back(idx, fibers);
    }
    const DensityVerdict v = ideal_density_check(gens);
    bool all = true;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const bool o = span_oracle(gens, i);
      all = all && o;
      if (o != v.dense_per_fiber[i]) ++disagreements;
    }
    if (all != v.dense) ++disagreements;
    if (v.dense) ++dense;
  }
  verdict(11, disagreements == 0, fmt("disagreements=%.0f (dense sets %.0f/100)", disagreements, dense));
}

}  // namespace

int main() {
  void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,  criterion5, criterion6,
                          criterion7, criterion8, criterion9, criterion10, criterion11};
  for (std::size_t i = 0; i < std::size(criteria); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i) + 1, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
