#include <algorithm>
#include <cmath>
#include <numbers>

#include "regop/errors.hpp"
#include "regop/fibered.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

GaugeField::GaugeField(std::vector<double> pi_grid, Index n_x, Generator g)
    : pi_grid_(std::move(pi_grid)), n_x_(n_x), g_(std::move(g)) {
  if (pi_grid_.size() < 2) throw Error(ErrorCode::GridTooCoarse, "gauge needs at least 2 pi points");
  if (n_x_ < 8) throw Error(ErrorCode::GridTooCoarse, "gauge needs n_x >= 8");
  if (pi_grid_.front() != 0.0) throw Error(ErrorCode::ShapeMismatch, "pi grid must start at 0");
  for (std::size_t i = 1; i < pi_grid_.size(); ++i) {
    if (!(pi_grid_[i] > pi_grid_[i - 1])) {
      throw Error(ErrorCode::ShapeMismatch, "pi grid must be strictly increasing");
    }
  }
}

GaugeField GaugeField::linear_phase(std::vector<double> pi_grid, Index n_x) {
  return GaugeField(std::move(pi_grid), n_x, [](double pi, double x) { return pi * x; });
}

GaugeField GaugeField::from_table(std::vector<double> table_pi, const RealMatrix& samples,
                                  std::vector<double> pi_grid) {
  const Index rows = samples.rows();
  if (rows < 1 || static_cast<std::size_t>(rows) != table_pi.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one sample row per table pi value");
  }
  for (std::size_t i = 1; i < table_pi.size(); ++i) {
    if (!(table_pi[i] > table_pi[i - 1])) {
      throw Error(ErrorCode::ShapeMismatch, "table pi values must increase");
    }
  }
  const Index n_x = samples.cols() - 1;
  // x is only ever evaluated at the nodes j / n_x
  Generator g = [table_pi, samples, n_x](double pi, double x) {
    const Index j = std::clamp<Index>(static_cast<Index>(std::lround(x * n_x)), 0, n_x);
    if (pi <= table_pi.front()) return samples(0, j);
    if (pi >= table_pi.back()) return samples(samples.rows() - 1, j);
    const auto it = std::upper_bound(table_pi.begin(), table_pi.end(), pi);
    const Index r = static_cast<Index>(it - table_pi.begin());
    const double t = (pi - table_pi[r - 1]) / (table_pi[r] - table_pi[r - 1]);
    return (1.0 - t) * samples(r - 1, j) + t * samples(r, j);
  };
  return GaugeField(std::move(pi_grid), n_x, std::move(g));
}

RealVector GaugeField::samples(std::size_t i) const {
  RealVector v(n_x_ + 1);
  for (Index j = 0; j <= n_x_; ++j) v(j) = g_(pi_grid_[i], static_cast<double>(j) / n_x_);
  return v;
}

double GaugeField::twist(std::size_t i) const {
  return g_(pi_grid_[i], 1.0) - g_(pi_grid_[i], 0.0);
}

bool GaugeField::base_point_identity() const {
  const RealVector s = samples(0);
  return s.cwiseAbs().maxCoeff() <= tol::kAlg;
}

Matrix GaugeField::unitary_at(double pi, GridLayout layout) const {
  const Index d = layout == GridLayout::Full ? n_x_ + 1 : n_x_;
  Vector diag(d);
  for (Index j = 0; j < d; ++j) diag(j) = std::polar(1.0, g_(pi, static_cast<double>(j) / n_x_));
  return diag.asDiagonal();
}

Matrix GaugeField::unitary(std::size_t i, GridLayout layout) const {
  return unitary_at(pi_grid_[i], layout);
}

GaugeField GaugeField::refined() const {
  std::vector<double> fine;
  for (std::size_t i = 0; i < pi_grid_.size(); ++i) {
    if (i > 0) fine.push_back(0.5 * (pi_grid_[i - 1] + pi_grid_[i]));
    fine.push_back(pi_grid_[i]);
  }
  return GaugeField(std::move(fine), n_x_, g_);
}

namespace {

// max over probes and adjacent pairs of ||U' S U'* - U S U*||
double probe_deviation(const GaugeField& u, GridLayout layout, const std::vector<Matrix>& probes) {
  double worst = 0.0;
  Matrix prev = u.unitary(0, layout);
  for (std::size_t i = 1; i < u.pi_grid().size(); ++i) {
    const Matrix cur = u.unitary(i, layout);
    for (const auto& s : probes) {
      worst = std::max(worst, linalg::op_norm(cur * s * cur.adjoint() - prev * s * prev.adjoint()));
    }
    prev = cur;
  }
  return worst;
}

double z_field_deviation(const GaugeField& u, GridLayout layout, const Matrix& w) {
  return probe_deviation(u, layout, {w});
}

double max_step(const std::vector<double>& grid) {
  double s = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) s = std::max(s, grid[i] - grid[i - 1]);
  return s;
}

}  // namespace

GaugeExtension gauge_extension(const GridOperator& t0, const GaugeField& u) {
  if (!u.base_point_identity()) {
    throw Error(ErrorCode::PreconditionViolated, "the gauge must be the identity at pi = 0");
  }
  if (u.n_x() != t0.n()) throw Error(ErrorCode::ShapeMismatch, "gauge and operator grids differ");
  const GridLayout layout = t0.layout();
  const DomainedOperator base = t0.as_domained();
  const ZTransform w = z_transform(base);
  if (!(w.density_gap > tol::kGap)) {
    throw Error(ErrorCode::NotDense, "base operator is not regular at this resolution", w.density_gap);
  }

  std::vector<DomainedOperator> fibers;
  std::vector<ZTransform> zs;
  double gauge_mod = 0.0;
  Matrix prev;
  for (std::size_t i = 0; i < u.pi_grid().size(); ++i) {
    const Matrix ui = u.unitary(i, layout);
    fibers.emplace_back(ui * base.action() * ui.adjoint(), ui * base.frame());
    zs.push_back(ZTransform::of(ui * w.z * ui.adjoint()));
    if (i > 0) gauge_mod = std::max(gauge_mod, linalg::op_norm(ui - prev));
    prev = ui;
  }

  GaugeExtension out{FiberedOperator(u.pi_grid(), std::move(fibers)), std::move(zs)};
  out.field.set_gauge_modulus(gauge_mod);

  // probes: w and rank-one projectors on the lowest Fourier modes
  std::vector<Matrix> probes{w.z};
  const Index d = t0.dim();
  for (int k = -2; k <= 2; ++k) {
    Vector e(d);
    for (Index j = 0; j < d; ++j) e(j) = std::polar(1.0, 2.0 * std::numbers::pi * k * j / t0.n());
    e.normalize();
    probes.push_back(e * e.adjoint());
  }
  const GaugeField fine = u.refined();
  out.probe_deviation = probe_deviation(u, layout, probes);
  out.probe_deviation_refined = probe_deviation(fine, layout, probes);
  out.probe_ratio = out.probe_deviation > 0 ? out.probe_deviation_refined / out.probe_deviation : 0;
  out.linear_constant = out.probe_deviation / max_step(u.pi_grid());

  out.z_deviation = z_field_deviation(u, layout, w.z);
  out.z_deviation_refined = z_field_deviation(fine, layout, w.z);
  out.z_ratio = out.z_deviation > 0 ? out.z_deviation_refined / out.z_deviation : 0;

  if (out.probe_deviation > tol::kAlg && out.probe_ratio > 0.75) {
    throw Error(ErrorCode::GaugeNotContinuous,
                "adjacent deviations do not shrink linearly under refinement", out.probe_ratio);
  }
  return out;
}

}  // namespace regop
