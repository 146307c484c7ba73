#include "regop/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

namespace {

constexpr Complex kI{0.0, 1.0};

// sqrt of the trapezoid weights on nodes 0..n
RealVector trapezoid_root(Index n) {
  const double h = 1.0 / static_cast<double>(n);
  RealVector s = RealVector::Constant(n + 1, std::sqrt(h));
  s(0) = s(n) = std::sqrt(h / 2.0);
  return s;
}

// Twisted circulant: (C f)_j = i (f_{j+1} - f_{j-1}) / 2h, f_n = e^{i theta} f_0.
Matrix twisted_circulant(Index n, Complex phase) {
  const double h = 1.0 / static_cast<double>(n);
  const Complex c = kI / (2.0 * h);
  Matrix m = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    if (j + 1 < n) m(j, j + 1) += c;
    else m(j, 0) += c * phase;
    if (j > 0) m(j, j - 1) -= c;
    else m(j, n - 1) -= c * std::conj(phase);
  }
  return m;
}

GridOperator build_full(Index n, BoundaryTag tag) {
  const Index dim = n + 1;
  const double h = 1.0 / static_cast<double>(n);
  Matrix d = Matrix::Zero(dim, dim);
  d(0, 0) = -1.0 / h;
  d(0, 1) = 1.0 / h;
  for (Index j = 1; j < n; ++j) {
    d(j, j + 1) = 0.5 / h;
    d(j, j - 1) = -0.5 / h;
  }
  d(n, n) = 1.0 / h;
  d(n, n - 1) = -1.0 / h;

  const RealVector s = trapezoid_root(n);
  Matrix a(dim, dim);
  for (Index r = 0; r < dim; ++r)
    for (Index c = 0; c < dim; ++c) a(r, c) = kI * d(r, c) * (s(r) / s(c));

  Matrix frame;
  switch (tag.kind) {
    case BoundaryKind::Maximal:
      frame = Matrix::Identity(dim, dim);
      break;
    case BoundaryKind::Minimal:
      frame = Matrix::Identity(dim, dim).middleCols(1, n - 1);
      break;
    case BoundaryKind::Periodic:
    case BoundaryKind::Twisted: {
      frame = Matrix::Zero(dim, n);
      frame.leftCols(n - 1) = Matrix::Identity(dim, dim).middleCols(1, n - 1);
      // s_0 = s_n, so the scaled seam vector keeps equal weights
      frame(0, n - 1) = 1.0 / std::sqrt(2.0);
      frame(n, n - 1) = tag.phase() / std::sqrt(2.0);
      a = linalg::projector(frame) * a;
      break;
    }
  }
  return GridOperator(n, tag, GridLayout::Full, std::move(a), std::move(frame));
}

GridOperator build_periodic_layout(Index n, BoundaryTag tag) {
  if (tag.kind == BoundaryKind::Maximal) {
    throw Error(ErrorCode::PreconditionViolated, "the periodic layout cannot carry a maximal domain");
  }
  if (tag.kind == BoundaryKind::Minimal) {
    Matrix frame = Matrix::Identity(n, n).rightCols(n - 1);
    return GridOperator(n, tag, GridLayout::Periodic, twisted_circulant(n, 1.0), std::move(frame));
  }
  return GridOperator(n, tag, GridLayout::Periodic, twisted_circulant(n, tag.phase()),
                      Matrix::Identity(n, n));
}

// Rows j = 1..n-1 (and row 0 when the outer factor wraps) of I - Laplacian
// with f_n = f_0.
Matrix composite_matrix(Index n, bool outer_periodic) {
  const double h = 1.0 / static_cast<double>(n);
  const double off = -1.0 / (h * h);
  Matrix m = Matrix::Zero(n, n);
  for (Index j = outer_periodic ? 0 : 1; j < n; ++j) {
    m(j, j) = 1.0 + 2.0 / (h * h);
    m(j, (j + 1) % n) += off;
    m(j, (j + n - 1) % n) += off;
  }
  return m;
}

}  // namespace

BoundaryTag BoundaryTag::twisted(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  return {BoundaryKind::Twisted, t};
}

Complex BoundaryTag::phase() const {
  return kind == BoundaryKind::Twisted ? std::polar(1.0, theta) : Complex(1.0, 0.0);
}

std::string BoundaryTag::name() const {
  switch (kind) {
    case BoundaryKind::Maximal: return "MAXIMAL";
    case BoundaryKind::Periodic: return "PERIODIC";
    case BoundaryKind::Minimal: return "MINIMAL";
    case BoundaryKind::Twisted: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "TWISTED(%.12g)", theta);
      return buf;
    }
  }
  return "?";
}

GridFunction::GridFunction(Vector samples) : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw Error(ErrorCode::ShapeMismatch, "a grid function needs two nodes");
}

GridFunction GridFunction::sample(Index n, const std::function<Complex(double)>& f) {
  Vector v(n + 1);
  for (Index j = 0; j <= n; ++j) v(j) = f(static_cast<double>(j) / static_cast<double>(n));
  return GridFunction(std::move(v));
}

RealVector GridFunction::nodes() const {
  return RealVector::LinSpaced(samples_.size(), 0.0, 1.0);
}

Complex GridFunction::inner(const GridFunction& o) const {
  if (o.samples_.size() != samples_.size()) throw Error(ErrorCode::ShapeMismatch, "grids differ");
  const Index n = steps();
  Complex acc = 0.0;
  for (Index j = 0; j <= n; ++j) {
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    acc += w * std::conj(samples_(j)) * o.samples_(j);
  }
  return acc * h();
}

double GridFunction::norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

GridFunction GridFunction::normalized() const {
  const double nr = norm();
  if (nr == 0.0) throw Error(ErrorCode::PreconditionViolated, "cannot normalize the zero function");
  return GridFunction(samples_ / nr);
}

GridOperator::GridOperator(Index n, BoundaryTag tag, GridLayout layout, Matrix action, Matrix frame)
    : n_(n), tag_(tag), layout_(layout), action_(std::move(action)), frame_(std::move(frame)) {}

Vector GridOperator::embed(const GridFunction& f) const {
  if (f.steps() != n_) throw Error(ErrorCode::ShapeMismatch, "grid function has the wrong step count");
  if (layout_ == GridLayout::Full) {
    return (f.samples().array() * trapezoid_root(n_).cast<Complex>().array()).matrix();
  }
  return f.samples().head(n_) * std::sqrt(h());
}

Vector GridOperator::nodal(const Vector& y) const {
  if (y.size() != dim()) throw Error(ErrorCode::ShapeMismatch, "vector has the wrong length");
  if (layout_ == GridLayout::Full) {
    return (y.array() / trapezoid_root(n_).cast<Complex>().array()).matrix();
  }
  return y / std::sqrt(h());
}

Matrix GridOperator::constraint_rows() const {
  const Index d = dim();
  if (layout_ == GridLayout::Periodic) {
    if (tag_.kind != BoundaryKind::Minimal) return Matrix(0, d);
    Matrix c = Matrix::Zero(1, d);
    c(0, 0) = 1.0;
    return c;
  }
  switch (tag_.kind) {
    case BoundaryKind::Maximal:
      return Matrix(0, d);
    case BoundaryKind::Minimal: {
      Matrix c = Matrix::Zero(2, d);
      c(0, 0) = 1.0;
      c(1, n_) = 1.0;
      return c;
    }
    default: {
      Matrix c = Matrix::Zero(1, d);
      c(0, n_) = 1.0;
      c(0, 0) = -tag_.phase();
      return c;
    }
  }
}

GridOperator build_derivative(Index n, BoundaryTag tag, GridLayout layout) {
  if (n < 8) throw Error(ErrorCode::GridTooCoarse, "need at least 8 grid steps");
  if (tag.kind == BoundaryKind::Twisted) tag = BoundaryTag::twisted(tag.theta);
  return layout == GridLayout::Full ? build_full(n, tag) : build_periodic_layout(n, tag);
}

RealVector composite_singular_values(Index n, BoundaryTag outer) {
  if (n < 8) throw Error(ErrorCode::GridTooCoarse, "need at least 8 grid steps");
  if (outer.kind != BoundaryKind::Maximal && outer.kind != BoundaryKind::Periodic) {
    throw Error(ErrorCode::PreconditionViolated, "outer factor must be MAXIMAL or PERIODIC");
  }
  return linalg::singular_values(composite_matrix(n, outer.kind == BoundaryKind::Periodic));
}

Index gap_kernel_dimension(const RealVector& s, double gap) {
  const Index n = s.size();
  for (Index i = 0; i + 1 < n; ++i) {
    if (s(i) > 0.0 && s(i + 1) / s(i) <= gap) return n - 1 - i;
  }
  return 0;
}

KernelReport kernel_certificate(Index n) {
  if (n < 32) throw Error(ErrorCode::GridTooCoarse, "kernel certificate needs n >= 32");
  const Matrix m = composite_matrix(n, false);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();

  KernelReport r;
  r.n = n;
  r.kernel_dim = gap_kernel_dimension(s, tol::kKernelGap);
  r.sigma_small = s(n - 1);
  r.sigma_next = s(n - 2);
  r.gap_ratio = r.sigma_small / r.sigma_next;
  if (r.kernel_dim != 1) {
    throw Error(ErrorCode::UnexpectedKernelDim,
                "kernel dimension " + std::to_string(r.kernel_dim) + ", expected 1", r.gap_ratio);
  }
  const Vector v = svd.matrixV().col(n - 1);
  r.residual = (m * v).norm();

  Vector samples(n + 1);
  samples.head(n) = v;
  samples(n) = v(0);
  GridFunction f = GridFunction(samples).normalized();
  const GridFunction ref =
      GridFunction::sample(n, [](double x) { return Complex(std::exp(x) + std::exp(1.0 - x)); })
          .normalized();
  const Complex overlap = f.inner(ref);
  const Complex align = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
  f = GridFunction(f.samples() * align);
  r.l2_error = GridFunction(f.samples() - ref.samples()).norm();
  r.kernel = std::move(f);
  return r;
}

std::vector<double> periodic_spectrum(Index n, Index m) {
  if (n < 8 || m < 0 || 4 * m > n) {
    throw Error(ErrorCode::GridTooCoarse, "periodic spectrum needs n >= 8 and m <= n/4");
  }
  const double h = 1.0 / static_cast<double>(n);
  Matrix lap = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    lap(j, j) = 2.0 / (h * h);
    lap(j, (j + 1) % n) -= 1.0 / (h * h);
    lap(j, (j + n - 1) % n) -= 1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(lap);
  const Matrix v = es.eigenvectors().leftCols(2 * m + 1);
  const Matrix c = twisted_circulant(n, 1.0);
  const RealVector ev = linalg::hermitian_eigenvalues(v.adjoint() * c * v);
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

}  // namespace regop
