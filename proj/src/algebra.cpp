#include "regop/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

FiberIndex::FiberIndex(std::vector<std::string> labels, std::vector<Index> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  if (labels_.empty()) throw Error(ErrorCode::ShapeMismatch, "fiber index needs at least one label");
  if (labels_.size() != dims_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "labels and dims differ in length");
  }
  for (Index d : dims_) {
    if (d < 1) throw Error(ErrorCode::ShapeMismatch, "fiber dimension must be >= 1");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) {
        throw Error(ErrorCode::ShapeMismatch, "duplicate fiber label '" + labels_[i] + "'");
      }
    }
  }
}

FiberIndex FiberIndex::uniform(Index points, Index k, std::string_view prefix) {
  std::vector<std::string> labels;
  for (Index i = 0; i < points; ++i) labels.push_back(std::string(prefix) + std::to_string(i));
  return FiberIndex(std::move(labels), std::vector<Index>(static_cast<std::size_t>(points), k));
}

std::size_t FiberIndex::position(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    throw Error(ErrorCode::UnknownFiber, "no fiber labelled '" + std::string(label) + "'");
  }
  return static_cast<std::size_t>(it - labels_.begin());
}

Index FiberIndex::total_dim() const {
  Index s = 0;
  for (Index d : dims_) s += d;
  return s;
}

Index FiberIndex::vectorized_dim() const {
  Index s = 0;
  for (Index d : dims_) s += d * d;
  return s;
}

AlgebraElement::AlgebraElement(FiberIndex index, std::vector<Matrix> fibers)
    : index_(std::move(index)), fibers_(std::move(fibers)) {
  if (fibers_.size() != index_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one matrix per fiber label required");
  }
  for (std::size_t i = 0; i < fibers_.size(); ++i) {
    const Index d = index_.dim(i);
    if (fibers_[i].rows() != d || fibers_[i].cols() != d) {
      throw Error(ErrorCode::ShapeMismatch,
                  "fiber '" + index_.label(i) + "' must be " + std::to_string(d) + "x" +
                      std::to_string(d));
    }
  }
}

AlgebraElement AlgebraElement::zero(const FiberIndex& index) {
  std::vector<Matrix> f;
  for (Index d : index.dims()) f.push_back(Matrix::Zero(d, d));
  return AlgebraElement(index, std::move(f));
}

AlgebraElement AlgebraElement::identity(const FiberIndex& index) {
  std::vector<Matrix> f;
  for (Index d : index.dims()) f.push_back(Matrix::Identity(d, d));
  return AlgebraElement(index, std::move(f));
}

AlgebraElement AlgebraElement::from_block_diagonal(const FiberIndex& index, const Matrix& m) {
  const Index n = index.total_dim();
  if (m.rows() != n || m.cols() != n) {
    throw Error(ErrorCode::ShapeMismatch, "block-diagonal matrix has wrong size");
  }
  std::vector<Matrix> f;
  Matrix rest = m;
  Index off = 0;
  for (Index d : index.dims()) {
    f.push_back(m.block(off, off, d, d));
    rest.block(off, off, d, d).setZero();
    off += d;
  }
  if (rest.norm() > tol::kAlg * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::ShapeMismatch, "matrix is not block diagonal for this index");
  }
  return AlgebraElement(index, std::move(f));
}

double AlgebraElement::norm() const {
  double n = 0.0;
  for (const auto& f : fibers_) n = std::max(n, linalg::op_norm(f));
  return n;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<Matrix> f;
  for (const auto& m : fibers_) f.push_back(m.adjoint());
  return AlgebraElement(index_, std::move(f));
}

bool AlgebraElement::is_hermitian(double tol) const {
  for (const auto& m : fibers_) {
    if ((m - m.adjoint()).norm() > tol * std::max(1.0, m.norm())) return false;
  }
  return true;
}

Matrix AlgebraElement::block_diagonal() const {
  const Index n = index_.total_dim();
  Matrix m = Matrix::Zero(n, n);
  Index off = 0;
  for (const auto& f : fibers_) {
    m.block(off, off, f.rows(), f.cols()) = f;
    off += f.rows();
  }
  return m;
}

namespace {

void require_same_index(const AlgebraElement& a, const AlgebraElement& b) {
  if (!(a.index() == b.index())) throw Error(ErrorCode::ShapeMismatch, "elements of different algebras");
}

}  // namespace

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same_index(*this, o);
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < fibers_.size(); ++i) f.push_back(fibers_[i] + o.fibers_[i]);
  return AlgebraElement(index_, std::move(f));
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same_index(*this, o);
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < fibers_.size(); ++i) f.push_back(fibers_[i] - o.fibers_[i]);
  return AlgebraElement(index_, std::move(f));
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same_index(*this, o);
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < fibers_.size(); ++i) f.push_back(fibers_[i] * o.fibers_[i]);
  return AlgebraElement(index_, std::move(f));
}

AlgebraElement AlgebraElement::operator*(Complex s) const {
  std::vector<Matrix> f;
  for (const auto& m : fibers_) f.push_back(s * m);
  return AlgebraElement(index_, std::move(f));
}

Vector vectorize(const AlgebraElement& a) {
  Vector v(a.index().vectorized_dim());
  Index off = 0;
  for (const auto& f : a.fibers()) {
    v.segment(off, f.size()) = f.reshaped();
    off += f.size();
  }
  return v;
}

AlgebraElement devectorize(const FiberIndex& index, const Vector& v) {
  if (v.size() != index.vectorized_dim()) {
    throw Error(ErrorCode::ShapeMismatch, "vector length does not match the algebra");
  }
  std::vector<Matrix> f;
  Index off = 0;
  for (Index d : index.dims()) {
    f.push_back(v.segment(off, d * d).reshaped(d, d));
    off += d * d;
  }
  return AlgebraElement(index, std::move(f));
}

Matrix left_multiplication_matrix(const AlgebraElement& f) {
  const Index n = f.index().vectorized_dim();
  Matrix m = Matrix::Zero(n, n);
  Index off = 0;
  for (const auto& fib : f.fibers()) {
    const Index d = fib.rows();
    // vec(F X) = (I kron F) vec(X)
    for (Index c = 0; c < d; ++c) m.block(off + c * d, off + c * d, d, d) = fib;
    off += d * d;
  }
  return m;
}

AlgebraElement psd_sqrt(const AlgebraElement& a) {
  if (!a.is_hermitian(tol::kAlg)) throw Error(ErrorCode::NotPSD, "element is not Hermitian");
  const double floor = tol::kPsdRel * std::max(a.norm(), 1e-300);
  std::vector<Matrix> f;
  for (const auto& m : a.fibers()) f.push_back(linalg::psd_sqrt(m, floor));
  return AlgebraElement(a.index(), std::move(f));
}

AlgebraElement localize(const AlgebraElement& a, std::string_view label) {
  const std::size_t pos = a.index().position(label);
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < a.index().size(); ++i) {
    f.push_back(i == pos ? a.fiber(i) : Matrix::Zero(a.index().dim(i), a.index().dim(i)));
  }
  return AlgebraElement(a.index(), std::move(f));
}

DensityVerdict ideal_density_check(std::span<const AlgebraElement> generators) {
  if (generators.empty()) throw Error(ErrorCode::PreconditionViolated, "no generators given");
  const FiberIndex& index = generators.front().index();
  DensityVerdict v;
  v.dense = true;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Index d = index.dim(i);
    Matrix cols(d, d * static_cast<Index>(generators.size()));
    for (std::size_t g = 0; g < generators.size(); ++g) {
      if (!(generators[g].index() == index)) {
        throw Error(ErrorCode::ShapeMismatch, "generators from different algebras");
      }
      cols.middleCols(static_cast<Index>(g) * d, d) = generators[g].fiber(i);
    }
    const Index r = linalg::numerical_rank(cols);
    v.column_rank_per_fiber.push_back(r);
    v.dense_per_fiber.push_back(r == d);
    v.dense = v.dense && (r == d);
  }
  return v;
}

AlgebraElement multiplier_symbol_extract(const DomainedOperator& op, const FiberIndex& index) {
  if (op.ambient_dim() != index.vectorized_dim()) {
    throw Error(ErrorCode::ShapeMismatch, "operator does not act on this algebra");
  }
  const AlgebraElement one = AlgebraElement::identity(index);
  std::vector<Matrix> symbol;
  for (std::size_t i = 0; i < index.size(); ++i) {
    const Vector indicator = vectorize(localize(one, index.label(i)));
    const double outside = linalg::containment_residual(op.frame(), indicator.normalized());
    if (outside > tol::kGraph) {
      throw Error(ErrorCode::DomainViolation,
                  "indicator of fiber '" + index.label(i) + "' is not in the domain", outside);
    }
    const AlgebraElement image = devectorize(index, op.apply(indicator));
    symbol.push_back(image.fiber(i));
  }
  AlgebraElement f(index, std::move(symbol));

  const Matrix lf = left_multiplication_matrix(f);
  const Matrix diff = op.restricted_action() - lf * op.frame();
  double worst = 0.0;
  for (Index c = 0; c < diff.cols(); ++c) worst = std::max(worst, diff.col(c).norm());
  if (worst > tol::kAlg * (1.0 + f.norm())) {
    throw Error(ErrorCode::NotMultiplication, "operator is not a multiplier on its domain", worst);
  }
  return f;
}

ModuleVector::ModuleVector(FiberIndex index, std::vector<Matrix> fibers)
    : index_(std::move(index)), fibers_(std::move(fibers)) {
  if (fibers_.size() != index_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "one matrix per fiber label required");
  }
  for (std::size_t i = 0; i < fibers_.size(); ++i) {
    if (fibers_[i].cols() != index_.dim(i)) {
      throw Error(ErrorCode::ShapeMismatch,
                  "module fiber '" + index_.label(i) + "' has the wrong column count");
    }
  }
}

AlgebraElement ModuleVector::inner(const ModuleVector& x, const ModuleVector& y) {
  if (!(x.index_ == y.index_)) throw Error(ErrorCode::ShapeMismatch, "vectors of different modules");
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < x.fibers_.size(); ++i) {
    if (x.fibers_[i].rows() != y.fibers_[i].rows()) {
      throw Error(ErrorCode::ShapeMismatch, "module fibers differ in row count");
    }
    f.push_back(x.fibers_[i].adjoint() * y.fibers_[i]);
  }
  return AlgebraElement(x.index_, std::move(f));
}

ModuleVector ModuleVector::right_multiply(const AlgebraElement& a) const {
  if (!(a.index() == index_)) throw Error(ErrorCode::ShapeMismatch, "element of a different algebra");
  std::vector<Matrix> f;
  for (std::size_t i = 0; i < fibers_.size(); ++i) f.push_back(fibers_[i] * a.fiber(i));
  return ModuleVector(index_, std::move(f));
}

}  // namespace regop
