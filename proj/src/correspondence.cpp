#include "regop/correspondence.hpp"

#include <algorithm>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

namespace {

Matrix as_matrix(const Vector& v, Index rows, Index cols) { return v.reshaped(rows, cols); }
Vector as_vector(const Matrix& m) { return m.reshaped(); }

const Matrix& single_fiber(const ModuleVector& v) {
  if (v.index().size() != 1) throw Error(ErrorCode::ShapeMismatch, "expected a single-fiber module");
  return v.fiber(0);
}

// Fits A with A in_j = out_j on span(in); inconsistent data means the map was
// not well defined.
DomainedOperator fit(const Matrix& in, const Matrix& out, const char* what) {
  const Index n = in.rows();
  const Matrix frame = linalg::orth(in);
  if (frame.cols() == 0) return DomainedOperator(Matrix::Zero(n, n), frame);
  const Matrix coeffs = frame.adjoint() * in;  // in = frame * coeffs
  const Matrix pinv = coeffs.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix on_frame = out * pinv;          // images of frame vectors
  const double res = linalg::op_norm(on_frame * coeffs - out);
  const double scale = std::max(1.0, linalg::op_norm(out));
  if (res > tol::kAlg * scale * std::max<double>(1.0, static_cast<double>(in.cols()))) {
    throw Error(ErrorCode::IllDefined, std::string(what) + " is not well defined", res);
  }
  return DomainedOperator(on_frame * frame.adjoint(), frame);
}

void check_dim(const DomainedOperator& op, Index expected, const char* name) {
  if (op.ambient_dim() != expected) {
    throw Error(ErrorCode::ShapeMismatch,
                std::string(name) + " expects ambient dimension " + std::to_string(expected));
  }
}

}  // namespace

RankOneOperator::RankOneOperator(ModuleVector ket, ModuleVector bra)
    : ket_(std::move(ket)), bra_(std::move(bra)) {
  if (!(ket_.index() == bra_.index())) throw Error(ErrorCode::ShapeMismatch, "ket and bra differ");
  if (single_fiber(ket_).rows() != single_fiber(bra_).rows()) {
    throw Error(ErrorCode::ShapeMismatch, "ket and bra differ in row count");
  }
}

Matrix RankOneOperator::matrix() const {
  return single_fiber(ket_) * single_fiber(bra_).adjoint();
}

ModuleVector RankOneOperator::apply(const ModuleVector& z) const {
  return ket_.right_multiply(ModuleVector::inner(bra_, z));
}

RankOneOperator RankOneOperator::compose(const RankOneOperator& o) const {
  return {ket_.right_multiply(ModuleVector::inner(bra_, o.ket_)), o.bra_};
}

ModuleVector module_vector(const ModuleShape& shape, const Matrix& x) {
  if (x.rows() != shape.m || x.cols() != shape.k) {
    throw Error(ErrorCode::ShapeMismatch, "module vector must be m x k");
  }
  return ModuleVector(shape.coefficient_index(), {x});
}

std::vector<RankOneOperator> identity_from_rank_ones(const ModuleShape& shape) {
  std::vector<RankOneOperator> out;
  for (Index i = 0; i < shape.m; ++i) {
    Matrix e = Matrix::Zero(shape.m, shape.k);
    e(i, 0) = 1.0;
    out.emplace_back(module_vector(shape, e), module_vector(shape, e));
  }
  return out;
}

Matrix module_left_multiplication(const Matrix& t, const ModuleShape& shape) {
  return Eigen::kroneckerProduct(Matrix::Identity(shape.k, shape.k), t);
}

Matrix compact_left_multiplication(const Matrix& t, const ModuleShape& shape) {
  return Eigen::kroneckerProduct(Matrix::Identity(shape.m, shape.m), t);
}

DomainedOperator phi1(const DomainedOperator& t, const ModuleShape& shape) {
  check_dim(t, shape.module_dim(), "phi1");
  const Index m = shape.m, k = shape.k;
  const Index count = t.domain_dim() * m * k;
  Matrix in(shape.compact_dim(), count), out(shape.compact_dim(), count);
  Index c = 0;
  for (Index d = 0; d < t.domain_dim(); ++d) {
    const Matrix x = as_matrix(t.frame().col(d), m, k);
    const Matrix tx = as_matrix(t.apply(t.frame().col(d)), m, k);
    for (Index j = 0; j < m * k; ++j) {
      Matrix y = Matrix::Zero(m, k);
      y(j % m, j / m) = 1.0;
      in.col(c) = as_vector(x * y.adjoint());
      out.col(c) = as_vector(tx * y.adjoint());
      ++c;
    }
  }
  return fit(in, out, "phi1");
}

DomainedOperator phi2(const DomainedOperator& s, const ModuleShape& shape) {
  check_dim(s, shape.compact_dim(), "phi2");
  const Index m = shape.m, k = shape.k;
  const Index count = s.domain_dim() * m * k;
  Matrix in(shape.module_dim(), count), out(shape.module_dim(), count);
  Index c = 0;
  for (Index d = 0; d < s.domain_dim(); ++d) {
    const Matrix a = as_matrix(s.frame().col(d), m, m);
    const Matrix sa = as_matrix(s.apply(s.frame().col(d)), m, m);
    for (Index j = 0; j < m * k; ++j) {
      Matrix x = Matrix::Zero(m, k);
      x(j % m, j / m) = 1.0;
      in.col(c) = as_vector(a * x);
      out.col(c) = as_vector(sa * x);
      ++c;
    }
  }
  return fit(in, out, "phi2");
}

namespace {

RoundtripReport compare(const DomainedOperator& round, const DomainedOperator& orig) {
  RoundtripReport r;
  r.inclusion = graph_inclusion(round, orig);
  r.reverse = graph_inclusion(orig, round);
  r.domain_distance = linalg::subspace_distance(round.frame(), orig.frame());
  r.included = r.inclusion.included;
  r.closures_equal = r.inclusion.included && r.reverse.included && r.domain_distance <= tol::kAlg;
  return r;
}

}  // namespace

RoundtripReport roundtrip_check_module(const DomainedOperator& t, const ModuleShape& shape) {
  return compare(phi2(phi1(t, shape), shape), t);
}

RoundtripReport roundtrip_check_compact(const DomainedOperator& s, const ModuleShape& shape) {
  return compare(phi1(phi2(s, shape), shape), s);
}

}  // namespace regop
