#include "regop/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "regop/errors.hpp"

namespace regop::linalg {

RealVector singular_values(const Matrix& a) {
  if (a.size() == 0) return RealVector(0);
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues();
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

namespace {

double rank_threshold(const RealVector& s, double rel_tol) {
  const double top = s.size() > 0 ? s(0) : 0.0;
  return rel_tol * std::max(top, 1.0);
}

}  // namespace

Index numerical_rank(const Matrix& a, double rel_tol) {
  const RealVector s = singular_values(a);
  const double thr = rank_threshold(s, rel_tol);
  return static_cast<Index>((s.array() > thr).count());
}

Matrix orth(const Matrix& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const RealVector s = svd.singularValues();
  const double thr = rank_threshold(s, rel_tol);
  const Index r = static_cast<Index>((s.array() > thr).count());
  return svd.matrixU().leftCols(r);
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  const double thr = rank_threshold(s, rel_tol);
  const Index r = static_cast<Index>((s.array() > thr).count());
  return svd.matrixV().rightCols(n - r);
}

Matrix complement(const Matrix& frame, Index ambient_dim) {
  const Index d = frame.cols();
  if (d == 0) return Matrix::Identity(ambient_dim, ambient_dim);
  Eigen::HouseholderQR<Matrix> qr(frame);
  Matrix q = qr.householderQ() * Matrix::Identity(ambient_dim, ambient_dim);
  return q.rightCols(ambient_dim - d);
}

Matrix projector(const Matrix& frame) { return frame * frame.adjoint(); }

double containment_residual(const Matrix& big, const Matrix& small) {
  if (small.cols() == 0) return 0.0;
  const Matrix rest = small - big * (big.adjoint() * small);
  return op_norm(rest);
}

double subspace_distance(const Matrix& a, const Matrix& b) {
  return op_norm(projector(a) - projector(b));
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h));
  RealVector ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
  const Matrix& v = es.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Matrix psd_sqrt(const Matrix& a, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  RealVector ev = es.eigenvalues();
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -floor) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(ev(i)) + " below floor");
    }
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const Matrix& v = es.eigenvectors();
  return v * ev.cast<Complex>().asDiagonal() * v.adjoint();
}

Matrix pd_inv_sqrt(const Matrix& a) {
  return hermitian_function(a, [](double x) { return 1.0 / std::sqrt(x); });
}

}  // namespace regop::linalg
