#include "regop/domained_operator.hpp"

#include <string>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/tolerances.hpp"

namespace regop {

DomainedOperator::DomainedOperator(Matrix action, Matrix frame)
    : action_(std::move(action)), frame_(std::move(frame)) {
  if (action_.rows() != action_.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "action must be square");
  }
  if (frame_.rows() != action_.rows()) {
    throw Error(ErrorCode::ShapeMismatch, "frame rows must equal ambient dimension");
  }
  const Index d = frame_.cols();
  const double defect = (frame_.adjoint() * frame_ - Matrix::Identity(d, d)).norm();
  if (defect > tol::kAlg * std::max<double>(1.0, static_cast<double>(d))) {
    throw Error(ErrorCode::ShapeMismatch,
                "domain frame is not orthonormal (defect " + std::to_string(defect) + ")", defect);
  }
}

DomainedOperator DomainedOperator::full(Matrix action) {
  const Index n = action.rows();
  return DomainedOperator(std::move(action), Matrix::Identity(n, n));
}

DomainedOperator DomainedOperator::on_span(Matrix action, const Matrix& spanning) {
  return DomainedOperator(std::move(action), linalg::orth(spanning));
}

DomainedOperator DomainedOperator::canonical() const {
  return DomainedOperator(action_ * linalg::projector(frame_), frame_);
}

Matrix DomainedOperator::graph_frame() const {
  const Index n = ambient_dim();
  Matrix stacked(2 * n, domain_dim());
  stacked.topRows(n) = frame_;
  stacked.bottomRows(n) = action_ * frame_;
  // the top block is orthonormal, so the stack has full column rank
  Eigen::HouseholderQR<Matrix> qr(stacked);
  return qr.householderQ() * Matrix::Identity(2 * n, domain_dim());
}

LinearRelation::LinearRelation(Matrix frame, Index ambient_dim)
    : frame_(std::move(frame)), ambient_(ambient_dim) {
  if (frame_.rows() != 2 * ambient_) {
    throw Error(ErrorCode::ShapeMismatch, "relation frame must have 2 * ambient rows");
  }
}

LinearRelation LinearRelation::graph_of(const DomainedOperator& op) {
  return LinearRelation(op.graph_frame(), op.ambient_dim());
}

Matrix LinearRelation::domain_frame() const { return linalg::orth(frame_.topRows(ambient_)); }

Matrix LinearRelation::multivalued_frame() const {
  const Matrix top = frame_.topRows(ambient_);
  const Matrix kernel = linalg::null_space(top);
  if (kernel.cols() == 0) return Matrix(ambient_, 0);
  return linalg::orth(frame_.bottomRows(ambient_) * kernel);
}

DomainedOperator LinearRelation::operator_part() const {
  const Index n = ambient_;
  const Matrix top = frame_.topRows(n);
  const Matrix bottom = frame_.bottomRows(n);
  if (top.cols() == 0) return DomainedOperator(Matrix::Zero(n, n), Matrix(n, 0));

  Eigen::BDCSVD<Matrix> svd(top, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector s = svd.singularValues();
  const double thr = tol::kRank * std::max(s(0), 1.0);
  const Index r = static_cast<Index>((s.array() > thr).count());
  const Matrix u = svd.matrixU().leftCols(r);
  const Matrix v = svd.matrixV().leftCols(r);
  const RealVector inv_s = s.head(r).cwiseInverse();
  const Matrix pinv = v * inv_s.cast<Complex>().asDiagonal() * u.adjoint();

  Matrix action = bottom * pinv;
  const Matrix mul = multivalued_frame();
  if (mul.cols() > 0) action -= mul * (mul.adjoint() * action);
  return DomainedOperator(std::move(action), u);
}

}  // namespace regop
