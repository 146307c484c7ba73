#include "regop/unbounded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regop/errors.hpp"
#include "regop/linalg.hpp"

namespace regop {

namespace {

double gap_of(const Matrix& z) {
  const Index n = z.cols();
  if (n == 0) return 1.0;
  const Matrix defect = Matrix::Identity(n, n) - z.adjoint() * z;
  return linalg::hermitian_eigenvalues(defect)(0);
}

// Scale for relative checks on contractions and unitaries.
double rel(double tol_value, double scale) { return tol_value * std::max(1.0, scale); }

}  // namespace

ZTransform ZTransform::of(Matrix z) {
  if (z.rows() != z.cols()) throw Error(ErrorCode::ShapeMismatch, "z must be square");
  ZTransform out;
  out.density_gap = gap_of(z);
  out.z = std::move(z);
  return out;
}

ZTransform z_transform(const DomainedOperator& t) {
  const Index n = t.ambient_dim();
  const Index d = t.domain_dim();
  const Matrix td = t.restricted_action();
  const Matrix resolvent = Matrix::Identity(d, d) + td.adjoint() * td;
  if (d > 0) {
    const RealVector ev = linalg::hermitian_eigenvalues(resolvent);
    const double cond = ev(d - 1) / ev(0);
    if (!(cond <= tol::kResolventCond)) {
      throw Error(ErrorCode::SingularResolvent,
                  "1 + T*T has condition number " + std::to_string(cond), cond);
    }
  }
  Matrix z = Matrix::Zero(n, n);
  if (d > 0) z = td * linalg::pd_inv_sqrt(resolvent) * t.frame().adjoint();
  return ZTransform::of(std::move(z));
}

DomainedOperator from_z(const ZTransform& z, double tol_gap) {
  if (!(z.density_gap > tol_gap)) {
    throw Error(ErrorCode::NotDense,
                "density gap " + std::to_string(z.density_gap) + " is not above tolerance",
                z.density_gap);
  }
  const Index n = z.dim();
  const Matrix defect = Matrix::Identity(n, n) - z.z.adjoint() * z.z;
  const Matrix root = linalg::psd_sqrt(defect, tol::kPsdRel);
  Matrix action = z.z * linalg::pd_inv_sqrt(defect);
  return DomainedOperator(std::move(action), linalg::orth(root));
}

LinearRelation adjoint_relation(const DomainedOperator& t) {
  const Index n = t.ambient_dim();
  const Matrix g = t.graph_frame();
  const Matrix perp = linalg::complement(g, 2 * n);
  Matrix frame(2 * n, perp.cols());
  frame.topRows(n) = -perp.bottomRows(n);
  frame.bottomRows(n) = perp.topRows(n);
  return LinearRelation(std::move(frame), n);
}

DomainedOperator adjoint_via_graph(const DomainedOperator& t) {
  return adjoint_relation(t).operator_part();
}

bool GraphPair::in_graph(const DomainedOperator& t, double tol_graph) const {
  if (left.size() != t.ambient_dim() || right.size() != t.ambient_dim()) {
    throw Error(ErrorCode::ShapeMismatch, "graph pair does not match the operator");
  }
  const Vector inside = t.frame() * (t.frame().adjoint() * left);
  if ((left - inside).norm() > tol_graph * (1.0 + left.norm())) return false;
  return (t.action() * inside - right).norm() <= tol_graph * (1.0 + right.norm());
}

InclusionResult graph_inclusion(const DomainedOperator& s, const DomainedOperator& t,
                                double tol_graph) {
  if (s.ambient_dim() != t.ambient_dim()) {
    throw Error(ErrorCode::ShapeMismatch, "graph inclusion needs one ambient space");
  }
  InclusionResult r;
  r.included = true;
  const Matrix& q = s.frame();
  const Matrix inside = t.frame() * (t.frame().adjoint() * q);
  const Matrix s_img = s.action() * q;
  const Matrix t_img = t.action() * inside;
  for (Index c = 0; c < q.cols(); ++c) {
    const double dom = (q.col(c) - inside.col(c)).norm();
    const double act = (t_img.col(c) - s_img.col(c)).norm();
    r.domain_residual = std::max(r.domain_residual, dom);
    r.action_residual = std::max(r.action_residual, act);
    if (dom > tol_graph || act > tol_graph * (1.0 + s_img.col(c).norm())) r.included = false;
  }
  return r;
}

namespace {

Matrix unitary_matrix(const AlgebraElement& u, Index n) {
  Matrix m = u.block_diagonal();
  if (m.rows() != n) throw Error(ErrorCode::ShapeMismatch, "u does not act on the z space");
  return m;
}

}  // namespace

ZTransform restrict_via_isometry(const ZTransform& z, const AlgebraElement& u) {
  const Index n = z.dim();
  const Matrix um = unitary_matrix(u, n);
  const Matrix id = Matrix::Identity(n, n);
  const double iso = (um.adjoint() * um - id).norm();
  if (iso > rel(tol::kAlg, std::sqrt(static_cast<double>(n)))) {
    throw Error(ErrorCode::NotIsometry, "u*u differs from the identity", iso);
  }
  const Matrix defect = id - z.z.adjoint() * z.z;
  const Matrix lhs = linalg::psd_sqrt(um.adjoint() * defect * um, tol::kPsdRel);
  const Matrix rhs = linalg::psd_sqrt(defect, tol::kPsdRel) * um;
  const double res = linalg::op_norm(lhs - rhs);
  if (res > tol::kAlg) {
    throw Error(ErrorCode::Eq61Violated,
                "(u*(1-z*z)u)^{1/2} != (1-z*z)^{1/2} u, residual " + std::to_string(res), res);
  }
  return ZTransform::of(z.z * um);
}

ZTransform extend_via_coisometry(const ZTransform& z, const AlgebraElement& u) {
  const Index n = z.dim();
  const Matrix um = unitary_matrix(u, n);
  const Matrix id = Matrix::Identity(n, n);
  const double coiso = (um * um.adjoint() - id).norm();
  if (coiso > rel(tol::kAlg, std::sqrt(static_cast<double>(n)))) {
    throw Error(ErrorCode::NotCoisometry, "uu* differs from the identity", coiso);
  }
  const Matrix defect = id - z.z * z.z.adjoint();
  const Matrix lhs = linalg::psd_sqrt(um * defect * um.adjoint(), tol::kPsdRel);
  const Matrix rhs = um * linalg::psd_sqrt(defect, tol::kPsdRel);
  const double res = linalg::op_norm(lhs - rhs);
  if (res > tol::kAlg) {
    throw Error(ErrorCode::Eq62Violated,
                "(u(1-zz*)u*)^{1/2} != u (1-zz*)^{1/2}, residual " + std::to_string(res), res);
  }
  return ZTransform::of(um * z.z);
}

RestrictionWitness restriction_witness(const ZTransform& z_t, const ZTransform& z_s,
                                       double tol_gap) {
  if (z_t.dim() != z_s.dim()) throw Error(ErrorCode::ShapeMismatch, "z sizes differ");
  if (!(z_t.density_gap > tol_gap) || !(z_s.density_gap > tol_gap)) {
    throw Error(ErrorCode::NotDense, "restriction witness needs positive density gaps");
  }
  const Index n = z_t.dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix dt = id - z_t.z.adjoint() * z_t.z;
  const Matrix ds = id - z_s.z.adjoint() * z_s.z;
  RestrictionWitness out;
  out.w = linalg::pd_inv_sqrt(dt) * linalg::psd_sqrt(ds, tol::kPsdRel);
  const double r1 = linalg::op_norm(z_s.z - z_t.z * out.w);
  const double r2 = linalg::op_norm(out.w.adjoint() * dt * out.w - ds);
  out.residual = std::max(r1, r2);
  if (out.residual > tol::kAlg * std::max(1.0, 1.0 / z_t.density_gap)) {
    throw Error(ErrorCode::NotRestriction,
                "z_S is not z_T w, residual " + std::to_string(out.residual), out.residual);
  }
  out.is_isometry = (out.w.adjoint() * out.w - id).norm() <= rel(tol::kAlg, std::sqrt(double(n)));
  return out;
}

}  // namespace regop
