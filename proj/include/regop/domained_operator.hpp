#pragma once

#include "regop/types.hpp"

namespace regop {

/// A linear operator read only on an explicit domain subspace.
///
/// The domain is stored as an orthonormal frame (ambient_dim x domain_dim).
/// `action` is a full ambient_dim x ambient_dim matrix, but only its values
/// on the span of the frame carry meaning. A domain equal to the whole
/// ambient space is the finite-dimensional stand-in for a dense domain.
class DomainedOperator {
 public:
  /// `frame` must have orthonormal columns (checked to tol::kAlg).
  DomainedOperator(Matrix action, Matrix frame);

  static DomainedOperator full(Matrix action);
  /// Orthonormalizes an arbitrary spanning set first.
  static DomainedOperator on_span(Matrix action, const Matrix& spanning);

  Index ambient_dim() const { return action_.rows(); }
  Index domain_dim() const { return frame_.cols(); }
  bool has_full_domain() const { return domain_dim() == ambient_dim(); }

  const Matrix& action() const { return action_; }
  const Matrix& frame() const { return frame_; }

  /// action * frame: the operator written in frame coordinates.
  Matrix restricted_action() const { return action_ * frame_; }
  Vector apply(const Vector& v) const { return action_ * v; }

  /// Action replaced by action * P_domain, so that it vanishes off the domain.
  DomainedOperator canonical() const;

  /// Orthonormal frame of G(T) inside ambient (+) ambient.
  Matrix graph_frame() const;

 private:
  Matrix action_;
  Matrix frame_;
};

/// A closed linear relation (multi-valued operator) in ambient (+) ambient,
/// stored as an orthonormal frame. Adjoints of operators whose domain is not
/// the whole space are relations; their multivalued part is D(T)^perp.
class LinearRelation {
 public:
  LinearRelation(Matrix frame, Index ambient_dim);

  static LinearRelation graph_of(const DomainedOperator& op);

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return frame_.cols(); }
  const Matrix& frame() const { return frame_; }

  /// Orthonormal frame of {x : (x, y) in G for some y}.
  Matrix domain_frame() const;
  /// Orthonormal frame of {y : (0, y) in G}.
  Matrix multivalued_frame() const;
  bool is_operator() const { return multivalued_frame().cols() == 0; }

  /// The single-valued part: y chosen orthogonal to the multivalued part.
  DomainedOperator operator_part() const;

 private:
  Matrix frame_;
  Index ambient_;
};

}  // namespace regop
