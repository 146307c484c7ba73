#pragma once

#include <algorithm>

#include "regop/algebra.hpp"
#include "regop/domained_operator.hpp"
#include "regop/tolerances.hpp"
#include "regop/types.hpp"

namespace regop {

/// Bounded transform of an operator plus the smallest eigenvalue of 1 - z*z.
struct ZTransform {
  Matrix z;
  double density_gap = 0.0;

  /// Wraps a contraction, computing its gap.
  static ZTransform of(Matrix z);
  Index dim() const { return z.rows(); }
};

/// z = T (1 + T*T)^{-1/2}, read on the domain and extended by 0 off it.
/// Throws SingularResolvent when the condition number of 1 + T*T passes 1e14.
ZTransform z_transform(const DomainedOperator& t);

/// T = z (1 - z*z)^{-1/2} on range (1 - z*z)^{1/2}. Throws NotDense.
DomainedOperator from_z(const ZTransform& z, double tol_gap = tol::kGap);

/// tau^{-1} of the orthogonal complement of G(T). Multivalued when D(T) is not
/// the whole space; the multivalued part is then D(T)^perp.
LinearRelation adjoint_relation(const DomainedOperator& t);
/// Single-valued part of adjoint_relation. Equal to action^* for full domains.
DomainedOperator adjoint_via_graph(const DomainedOperator& t);

/// An element a (+) b of ambient (+) ambient.
struct GraphPair {
  Vector left;
  Vector right;

  /// a (+) b -> b (+) (-a)
  GraphPair tau() const { return {right, -left}; }
  GraphPair tau_inverse() const { return {-right, left}; }
  bool in_graph(const DomainedOperator& t, double tol_graph = tol::kGraph) const;
};

struct InclusionResult {
  bool included = false;
  double domain_residual = 0.0;
  double action_residual = 0.0;  // absolute, worst frame vector
  double residual() const { return std::max(domain_residual, action_residual); }
};

/// S subset T: every domain vector of S lies in D(T) and T agrees with S on it.
InclusionResult graph_inclusion(const DomainedOperator& s, const DomainedOperator& t,
                                double tol_graph = tol::kGraph);

/// z_S = z u for an isometry u satisfying (u*(1-z*z)u)^{1/2} = (1-z*z)^{1/2} u.
/// Throws NotIsometry or Eq61Violated (residual attached).
ZTransform restrict_via_isometry(const ZTransform& z, const AlgebraElement& u);

/// z_S = u z for a coisometry u satisfying (u(1-zz*)u*)^{1/2} = u (1-zz*)^{1/2}.
/// Throws NotCoisometry or Eq62Violated.
ZTransform extend_via_coisometry(const ZTransform& z, const AlgebraElement& u);

struct RestrictionWitness {
  Matrix w;
  bool is_isometry = false;
  double residual = 0.0;
};

/// w = (1 - z_T*z_T)^{-1/2} (1 - z_S*z_S)^{1/2}, checked against
/// z_S = z_T w and w*(1 - z_T*z_T)w = 1 - z_S*z_S. Throws NotRestriction.
RestrictionWitness restriction_witness(const ZTransform& z_t, const ZTransform& z_s,
                                       double tol_gap = tol::kGap);

}  // namespace regop
