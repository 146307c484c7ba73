#pragma once

#include <vector>

#include "regop/algebra.hpp"
#include "regop/domained_operator.hpp"
#include "regop/unbounded.hpp"

/// phi1 / phi2 between operators on E = M_{m x k} (a right M_k-module) and
/// operators on K(E) = M_m. E is vectorized column-major (length m k), K(E)
/// likewise (length m^2).
namespace regop {

struct ModuleShape {
  Index m = 1;  // rows of a module vector
  Index k = 1;  // fiber size of the coefficient algebra M_k

  Index module_dim() const { return m * k; }
  Index compact_dim() const { return m * m; }
  FiberIndex coefficient_index() const { return FiberIndex({"A"}, {k}); }
};

/// |x><y| : z -> x <y, z>.
class RankOneOperator {
 public:
  RankOneOperator(ModuleVector ket, ModuleVector bra);

  const ModuleVector& ket() const { return ket_; }
  const ModuleVector& bra() const { return bra_; }

  /// As an element of M_m.
  Matrix matrix() const;
  ModuleVector apply(const ModuleVector& z) const;
  RankOneOperator adjoint() const { return {bra_, ket_}; }
  /// |x><y| |x'><y'| = |x <y, x'>><y'|
  RankOneOperator compose(const RankOneOperator& o) const;

 private:
  ModuleVector ket_;
  ModuleVector bra_;
};

ModuleVector module_vector(const ModuleShape& shape, const Matrix& x);

/// sum_i |e_i><e_i| with e_i the first-column unit vectors; equals 1 in K(E).
std::vector<RankOneOperator> identity_from_rank_ones(const ModuleShape& shape);

/// phi1(T) |x><y| = |Tx><y| on span{|x><y| : x in D_T}.
/// Throws IllDefined if T is not right-A-linear on its domain.
DomainedOperator phi1(const DomainedOperator& t, const ModuleShape& shape);

/// phi2(S)(a x) = (S a) x on span{a x : a in D_S}.
/// Throws IllDefined when two representations of a vector disagree.
DomainedOperator phi2(const DomainedOperator& s, const ModuleShape& shape);

/// Matrix of left multiplication by `t` (m x m) on E, i.e. I_k kron t.
Matrix module_left_multiplication(const Matrix& t, const ModuleShape& shape);
/// Same on K(E): I_m kron t.
Matrix compact_left_multiplication(const Matrix& t, const ModuleShape& shape);

struct RoundtripReport {
  InclusionResult inclusion;       // round trip subset original
  InclusionResult reverse;         // original subset round trip
  double domain_distance = 0.0;    // ||P_D - P_D'||
  bool included = false;
  bool closures_equal = false;
};

/// phi2(phi1(T)) against T on E.
RoundtripReport roundtrip_check_module(const DomainedOperator& t, const ModuleShape& shape);
/// phi1(phi2(S)) against S on K(E).
RoundtripReport roundtrip_check_compact(const DomainedOperator& s, const ModuleShape& shape);

}  // namespace regop
