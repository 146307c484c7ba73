#pragma once

#include <functional>

#include "regop/tolerances.hpp"
#include "regop/types.hpp"

/// Dense helpers shared by every module: ranks, frames, subspaces and
/// Hermitian functional calculus.
namespace regop::linalg {

RealVector singular_values(const Matrix& a);
double op_norm(const Matrix& a);

// Singular values below rel_tol * max(sigma_max, 1) count as zero.
Index numerical_rank(const Matrix& a, double rel_tol = tol::kRank);

/// Orthonormal basis of range(a).
Matrix orth(const Matrix& a, double rel_tol = tol::kRank);
/// Orthonormal basis of ker(a).
Matrix null_space(const Matrix& a, double rel_tol = tol::kRank);
/// Orthonormal basis of the orthogonal complement of an orthonormal frame.
Matrix complement(const Matrix& frame, Index ambient_dim);

Matrix projector(const Matrix& frame);

/// Largest distance from a unit vector of span(small) to span(big).
double containment_residual(const Matrix& big, const Matrix& small);
/// ||P_a - P_b||, zero iff the spans agree.
double subspace_distance(const Matrix& a, const Matrix& b);

Matrix hermitian_part(const Matrix& a);

/// f applied to the eigenvalues of a Hermitian matrix.
Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f);

RealVector hermitian_eigenvalues(const Matrix& h);

/// Unique PSD square root; eigenvalues in [-floor, 0) are clipped to zero.
/// Throws Error(NotPSD) below -floor.
Matrix psd_sqrt(const Matrix& a, double floor);

/// Inverse square root of a positive definite Hermitian matrix.
Matrix pd_inv_sqrt(const Matrix& a);

}  // namespace regop::linalg
