#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "regop/domained_operator.hpp"
#include "regop/types.hpp"

/// Finite-dimensional C*-algebras  A = (+)_i M_{d_i}  (which also covers
/// C(X, M_k) for finite X), their elements, and Hilbert A-module vectors.
namespace regop {

/// The finite spectrum of A: one label and matrix size per irreducible fiber.
class FiberIndex {
 public:
  FiberIndex(std::vector<std::string> labels, std::vector<Index> dims);

  /// C(X, M_k) with X = {x0, x1, ...}.
  static FiberIndex uniform(Index points, Index k, std::string_view prefix = "x");

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  Index dim(std::size_t i) const { return dims_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Index>& dims() const { return dims_; }

  /// Throws Error(UnknownFiber).
  std::size_t position(std::string_view label) const;

  Index total_dim() const;          // sum of d_i
  Index vectorized_dim() const;     // sum of d_i^2

  bool operator==(const FiberIndex&) const = default;

 private:
  std::vector<std::string> labels_;
  std::vector<Index> dims_;
};

class AlgebraElement {
 public:
  AlgebraElement(FiberIndex index, std::vector<Matrix> fibers);

  static AlgebraElement zero(const FiberIndex& index);
  static AlgebraElement identity(const FiberIndex& index);
  /// Block-diagonal matrix back to an element; off-diagonal blocks must vanish.
  static AlgebraElement from_block_diagonal(const FiberIndex& index, const Matrix& m);

  const FiberIndex& index() const { return index_; }
  const Matrix& fiber(std::size_t i) const { return fibers_[i]; }
  const Matrix& fiber(std::string_view label) const { return fibers_[index_.position(label)]; }
  const std::vector<Matrix>& fibers() const { return fibers_; }

  /// max over fibers of the fiber operator norm.
  double norm() const;
  AlgebraElement adjoint() const;
  bool is_hermitian(double tol) const;

  /// Image in the faithful representation on (+)_i C^{d_i}.
  Matrix block_diagonal() const;

  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator*(Complex s) const;

 private:
  FiberIndex index_;
  std::vector<Matrix> fibers_;
};

/// Column-major vectorization of each fiber, fibers concatenated in order.
/// This is the coordinate space on which operators on A (as a module over
/// itself) act.
Vector vectorize(const AlgebraElement& a);
AlgebraElement devectorize(const FiberIndex& index, const Vector& v);

/// Left multiplication by f, as a matrix on vectorized coordinates.
Matrix left_multiplication_matrix(const AlgebraElement& f);

AlgebraElement psd_sqrt(const AlgebraElement& a);

/// The element supported on the single fiber `label`.
AlgebraElement localize(const AlgebraElement& a, std::string_view label);

struct DensityVerdict {
  std::vector<bool> dense_per_fiber;
  std::vector<Index> column_rank_per_fiber;
  bool dense = false;
};

/// Whether the right ideal generated by `generators` is dense, fiber by fiber.
/// In finite dimension dense means everything: the generators' column spaces
/// must jointly span C^{d} in every fiber.
DensityVerdict ideal_density_check(std::span<const AlgebraElement> generators);

/// The f with T g = f g on the domain of an A-linear operator T on A.
/// T acts on vectorized coordinates of `index`. Throws NotMultiplication.
AlgebraElement multiplier_symbol_extract(const DomainedOperator& op, const FiberIndex& index);

/// An element of the Hilbert A-module (+)_i M_{r_i x d_i}.
class ModuleVector {
 public:
  ModuleVector(FiberIndex index, std::vector<Matrix> fibers);

  const FiberIndex& index() const { return index_; }
  const Matrix& fiber(std::size_t i) const { return fibers_[i]; }

  /// <x, y> = x^* y fiberwise.
  static AlgebraElement inner(const ModuleVector& x, const ModuleVector& y);
  ModuleVector right_multiply(const AlgebraElement& a) const;

 private:
  FiberIndex index_;
  std::vector<Matrix> fibers_;
};

}  // namespace regop
