#pragma once

#include <functional>
#include <string>
#include <vector>

#include "regop/domained_operator.hpp"
#include "regop/types.hpp"

/// Finite-difference realizations of T f = i f' on [0, 1] with the boundary
/// conditions D (maximal), D0 (periodic), D00 (minimal) and twisted variants.
namespace regop {

enum class BoundaryKind { Maximal, Periodic, Minimal, Twisted };

struct BoundaryTag {
  BoundaryKind kind = BoundaryKind::Maximal;
  double theta = 0.0;  // only for Twisted, reduced to [0, 2 pi)

  static BoundaryTag maximal() { return {BoundaryKind::Maximal, 0.0}; }
  static BoundaryTag periodic() { return {BoundaryKind::Periodic, 0.0}; }
  static BoundaryTag minimal() { return {BoundaryKind::Minimal, 0.0}; }
  static BoundaryTag twisted(double theta);

  /// e^{i theta}; 1 for Periodic.
  Complex phase() const;
  std::string name() const;
  bool operator==(const BoundaryTag&) const = default;
};

/// Full: nodes x_0..x_n with trapezoid weights. Every tag is available.
/// Periodic: nodes x_0..x_{n-1}, x_n identified with x_0 (up to the twist).
/// Only Periodic, Twisted and Minimal are available; Maximal has no room.
enum class GridLayout { Full, Periodic };

/// Samples at the n+1 nodes j/n.
class GridFunction {
 public:
  GridFunction(Vector samples);
  static GridFunction sample(Index n, const std::function<Complex(double)>& f);

  Index steps() const { return samples_.size() - 1; }
  double h() const { return 1.0 / static_cast<double>(steps()); }
  const Vector& samples() const { return samples_; }
  RealVector nodes() const;

  /// Trapezoid rule.
  Complex inner(const GridFunction& o) const;
  double norm() const;
  GridFunction normalized() const;

 private:
  Vector samples_;
};

/// i d/dx on a uniform grid. Coordinates are Euclidean: a grid function f is
/// stored as W^{1/2} f so the trapezoid product is the plain one.
class GridOperator {
 public:
  GridOperator(Index n, BoundaryTag tag, GridLayout layout, Matrix action, Matrix frame);

  Index n() const { return n_; }
  double h() const { return 1.0 / static_cast<double>(n_); }
  const BoundaryTag& tag() const { return tag_; }
  GridLayout layout() const { return layout_; }
  Index dim() const { return action_.rows(); }
  const Matrix& matrix() const { return action_; }
  const Matrix& frame() const { return frame_; }

  DomainedOperator as_domained() const { return DomainedOperator(action_, frame_); }

  /// Grid function -> Euclidean coordinates of this layout.
  Vector embed(const GridFunction& f) const;
  /// Euclidean coordinates -> nodal values (length dim()).
  Vector nodal(const Vector& y) const;

  /// Rows c with c f = 0 exactly on the domain, in nodal values.
  Matrix constraint_rows() const;

 private:
  Index n_;
  BoundaryTag tag_;
  GridLayout layout_;
  Matrix action_;
  Matrix frame_;
};

/// Throws GridTooCoarse for n < 8 and PreconditionViolated for a Maximal tag
/// in the Periodic layout.
GridOperator build_derivative(Index n, BoundaryTag tag, GridLayout layout = GridLayout::Full);

struct KernelReport {
  Index n = 0;
  GridFunction kernel{Vector::Zero(2)};
  Index kernel_dim = 0;
  double sigma_small = 0.0;
  double sigma_next = 0.0;
  double gap_ratio = 0.0;      // sigma_small / sigma_next
  double residual = 0.0;       // |M v| for the unit kernel vector
  double l2_error = 0.0;       // against normalized exp(x) + exp(1 - x)
};

/// Singular values (descending) of the discrete I - d^2/dx^2 with the inner
/// factor periodic and the outer factor given by `outer` (Maximal or Periodic).
RealVector composite_singular_values(Index n, BoundaryTag outer);

/// Number of trailing singular values split off by a ratio jump of `gap`.
Index gap_kernel_dimension(const RealVector& descending, double gap);

/// Kernel of I + T T0. Throws GridTooCoarse (n < 32) or UnexpectedKernelDim.
KernelReport kernel_certificate(Index n);

/// The 2m+1 eigenvalues of the periodic derivative belonging to the lowest
/// Fourier modes, ascending. Throws GridTooCoarse unless 8 <= n and m <= n/4.
std::vector<double> periodic_spectrum(Index n, Index m);

}  // namespace regop
