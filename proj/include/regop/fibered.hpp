#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regop/algebra.hpp"
#include "regop/diffop.hpp"
#include "regop/domained_operator.hpp"
#include "regop/unbounded.hpp"

/// Operator fields pi -> T_pi over a finite grid of [0, 1] (or over a finite
/// X), with continuity surrogated by adjacent-fiber comparisons.
namespace regop {

class FiberedOperator {
 public:
  /// pi_grid strictly increasing, starting at 0; one fiber per grid point,
  /// all on one ambient space. `tags` is empty or one tag per fiber.
  FiberedOperator(std::vector<double> pi_grid, std::vector<DomainedOperator> fibers,
                  std::vector<BoundaryTag> tags = {});

  std::size_t size() const { return fibers_.size(); }
  Index ambient_dim() const { return fibers_.front().ambient_dim(); }
  const std::vector<double>& pi_grid() const { return pi_grid_; }
  const DomainedOperator& fiber(std::size_t i) const { return fibers_[i]; }
  const std::vector<DomainedOperator>& fibers() const { return fibers_; }
  /// Tag of fiber i when the field was assembled from grid operators.
  std::optional<BoundaryTag> tag(std::size_t i) const;

  /// ||z_{i+1} - z_i||, empty until zfield has run.
  const std::vector<double>& continuity_profile() const { return profile_; }
  void set_continuity_profile(std::vector<double> p);

  /// max ||U_{i+1} - U_i|| for gauge-built fields.
  std::optional<double> gauge_modulus() const { return gauge_modulus_; }
  void set_gauge_modulus(double m) { gauge_modulus_ = m; }

 private:
  std::vector<double> pi_grid_;
  std::vector<DomainedOperator> fibers_;
  std::vector<BoundaryTag> tags_;
  std::vector<double> profile_;
  std::optional<double> gauge_modulus_;
};

/// Uniform grid i / (count - 1).
std::vector<double> uniform_pi_grid(Index count);

/// The counterexample: MINIMAL derivative at pi = 0, PERIODIC at pi > 0, in
/// the periodic grid layout. Throws GridTooCoarse for n_pi < 2 or n_x < 32.
FiberedOperator build_counterexample_t(Index n_pi, Index n_x);

/// Continuity modulus used when none is given: 10x the gauge modulus for
/// gauge-built fields, 1e-6 otherwise.
double default_modulus(const FiberedOperator& f);

/// Keeps, in each fiber's graph, the directions within `modulus` (principal
/// angle sine) of the neighbouring fiber's graph. The neighbour is i + 1, or
/// i - 1 for the last fiber (unless that is fiber 0). An infinite modulus
/// keeps everything.
std::vector<LinearRelation> continuity_restrict(const std::vector<LinearRelation>& fibers,
                                                double modulus);

/// Fiberwise adjoint relations, glued, then made single valued.
FiberedOperator fibered_adjoint(const FiberedOperator& f, std::optional<double> modulus = {});

/// Fiberwise closures (no-ops at finite size), glued.
FiberedOperator tilde_extension(const FiberedOperator& f, std::optional<double> modulus = {});

struct ZFieldReport {
  std::vector<ZTransform> z;
  std::vector<double> gaps;
  std::vector<double> deviations;   // J_i = ||z_{i+1} - z_i||
  double median = 0.0;
  double threshold = 0.0;           // max(10 * median, tol_alg)
  std::vector<std::size_t> jumps;   // i with J_i > threshold
};

/// z-transforms per fiber plus the jump profile. Also stores the profile on f.
ZFieldReport zfield(FiberedOperator& f);

/// max_x ||(I + T_x*T_x) a(x) - ((I + T*T) a)(x)||, the second term computed
/// on the assembled operator over vectorized A = C(X, M_k). The field's
/// fibers act on C^k and a.index() must have one label per fiber.
/// Throws DomainViolation if a column of a(x) leaves D(T_x).
double fiber_identity_check(const FiberedOperator& t, const AlgebraElement& a);

struct FiberInclusion {
  double pi = 0.0;
  InclusionResult result;
};

struct ExtensionReport {
  std::vector<FiberInclusion> fibers;
  std::vector<double> failing_pi;
  bool fiberwise = false;
  bool s_in_s_tilde = false;
  bool s_tilde_in_t_tilde = false;
  bool t_tilde_is_t = false;
  bool included = false;
};

/// S_pi subset T_pi for all pi, plus the chain S subset S~ subset T~ = T.
/// Tilde extensions use `modulus` when given, else each field's default.
ExtensionReport extension_inclusion_check(const FiberedOperator& s, const FiberedOperator& t,
                                          double tol_graph = tol::kGraph,
                                          std::optional<double> modulus = {});

/// Per fiber: how far G(T_pi) is from the span of the graph over D(T_pi*T_pi).
std::vector<double> core_check(const FiberedOperator& f);

/// Tag whose domain (and, if asked, action) the operator reproduces.
std::optional<BoundaryTag> identify_tag(const DomainedOperator& op, Index n, GridLayout layout,
                                        bool check_action = true, double tol = 1e-9);

/// U_pi = multiplication by exp(i g(pi, x)) on grid nodes.
class GaugeField {
 public:
  using Generator = std::function<double(double pi, double x)>;

  GaugeField(std::vector<double> pi_grid, Index n_x, Generator g);

  /// g(pi, x) = pi x: multiplication by e^{i pi x}.
  static GaugeField linear_phase(std::vector<double> pi_grid, Index n_x);
  /// Rows of `samples` are g(table_pi[r], x_j), j = 0..n_x; linear in pi between rows.
  static GaugeField from_table(std::vector<double> table_pi, const RealMatrix& samples,
                               std::vector<double> pi_grid);

  const std::vector<double>& pi_grid() const { return pi_grid_; }
  Index n_x() const { return n_x_; }
  const Generator& generator() const { return g_; }
  /// g(pi_i, x_j), j = 0..n_x.
  RealVector samples(std::size_t i) const;
  /// Phase g(pi, 1) - g(pi, 0) induced at the seam.
  double twist(std::size_t i) const;
  bool base_point_identity() const;

  Matrix unitary(std::size_t i, GridLayout layout) const;
  Matrix unitary_at(double pi, GridLayout layout) const;
  /// Same generator on the grid with midpoints inserted.
  GaugeField refined() const;

 private:
  std::vector<double> pi_grid_;
  Index n_x_;
  Generator g_;
};

struct GaugeExtension {
  FiberedOperator field;
  std::vector<ZTransform> z;
  double z_deviation = 0.0;          // max adjacent ||z_{i+1} - z_i||
  double z_deviation_refined = 0.0;  // same on the grid with midpoints
  double z_ratio = 0.0;
  double probe_deviation = 0.0;      // section-continuity probes on the grid
  double probe_deviation_refined = 0.0;
  double probe_ratio = 0.0;
  double linear_constant = 0.0;      // probe_deviation / max step
};

/// T_pi = U_pi t0 U_pi* on U_pi D(t0), z_pi = U_pi w U_pi*.
/// Throws PreconditionViolated (U at 0 not I), NotDense (t0 not regular) or
/// GaugeNotContinuous (probe deviations not shrinking linearly).
GaugeExtension gauge_extension(const GridOperator& t0, const GaugeField& u);

}  // namespace regop
