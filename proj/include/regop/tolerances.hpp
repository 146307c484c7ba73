#pragma once

namespace regop::tol {

// Relative tolerance for identities that hold exactly in exact arithmetic.
inline constexpr double kAlg = 1e-10;
// Eigenvalue floor for positive semidefinite inputs, scaled by the norm.
inline constexpr double kPsdRel = 1e-12;
// Absolute part of the graph-membership test; a relative guard is added.
inline constexpr double kGraph = 1e-9;
// Smallest admissible density gap of a z-transform.
inline constexpr double kGap = 1e-12;
// Condition number beyond which (1 + T*T) is treated as singular.
inline constexpr double kResolventCond = 1e14;
// Relative singular-value threshold used for numerical rank.
inline constexpr double kRank = 1e-10;
// Kernel detection: sigma_small / sigma_next must not exceed this.
inline constexpr double kKernelGap = 1e-6;

}  // namespace regop::tol
