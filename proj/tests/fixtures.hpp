#pragma once

// Frozen output of tests/oracles/reference_values.py (closed-form discrete
// kernel, SVD-route z-transforms). Regenerate with that script, never by
// copying numbers from the library under test.
namespace regop::fixtures {

inline constexpr double kKernelError100 = 2.960852667959e-07;
inline constexpr double kKernelError200 = 7.399381769685e-08;
inline constexpr double kKernelError400 = 1.849606888202e-08;
inline constexpr double kKernelRatio200Over400 = 4.000515902532;

// ||z(minimal) - z(periodic)|| for the circulant derivative on n points
inline constexpr double kJump64 = 1.315748774203e+00;
inline constexpr double kJump400 = 1.481327763638e+00;
inline constexpr double kJump1600 = 1.569402231746e+00;

}  // namespace regop::fixtures
