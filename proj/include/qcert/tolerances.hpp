#pragma once

// Centralized numeric tolerances. Dimensions stay <= 64, so double precision
// with these slacks is comfortable everywhere.
namespace qcert::tol {

inline constexpr double kHermiticity = 1e-10;     // relative, vs max(1, ||A||_HS)
inline constexpr double kPsdFloor = -1e-8;        // eigenvalue floor for PSD checks
inline constexpr double kReconstruction = 1e-9;   // eigendecomposition residual
inline constexpr double kTraceOne = 1e-10;
inline constexpr double kCompleteness = 1e-8;     // ||sum M_x - I||_HS
inline constexpr double kProbabilityClip = -1e-10;
inline constexpr double kOrthonormal = 1e-8;
inline constexpr double kZeroEffect = 1e-12;      // effects with Tr below this carry no mass

}  // namespace qcert::tol
