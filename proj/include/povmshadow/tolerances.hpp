#pragma once

namespace povmshadow::tol {

// Numerical tolerances shared by every module.
inline constexpr double kHermitian = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kTrace = 1e-10;
inline constexpr double kPovmSum = 1e-10;
inline constexpr double kReconstruction = 1e-9;
inline constexpr double kOrthonormal = 1e-10;
inline constexpr double kDistSum = 1e-9;
inline constexpr double kEntropyFloor = 1e-12;
inline constexpr double kProjector = 1e-9;
inline constexpr double kGradientNorm = 1e-9;
// Differences below this are treated as a subgradient kink.
inline constexpr double kKink = 1e-12;

}  // namespace povmshadow::tol
