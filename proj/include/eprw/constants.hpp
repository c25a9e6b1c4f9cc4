// constants.hpp
// Quadrature convention used throughout the library.
//
// Mode operators decompose as a = X + iP, so X = (a + a^dag)/2 and
// P = (a - a^dag)/(2i).  With this choice the vacuum quadrature variance
// is 1/4 and [X, P] = i/2.  Every representation in the library (Fock
// matrices, quadrature distributions, Wigner and characteristic
// functions, covariance matrices) uses this scale.

#pragma once

#include <complex>

namespace eprw {

using complexd = std::complex<double>;

inline constexpr double kVacuumQuadratureVariance = 0.25;

// Identifies the convention in serialized files.
inline constexpr const char* kConventionTag = "x=(a+adag)/2;vacvar=1/4";

inline constexpr double kPi = 3.14159265358979323846;

// Default numerical guards.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kTailTol = 1e-8;
inline constexpr int kMaxModeDim = 96;

inline constexpr complexd kI{0.0, 1.0};

// i^n without trig calls.
inline complexd unit_phase_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

}  // namespace eprw
