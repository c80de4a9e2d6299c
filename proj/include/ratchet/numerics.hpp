#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ratchet {

// Hard cap on any profile window (design limit, not a tunable).
inline constexpr std::size_t kMaxWindow = 4096;

// Default truncation tolerance for profile tails. Stricter than the 1e-12
// contract so that windowing error never dominates the 1e-10 identities.
inline constexpr double kTailTolerance = 1e-14;

// Poisson(mu) weights on 0..K-1, unnormalized (each exactly e^-mu mu^k/k!).
std::vector<double> poisson_weights(double mu, std::size_t K);

// Smallest window K such that the Poisson(mu) mass beyond K-1 is < tol.
std::size_t poisson_window(double mu, double tol = kTailTolerance);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

// Adaptive Simpson on [a,b]. Absolute tolerance; throws on non-convergence
// only if `must_converge` (green_function needs the hard failure mode).
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-10, int max_depth = 40);

}  // namespace ratchet
