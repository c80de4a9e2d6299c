#pragma once

#include <cstdint>
#include <string>

namespace ratchet {

// Raw model inputs: population size N, deleterious mutation rate per genome
// per generation lambda, selection coefficient per mutation s.
struct RatchetParams {
    long long N = 0;
    double lambda = 0.0;
    double s = 0.0;

    double n_lambda() const { return static_cast<double>(N) * lambda; }
    // Throws std::domain_error unless N >= 1, lambda > 0, 0 < s < 1.
    void validate() const;
};

// Quantities derived from (N, lambda, s). All logarithms are natural; this
// is what reproduces the strong-mean-reversion threshold table.
struct DerivedParams {
    double theta = 0.0;   // lambda / s
    double pi0 = 0.0;     // exp(-theta), equilibrium best-class frequency
    double n0 = 0.0;      // N * pi0, equilibrium best-class count
    double gamma = 0.0;   // N*lambda / (N*s * ln(N*lambda))
    double tau = 0.0;     // ln(theta)/s, generations; meaningful only if defined
    bool tau_defined = false;  // false when theta <= 1
};

// Drift regime of the one-dimensional best-class approximation. The generic
// variant carries the relaxation multiple A; eta = theta^(1-A).
struct Regime {
    enum class Kind { SmallA, AEqualsOne, LargeA, Generic };

    Kind kind = Kind::AEqualsOne;
    double A = 1.0;  // used by Generic only

    static Regime small_a() { return {Kind::SmallA, 0.0}; }
    static Regime a_equals_one() { return {Kind::AEqualsOne, 1.0}; }
    static Regime large_a() { return {Kind::LargeA, 0.0}; }
    static Regime generic(double A) { return {Kind::Generic, A}; }

    std::string name() const;
};

// The exact constant behind the paper-level "0.58" prefactor.
inline constexpr double kEminus1Inv = 0.58197670686932642438500200511;  // 1/(e-1)

DerivedParams derive_params(const RatchetParams& p);

// Inverse of the gamma definition: s such that derive_params sees gamma.
double solve_s_for_gamma(long long N, double lambda, double gamma);

// Mean-reversion coefficient of the rescaled best-class equation
// dZ = coeff (1-Z) Z dt + sqrt(Z) dW under Z(t) = Y0(N pi0 t)/pi0.
double mean_reversion_coefficient(const Regime& regime, long long N, double lambda,
                                  double s);

// Smallest N*lambda > e with AEqualsOne coefficient >= c (log-space
// bisection, 3 significant digits); +infinity if none below 1e300.
double threshold_n_lambda(double gamma, double c);

// Haigh's empirical average time between clicks, in generations:
// 4 N pi0 + 7 ln(theta) + 2/s - 20.
double haigh_click_time(const RatchetParams& p);

}  // namespace ratchet
