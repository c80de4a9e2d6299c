#include "ratchet/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ratchet {

void RatchetParams::validate() const {
    if (N < 1) throw std::domain_error("params: N must be >= 1");
    if (!(lambda > 0.0)) throw std::domain_error("params: lambda must be > 0");
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("params: s must lie in (0,1)");
}

std::string Regime::name() const {
    switch (kind) {
        case Kind::SmallA: return "small-A";
        case Kind::AEqualsOne: return "A=1";
        case Kind::LargeA: return "large-A";
        case Kind::Generic: return "generic(A=" + std::to_string(A) + ")";
    }
    return "?";
}

DerivedParams derive_params(const RatchetParams& p) {
    p.validate();
    const double nl = p.n_lambda();
    if (!(nl > 1.0))
        throw std::domain_error("derive_params: N*lambda must exceed 1 for gamma");

    DerivedParams d;
    d.theta = p.lambda / p.s;
    d.pi0 = std::exp(-d.theta);
    d.n0 = static_cast<double>(p.N) * d.pi0;
    d.gamma = nl / (static_cast<double>(p.N) * p.s * std::log(nl));
    if (d.theta > 1.0) {
        d.tau = std::log(d.theta) / p.s;
        d.tau_defined = true;
    }
    return d;
}

double solve_s_for_gamma(long long N, double lambda, double gamma) {
    if (N < 1) throw std::domain_error("solve_s_for_gamma: N must be >= 1");
    if (!(lambda > 0.0)) throw std::domain_error("solve_s_for_gamma: lambda must be > 0");
    if (!(gamma > 0.0)) throw std::domain_error("solve_s_for_gamma: gamma must be > 0");
    const double nl = static_cast<double>(N) * lambda;
    if (!(nl > 1.0))
        throw std::domain_error("solve_s_for_gamma: N*lambda must exceed 1");
    return lambda / (gamma * std::log(nl));
}

namespace {

// Coefficient of the rescaled A=1 equation as a function of x = N*lambda.
double a1_coefficient(double gamma, double x) {
    return kEminus1Inv * std::pow(x, 1.0 - gamma) / (gamma * std::log(x));
}

}  // namespace

double mean_reversion_coefficient(const Regime& regime, long long N, double lambda,
                                  double s) {
    RatchetParams p{N, lambda, s};
    p.validate();
    const double nl = p.n_lambda();
    if (!(nl > 1.0))
        throw std::domain_error("mean_reversion_coefficient: N*lambda must exceed 1");
    const double gamma = nl / (static_cast<double>(N) * s * std::log(nl));

    switch (regime.kind) {
        case Regime::Kind::SmallA:
            return std::pow(nl, 1.0 - 2.0 * gamma);
        case Regime::Kind::AEqualsOne:
            return a1_coefficient(gamma, nl);
        case Regime::Kind::LargeA:
            return a1_coefficient(gamma, nl) / kEminus1Inv;
        case Regime::Kind::Generic: {
            // N s pi0 * eta/(e^eta - 1), with pi0 = (N lambda)^(-gamma)
            const double theta = lambda / s;
            const double eta = std::pow(theta, 1.0 - regime.A);
            const double coef = (eta < 1e-8) ? 1.0 : eta / std::expm1(eta);
            return coef * std::pow(nl, 1.0 - gamma) / (gamma * std::log(nl));
        }
    }
    throw std::logic_error("mean_reversion_coefficient: unknown regime");
}

double threshold_n_lambda(double gamma, double c) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("threshold_n_lambda: gamma must lie in (0,1)");
    if (!(c > 0.0)) throw std::domain_error("threshold_n_lambda: c must be > 0");

    // a1_coefficient decreases from x=e down to its minimum at
    // x = exp(1/(1-gamma)) and grows without bound afterwards; the table
    // entries are the upward crossings, so search from the minimum.
    const double e = std::exp(1.0);
    if (a1_coefficient(gamma, e) >= c) return e;  // infimum at the left boundary
    const double u_min = std::max(1.0, 1.0 / (1.0 - gamma));
    const double u_cap = std::log(1e300);
    double lo = u_min;

    double hi = lo;
    do {
        hi = std::min(hi * 2.0, u_cap);
        if (hi >= u_cap && a1_coefficient(gamma, std::exp(u_cap)) < c)
            return std::numeric_limits<double>::infinity();
    } while (a1_coefficient(gamma, std::exp(hi)) < c);

    // bisect ln(x) to 3 significant digits in x
    while ((hi - lo) > 5e-4) {
        const double mid = 0.5 * (lo + hi);
        if (a1_coefficient(gamma, std::exp(mid)) >= c)
            hi = mid;
        else
            lo = mid;
    }
    return std::exp(hi);
}

double haigh_click_time(const RatchetParams& p) {
    p.validate();
    const double theta = p.lambda / p.s;
    return 4.0 * static_cast<double>(p.N) * std::exp(-theta) + 7.0 * std::log(theta) +
           2.0 / p.s - 20.0;
}

}  // namespace ratchet
