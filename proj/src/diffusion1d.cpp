#include "ratchet/diffusion1d.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ratchet/numerics.hpp"
#include "ratchet/rng.hpp"

namespace ratchet {

namespace {

double regime_drift_coef(const Regime& regime, const RatchetParams& p) {
    const double theta = p.lambda / p.s;
    switch (regime.kind) {
        case Regime::Kind::SmallA:
            return p.lambda * std::exp(-theta);  // lambda * pi0
        case Regime::Kind::AEqualsOne:
            return kEminus1Inv * p.s;
        case Regime::Kind::LargeA:
            return p.s;
        case Regime::Kind::Generic: {
            const double eta = std::pow(theta, 1.0 - regime.A);
            const double coef = (eta == 0.0) ? 1.0 : eta / std::expm1(eta);
            return coef * p.s;
        }
    }
    throw std::logic_error("regime_drift_coef: unknown regime");
}

}  // namespace

DiffusionSpec make_spec(const Regime& regime, const RatchetParams& p) {
    p.validate();
    DiffusionSpec spec;
    spec.regime = regime;
    spec.params = p;
    spec.pi0 = std::exp(-p.lambda / p.s);
    spec.drift_coef = regime_drift_coef(regime, p);
    spec.y_max = std::min(1.0, 8.0 * spec.pi0);
    spec.click_threshold = 0.0;
    return spec;
}

DiffusionSpec zero_drift_spec(long long N, double y_max) {
    if (N < 1) throw std::domain_error("zero_drift_spec: N must be >= 1");
    if (!(y_max > 0.0 && y_max <= 1.0))
        throw std::domain_error("zero_drift_spec: y_max must lie in (0,1]");
    DiffusionSpec spec;
    spec.params.N = N;
    spec.params.lambda = 0.0;
    spec.params.s = 0.0;
    spec.drift_coef = 0.0;
    spec.pi0 = 1.0;
    spec.y_max = y_max;
    spec.click_threshold = 0.0;
    return spec;
}

double entry_point(const DiffusionSpec& spec) {
    switch (spec.regime.kind) {
        case Regime::Kind::SmallA: {
            const double theta = spec.params.lambda / spec.params.s;
            return theta * spec.pi0 / (-std::expm1(-theta));
        }
        case Regime::Kind::LargeA:
            return spec.pi0;
        default:
            return 1.6 * spec.pi0;
    }
}

double drift(const Regime& regime, double y, const RatchetParams& p) {
    p.validate();
    if (y < 0.0) throw std::domain_error("drift: y must be >= 0");
    const double theta = p.lambda / p.s;
    const double pi0 = std::exp(-theta);
    switch (regime.kind) {
        case Regime::Kind::SmallA:
            return p.lambda * (pi0 - y) * y;
        case Regime::Kind::AEqualsOne:
            return kEminus1Inv * p.s * (1.0 - y / pi0) * y;
        case Regime::Kind::LargeA:
            return p.s * (1.0 - y / pi0) * y;
        case Regime::Kind::Generic: {
            const double eta = std::pow(theta, 1.0 - regime.A);
            const double coef = (eta == 0.0) ? 1.0 : eta / std::expm1(eta);
            return coef * p.s * (1.0 - y / pi0) * y;
        }
    }
    throw std::logic_error("drift: unknown regime");
}

std::vector<ClickRecord> simulate_clicks(const DiffusionSpec& spec, double horizon,
                                         double dt, std::uint64_t seed,
                                         Histogram* occupancy, long long max_clicks) {
    if (!(dt > 0.0 && dt <= 1.0)) throw std::domain_error("simulate_clicks: need 0 < dt <= 1");
    if (!(horizon > 0.0)) throw std::domain_error("simulate_clicks: horizon must be > 0");
    spec.params.validate();

    const RatchetParams& p = spec.params;
    const double pi0 = spec.pi0;
    const double theta = p.lambda / p.s;
    const double pi1_frac = theta * pi0 / (-std::expm1(-theta));  // pi_1/(1-pi0)
    const double phase_one_exit = 1.6 * pi0;
    const double inv_n = 1.0 / static_cast<double>(p.N);
    const bool small_a = spec.regime.kind == Regime::Kind::SmallA;

    Rng rng(seed);
    std::vector<ClickRecord> clicks;

    // start from the post-click state of the regime
    bool in_phase_one = small_a;
    double y = 0.0;
    switch (spec.regime.kind) {
        case Regime::Kind::SmallA: y = pi1_frac; break;
        case Regime::Kind::LargeA: y = pi0; break;
        default: y = phase_one_exit; break;
    }

    double t = 0.0;
    const double sqrt_dt = std::sqrt(dt);
    while (t < horizon) {
        const double yc = std::max(y, 0.0);  // full truncation
        double b;
        if (in_phase_one) {
            b = p.s * (pi0 - yc);  // phase-one mean reversion toward pi0
        } else {
            b = spec.drift_coef * (1.0 - yc / pi0) * yc;
        }
        y = y + b * dt + std::sqrt(yc * inv_n) * sqrt_dt * rng.normal();
        t += dt;
        if (y > spec.y_max) y = 2.0 * spec.y_max - y;  // reflect

        if (y <= spec.click_threshold) {
            double reset;
            switch (spec.regime.kind) {
                case Regime::Kind::SmallA: reset = pi1_frac; break;
                case Regime::Kind::LargeA: reset = pi0; break;
                default: reset = phase_one_exit; break;
            }
            clicks.push_back({t, 1, reset});
            y = reset;
            in_phase_one = small_a;
            if (max_clicks >= 0 &&
                static_cast<long long>(clicks.size()) >= max_clicks)
                break;
        } else if (in_phase_one && y >= phase_one_exit) {
            in_phase_one = false;
        }
        if (occupancy) occupancy->add(y, dt);
    }
    return clicks;
}

std::vector<ClickRecord> simulate_clicks(const Regime& regime, const RatchetParams& p,
                                         double horizon, double dt, std::uint64_t seed) {
    return simulate_clicks(make_spec(regime, p), horizon, dt, seed);
}

double first_passage_time(const DiffusionSpec& spec, double x0, double dt, Rng& rng,
                          double t_cap) {
    if (!(dt > 0.0 && dt <= 1.0)) throw std::domain_error("first_passage_time: need 0 < dt <= 1");
    if (!(x0 > 0.0 && x0 <= spec.y_max))
        throw std::domain_error("first_passage_time: x0 must lie in (0, y_max]");
    const double inv_n = 1.0 / static_cast<double>(spec.params.N);
    const double sqrt_dt = std::sqrt(dt);
    double y = x0;
    double t = 0.0;
    while (t < t_cap) {
        const double yc = std::max(y, 0.0);
        const double b = spec.drift_coef * (1.0 - yc / spec.pi0) * yc;
        y = y + b * dt + std::sqrt(yc * inv_n) * sqrt_dt * rng.normal();
        t += dt;
        if (y > spec.y_max) y = 2.0 * spec.y_max - y;
        if (y <= spec.click_threshold) return t;
    }
    return t_cap;
}

RescaleResult rescale(const Regime& regime, const RatchetParams& p) {
    RescaleResult r;
    r.coefficient = mean_reversion_coefficient(regime, p.N, p.lambda, p.s);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", r.coefficient);
    r.description = std::string("dZ = ") + buf +
                    " (1-Z) Z dt + sqrt(Z) dW with Z(t) = Y0(N pi0 t)/pi0 [" +
                    regime.name() + "]";
    return r;
}

namespace {

// Exponent of the scale density: phi(y) = -int_0^y 2 b(u)/sigma^2(u) du
// = -2 N c (y - y^2/(2 pi0)); affine integrand, closed form.
double scale_exponent(const DiffusionSpec& spec, double y) {
    if (spec.drift_coef == 0.0) return 0.0;
    const double n = static_cast<double>(spec.params.N);
    return -2.0 * n * spec.drift_coef * (y - y * y / (2.0 * spec.pi0));
}

// S(y) with overflow-safe scaling: the exponent's maximum over [0,y] sits at
// an endpoint (the exponent is an upward parabola in u).
double scale_function_at(const DiffusionSpec& spec, double y, double quad_tol) {
    if (y <= 0.0) return 0.0;
    if (spec.drift_coef == 0.0) return y;
    const double peak = std::max(0.0, scale_exponent(spec, y));
    auto f = [&](double u) { return std::exp(scale_exponent(spec, u) - peak); };
    const QuadratureResult q = integrate(f, 0.0, y, quad_tol);
    if (!q.converged)
        throw std::runtime_error("scale_function: quadrature did not converge (tol " +
                                 std::to_string(quad_tol) + ")");
    return std::exp(peak) * q.value;
}

}  // namespace

ScaleSpeed scale_speed(const DiffusionSpec& spec, double y) {
    if (!(y > 0.0 && y <= spec.y_max))
        throw std::domain_error("scale_speed: y must lie in (0, y_max]");
    ScaleSpeed out;
    const double phi = scale_exponent(spec, y);
    out.scale_density = std::exp(phi);
    out.scale_function = scale_function_at(spec, y, 1e-12);
    out.speed_density =
        static_cast<double>(spec.params.N) * std::exp(-phi) / y;
    return out;
}

GreenResult green_function(const DiffusionSpec& spec, double x0,
                           const std::vector<double>& grid) {
    if (!(x0 > 0.0 && x0 <= spec.y_max))
        throw std::domain_error("green_function: x0 must lie in (0, y_max]");

    const double n = static_cast<double>(spec.params.N);
    const double s_x0 = scale_function_at(spec, x0, 1e-12);

    auto green_at = [&](double y) {
        if (y <= 0.0) return 2.0 * n;  // limit: S(y)/y -> 1, phi -> 0
        const double s_min = (y < x0) ? scale_function_at(spec, y, 1e-12) : s_x0;
        return 2.0 * n * std::exp(-scale_exponent(spec, y)) * s_min / y;
    };

    const QuadratureResult total = integrate(green_at, 0.0, spec.y_max, 1e-9, 44);
    if (!total.converged || !(total.value > 0.0))
        throw std::runtime_error(
            "green_function: expected-click-time quadrature did not converge");

    GreenResult res;
    res.expected_click_time = total.value;
    res.y = grid;
    res.green.reserve(grid.size());
    res.occupation_density.reserve(grid.size());
    for (double y : grid) {
        const double g = green_at(y);
        res.green.push_back(g);
        res.occupation_density.push_back(g / total.value);
    }
    return res;
}

std::vector<double> green_bin_masses(const DiffusionSpec& spec, double x0,
                                     const Histogram& bins) {
    if (!(x0 > 0.0 && x0 <= spec.y_max))
        throw std::domain_error("green_bin_masses: x0 must lie in (0, y_max]");
    const double n = static_cast<double>(spec.params.N);
    const double s_x0 = scale_function_at(spec, x0, 1e-12);
    auto green_at = [&](double y) {
        if (y <= 0.0) return 2.0 * n;
        const double s_min = (y < x0) ? scale_function_at(spec, y, 1e-12) : s_x0;
        return 2.0 * n * std::exp(-scale_exponent(spec, y)) * s_min / y;
    };

    std::vector<double> masses(bins.bins(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < bins.bins(); ++i) {
        const double lo = std::max(0.0, bins.bin_lo(i));
        const double hi = std::min(spec.y_max, bins.bin_hi(i));
        if (hi <= lo) continue;
        const QuadratureResult q = integrate(green_at, lo, hi, 1e-9, 36);
        if (!q.converged)
            throw std::runtime_error("green_bin_masses: quadrature did not converge");
        masses[i] = q.value;
        total += q.value;
    }
    // mass beyond the last edge (if y_max exceeds the histogram range)
    const double hist_hi = bins.bin_hi(bins.bins() - 1);
    if (spec.y_max > hist_hi) {
        const QuadratureResult q = integrate(green_at, hist_hi, spec.y_max, 1e-9, 36);
        if (q.converged) {
            masses.back() += q.value;  // histograms clamp, so match that
            total += q.value;
        }
    }
    if (total > 0.0)
        for (double& m : masses) m /= total;
    return masses;
}

}  // namespace ratchet
