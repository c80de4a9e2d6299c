#include "ratchet/deterministic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ratchet/numerics.hpp"

namespace ratchet {

TypeProfile evolve_closed(const TypeProfile& x0, const RatchetParams& p, double t) {
    p.validate();
    if (t < 0.0) throw std::domain_error("evolve_closed: t must be >= 0");
    if (x0.freqs.empty()) throw std::domain_error("evolve_closed: empty profile");
    if (t == 0.0) {
        TypeProfile same = x0;
        same.compact(kTailTolerance);
        return same;
    }

    // selection tilt
    const double st = p.s * t;
    std::vector<double> tilted(x0.freqs.size());
    double tsum = 0.0;
    for (std::size_t k = 0; k < x0.freqs.size(); ++k) {
        tilted[k] = x0.freqs[k] * std::exp(-st * static_cast<double>(k));
        tsum += tilted[k];
    }
    if (!(tsum > 0.0))
        throw std::runtime_error("evolve_closed: tilted profile underflowed");
    for (double& v : tilted) v /= tsum;

    // mutation influx: convolve with Poisson(mu_t)
    const double theta = p.lambda / p.s;
    const double mu_t = theta * (-std::expm1(-st));
    TypeProfile out;
    out.offset = x0.offset;
    if (mu_t <= 0.0) {
        out.freqs = std::move(tilted);
    } else {
        const std::size_t J = poisson_window(mu_t, kTailTolerance);
        if (tilted.size() + J - 1 > kMaxWindow)
            throw std::runtime_error("evolve_closed: window growth beyond hard cap");
        const std::vector<double> pois = poisson_weights(mu_t, J);
        out.freqs.assign(tilted.size() + J - 1, 0.0);
        for (std::size_t k = 0; k < tilted.size(); ++k) {
            if (tilted[k] == 0.0) continue;
            for (std::size_t j = 0; j < J; ++j) out.freqs[k + j] += tilted[k] * pois[j];
        }
    }
    out.compact(kTailTolerance);
    return out;
}

namespace {

// drift of the truncated system. M1 must be the normalized mean: with the
// raw sum, a truncation deficit feeds back through s*M1*(sum-1) and grows
// exponentially; normalized, the only leak is the edge flux lambda*x_edge.
void cds_rhs(const std::vector<double>& x, double s, double lambda,
             std::vector<double>& dx) {
    double m1 = 0.0, mass = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        m1 += static_cast<double>(k) * x[k];
        mass += x[k];
    }
    m1 /= mass;
    for (std::size_t k = 0; k < x.size(); ++k) {
        dx[k] = (s * (m1 - static_cast<double>(k)) - lambda) * x[k];
        if (k > 0) dx[k] += lambda * x[k - 1];
    }
}

}  // namespace

TypeProfile evolve_ode(const TypeProfile& x0, const RatchetParams& p, double t,
                       double dt) {
    p.validate();
    if (t < 0.0) throw std::domain_error("evolve_ode: t must be >= 0");
    if (!(dt > 0.0)) throw std::domain_error("evolve_ode: dt must be > 0");
    if (x0.freqs.empty()) throw std::domain_error("evolve_ode: empty profile");

    std::vector<double> x = x0.freqs;
    const double stability =
        0.1 / std::max(p.s * static_cast<double>(x.size()), p.lambda);
    if (dt > stability)
        throw std::domain_error("evolve_ode: dt exceeds stability bound 0.1/max(sK,lambda)");

    TypeProfile out;
    out.offset = x0.offset;
    if (t == 0.0) {
        out.freqs = std::move(x);
        return out;
    }

    // pre-extend so the right edge carries no mass for the whole run: the
    // mutation influx adds at most a Poisson(theta) spread
    const double theta = p.lambda / p.s;
    const std::size_t slack = poisson_window(std::max(theta, 1.0), kTailTolerance) + 8;
    if (x.size() + slack > kMaxWindow)
        throw std::runtime_error("evolve_ode: window growth beyond hard cap");
    x.resize(x.size() + slack, 0.0);

    const long long n_steps = static_cast<long long>(std::ceil(t / dt));
    const double h = t / static_cast<double>(n_steps);

    std::vector<double> k1, k2, k3, k4, tmp;
    for (long long step = 0; step < n_steps; ++step) {
        const std::size_t K = x.size();
        k1.assign(K, 0.0);
        k2.assign(K, 0.0);
        k3.assign(K, 0.0);
        k4.assign(K, 0.0);
        tmp.assign(K, 0.0);

        cds_rhs(x, p.s, p.lambda, k1);
        for (std::size_t i = 0; i < K; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
        cds_rhs(tmp, p.s, p.lambda, k2);
        for (std::size_t i = 0; i < K; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
        cds_rhs(tmp, p.s, p.lambda, k3);
        for (std::size_t i = 0; i < K; ++i) tmp[i] = x[i] + h * k3[i];
        cds_rhs(tmp, p.s, p.lambda, k4);
        for (std::size_t i = 0; i < K; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

        for (double v : x)
            if (v < -1e-9)
                throw std::runtime_error(
                    "evolve_ode: negative entry, step size too large");

        if (x.back() > 1e-18 && x.size() < kMaxWindow)
            x.resize(std::min(x.size() + 8, kMaxWindow), 0.0);
    }

    for (double& v : x)
        if (v < 0.0) v = 0.0;
    out.freqs = std::move(x);
    return out;
}

ClosedObservables closed_observables(const TypeProfile& x0, const RatchetParams& p,
                                     double t) {
    p.validate();
    if (t < 0.0) throw std::domain_error("closed_observables: t must be >= 0");
    if (x0.freqs.empty() || !(x0.freqs[0] > 0.0))
        throw std::domain_error("closed_observables: x0(0) must be > 0");

    const double st = p.s * t;
    const double mass = x0.mass();
    double g = 0.0;   // sum x_k e^(-st k)
    double gk = 0.0;  // sum k x_k e^(-st k)
    for (std::size_t k = 0; k < x0.freqs.size(); ++k) {
        const double w = (x0.freqs[k] / mass) * std::exp(-st * static_cast<double>(k));
        g += w;
        gk += static_cast<double>(k) * w;
    }
    const double theta = p.lambda / p.s;
    const double mu_t = theta * (-std::expm1(-st));

    ClosedObservables obs;
    obs.x0 = (x0.freqs[0] / mass) * std::exp(-mu_t) / g;
    obs.m1 = gk / g + mu_t;
    return obs;
}

ClosedObservables phase_one(double theta, double s, double t) {
    if (!(theta > 1.0)) throw std::domain_error("phase_one: theta must exceed 1");
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("phase_one: s must lie in (0,1)");
    if (t < 0.0) throw std::domain_error("phase_one: t must be >= 0");
    const double r = theta * std::exp(-s * t);
    ClosedObservables obs;
    obs.x0 = std::exp(-theta) * r / (-std::expm1(-r));
    obs.m1 = theta - 1.0 + r / std::expm1(r);
    return obs;
}

double mean_reversion_ratio(double r) {
    if (!(r > 0.0)) throw std::domain_error("mean_reversion_ratio: r must be > 0");
    if (r < 1e-3) {
        // 1 + r/6 - r^2/36 - r^3/270 + O(r^4)
        return 1.0 + r * (1.0 / 6.0 + r * (-1.0 / 36.0 + r * (-1.0 / 270.0)));
    }
    const double u = -std::expm1(-r);  // 1 - e^-r
    const double num = r * u - r * r * std::exp(-r);
    const double den = r * u - u * u;
    return num / den;
}

double relaxed_m1(double y0_at_Atau, double theta, double A) {
    if (!(theta > 0.0)) throw std::domain_error("relaxed_m1: theta must be > 0");
    if (A < 0.0) throw std::domain_error("relaxed_m1: A must be >= 0");
    if (!(y0_at_Atau >= 0.0 && y0_at_Atau < 1.0))
        throw std::domain_error("relaxed_m1: y0 must lie in [0,1)");
    const double eta = std::pow(theta, 1.0 - A);
    const double coef = (eta == 0.0) ? 1.0 : eta / std::expm1(eta);
    const double pi0 = std::exp(-theta);
    return theta + coef * (1.0 - y0_at_Atau / pi0);
}

}  // namespace ratchet
