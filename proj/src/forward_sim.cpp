#include "ratchet/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratchet/csv_io.hpp"
#include "ratchet/numerics.hpp"

namespace ratchet {

namespace {

// Simulation-level parameter check: lambda = 0 and s = 0 are meaningful
// degenerate cases here even though the gamma algebra forbids them.
void validate_sim_params(const RatchetParams& p) {
    if (p.N < 1) throw std::domain_error("sim: N must be >= 1");
    if (!(p.lambda >= 0.0)) throw std::domain_error("sim: lambda must be >= 0");
    if (!(p.s >= 0.0 && p.s < 1.0)) throw std::domain_error("sim: s must lie in [0,1)");
}

// Multinomial draw of n individuals over `weights` by sequential conditional
// binomials, one exact binomial per class.
std::vector<long long> multinomial_sample(const std::vector<double>& weights,
                                          long long n, Rng& rng) {
    std::vector<long long> counts(weights.size(), 0);
    long long remaining = n;
    double rem_p = 1.0;
    for (std::size_t k = 0; k < weights.size() && remaining > 0; ++k) {
        const double w = weights[k];
        if (w <= 0.0) continue;
        double ratio = w / rem_p;
        if (ratio > 1.0) ratio = 1.0;
        const long long draw = rng.binomial(remaining, ratio);
        counts[k] = draw;
        remaining -= draw;
        rem_p -= w;
        if (rem_p <= 0.0) rem_p = 0.0;
    }
    // numeric dust beyond the truncated window; keep the total exact
    if (remaining > 0) counts.back() += remaining;
    return counts;
}

}  // namespace

long long CountProfile::total() const {
    long long t = 0;
    for (long long c : counts) t += c;
    return t;
}

TypeProfile CountProfile::frequencies() const {
    const long long n = total();
    if (n <= 0) throw std::domain_error("CountProfile: empty population");
    TypeProfile x;
    x.offset = offset;
    x.freqs.resize(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        x.freqs[k] = static_cast<double>(counts[k]) / static_cast<double>(n);
    return x;
}

long long RunStats::click_count() const {
    long long n = 0;
    for (const auto& c : clicks) n += c.clicks_at_event;
    return n;
}

double RunStats::rate_per_n_generations() const {
    if (generations <= 0.0) return 0.0;
    return static_cast<double>(click_count()) * static_cast<double>(params.N) /
           generations;
}

void RunStats::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set_common(params, seed);
    m.set("simulator", simulator);
    m.set("dt", dt);
    m.set("generations", generations);
    m.set("burnin_generations", burnin_generations);
    m.set("burnin_clicked", burnin_clicked ? "true" : "false");
    m.set("clicks", click_count());
    m.set("rate_per_n_generations", rate_per_n_generations());
    m.set("scatter_interval", scatter_interval);
    m.set("trace_interval", trace_interval);
    m.set("hist_lo", y0_hist.lo());
    m.set("hist_hi", y0_hist.hi());
    m.set("hist_bins", static_cast<long long>(y0_hist.bins()));
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    {
        CsvWriter w(prefix + ".clicks.csv", ref);
        w.header({"time", "clicks_at_event", "new_best_freq"});
        for (const auto& c : clicks) {
            w.field(c.time).field(c.clicks_at_event).field(c.new_best_freq);
            w.end_row();
        }
    }
    {
        CsvWriter w(prefix + ".hist.csv", ref);
        w.header({"bin_lo", "bin_hi", "mass"});
        const auto mass = y0_hist.normalized();
        for (std::size_t i = 0; i < mass.size(); ++i) {
            w.field(y0_hist.bin_lo(i)).field(y0_hist.bin_hi(i)).field(mass[i]);
            w.end_row();
        }
    }
    {
        CsvWriter w(prefix + ".scatter.csv", ref);
        w.header({"generation", "y0", "m1"});
        for (const auto& s : scatter) {
            w.field(s.generation).field(s.y0).field(s.m1);
            w.end_row();
        }
    }
}

TypeProfile wf_weights(const TypeProfile& x, double lambda, double s) {
    if (x.freqs.empty()) throw std::domain_error("wf_weights: empty profile");
    if (!(lambda >= 0.0)) throw std::domain_error("wf_weights: lambda must be >= 0");
    if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("wf_weights: s must lie in [0,1)");

    // selection: h_i = x_i (1-s)^i / W
    std::vector<double> h(x.freqs.size());
    double w_fit = 0.0;
    double pw = 1.0;
    for (std::size_t i = 0; i < x.freqs.size(); ++i) {
        h[i] = x.freqs[i] * pw;
        w_fit += h[i];
        pw *= 1.0 - s;
    }
    if (!(w_fit > 0.0)) throw std::runtime_error("wf_weights: zero mean fitness");
    for (double& v : h) v /= w_fit;

    TypeProfile out;
    out.offset = x.offset;
    if (lambda == 0.0) {
        out.freqs = std::move(h);
        return out;
    }

    // mutation: convolve with Poisson(lambda), omitted mass < 1e-12
    const std::size_t J = poisson_window(lambda, 1e-13);
    if (h.size() + J - 1 > kMaxWindow)
        throw std::runtime_error("wf_weights: window growth beyond hard cap");
    const std::vector<double> pois = poisson_weights(lambda, J);
    out.freqs.assign(h.size() + J - 1, 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] == 0.0) continue;
        for (std::size_t j = 0; j < J; ++j) out.freqs[i + j] += h[i] * pois[j];
    }
    return out;
}

CountProfile wf_step(const CountProfile& c, const RatchetParams& p, Rng& rng,
                     StepOutcome* outcome) {
    validate_sim_params(p);
    const long long n = c.total();
    if (n != p.N) throw std::domain_error("wf_step: counts must sum to N");

    const TypeProfile weights = wf_weights(c.frequencies(), p.lambda, p.s);
    CountProfile next;
    next.offset = c.offset;
    next.counts = multinomial_sample(weights.freqs, p.N, rng);

    StepOutcome local;
    if (next.counts[0] == 0) {
        std::size_t shift = 0;
        while (shift < next.counts.size() && next.counts[shift] == 0) ++shift;
        next.counts.erase(next.counts.begin(), next.counts.begin() + static_cast<long>(shift));
        next.offset += static_cast<long long>(shift);
        local.clicks = static_cast<long long>(shift);
        local.new_best_freq =
            static_cast<double>(next.counts[0]) / static_cast<double>(p.N);
    }
    // drop empty trailing classes so the window tracks the support
    while (next.counts.size() > 1 && next.counts.back() == 0) next.counts.pop_back();
    if (outcome) *outcome = local;
    return next;
}

namespace {

// Shared runner: burn-in through the first click, then record clicks,
// occupancy, scatter and fitness for `generations`.
template <typename State, typename StepFn, typename Y0Fn, typename M1Fn, typename WFn>
RunStats run_recorded(const RatchetParams& p, double generations, double dt,
                      const RecorderConfig& rc, std::uint64_t seed, Rng& rng,
                      State state, StepFn step, Y0Fn y0_of, M1Fn m1_of, WFn fitness_of,
                      const char* tag) {
    validate_sim_params(p);
    if (!(generations >= 1.0)) throw std::domain_error("run: generations must be >= 1");

    RunStats stats;
    stats.params = p;
    stats.seed = seed;
    stats.simulator = tag;
    stats.dt = dt;
    stats.scatter_interval = rc.scatter_interval;
    stats.trace_interval = rc.trace_interval;

    const double theta = (p.s > 0.0) ? p.lambda / p.s : 0.0;
    const double pi0 = std::exp(-theta);
    const std::size_t bins = static_cast<std::size_t>(
        std::lround(rc.hist_range_pi0 / rc.hist_bin_width_pi0));
    stats.y0_hist = Histogram(0.0, rc.hist_range_pi0 * pi0, bins);

    // burn-in until the first click (discarded; the first interval is biased
    // by the initial condition)
    double burnin_cap = 0.0;
    if (p.lambda > 0.0 && p.s > 0.0)
        burnin_cap = rc.burnin_cap_haigh * haigh_click_time(p);
    double t = 0.0;
    while (t < burnin_cap) {
        StepOutcome out;
        step(state, rng, &out);
        t += dt;
        if (out.clicks > 0) {
            stats.burnin_clicked = true;
            break;
        }
    }
    stats.burnin_generations = t;

    t = 0.0;
    long long next_scatter = 0;
    long long next_trace = 0;
    while (t < generations - 0.5 * dt) {
        StepOutcome out;
        step(state, rng, &out);
        t += dt;
        if (out.clicks > 0)
            stats.clicks.push_back({t, out.clicks, out.new_best_freq});
        stats.y0_hist.add(y0_of(state), dt);
        if (t >= static_cast<double>(next_scatter)) {
            stats.scatter.push_back({t, y0_of(state), m1_of(state)});
            next_scatter += rc.scatter_interval;
        }
        if (t >= static_cast<double>(next_trace)) {
            stats.fitness_trace.push_back({t, fitness_of(state)});
            next_trace += rc.trace_interval;
        }
    }
    stats.generations = t;
    return stats;
}

double profile_fitness(const std::vector<double>& freqs, double s) {
    double w = 0.0, pw = 1.0;
    for (double f : freqs) {
        w += f * pw;
        pw *= 1.0 - s;
    }
    return w;
}

}  // namespace

RunStats wf_run(const RatchetParams& p, long long generations, const RecorderConfig& rc,
                std::uint64_t seed) {
    validate_sim_params(p);
    Rng rng(seed);

    // initial population: N individuals multinomially sampled from Poisson(theta)
    CountProfile pop;
    if (p.lambda > 0.0 && p.s > 0.0) {
        const double theta = p.lambda / p.s;
        const TypeProfile pois =
            poisson_profile(theta, poisson_window(theta, kProfileTailTol));
        pop.counts = multinomial_sample(pois.freqs, p.N, rng);
        while (pop.counts.size() > 1 && pop.counts.back() == 0) pop.counts.pop_back();
        std::size_t lead = 0;
        while (lead < pop.counts.size() && pop.counts[lead] == 0) ++lead;
        pop.counts.erase(pop.counts.begin(), pop.counts.begin() + static_cast<long>(lead));
        pop.offset = static_cast<long long>(lead);
    } else {
        pop.counts.assign(1, p.N);
    }

    return run_recorded(
        p, static_cast<double>(generations), 1.0, rc, seed, rng, std::move(pop),
        [&p](CountProfile& state, Rng& r, StepOutcome* out) {
            state = wf_step(state, p, r, out);
        },
        [&p](const CountProfile& state) {
            return static_cast<double>(state.counts[0]) / static_cast<double>(p.N);
        },
        [](const CountProfile& state) { return state.frequencies().mean(); },
        [&p](const CountProfile& state) {
            return profile_fitness(state.frequencies().freqs, p.s);
        },
        "wf");
}

namespace {

// Required Fleming-Viot window: theta + 10 sqrt(theta) + 25 classes.
std::size_t fv_min_window(double theta) {
    return static_cast<std::size_t>(std::ceil(theta + 10.0 * std::sqrt(theta) + 25.0));
}

struct FvTrial {
    std::vector<double> freqs;
    double clamped_mass = 0.0;
};

// Entries below this are truncated to exact zero after each Euler trial.
// Without the floor, sqrt(x) noise at tiny positive x is upward-biased
// under clamping (E[(x + sigma Z)^+] ~ sigma for x << sigma) and the far
// tail bootstraps itself to a spurious noise floor of order dt/N, inflating
// the higher moments step by step. A zeroed class regrows only through the
// mutation influx lambda x_{k-1} dt, which is the physical channel.
constexpr double kFvTailFloor = 1e-14;

// One raw Euler trial (no rejection logic).
FvTrial fv_euler_trial(const std::vector<double>& x, const RatchetParams& p, double dt,
                       Rng& rng) {
    const std::size_t K = x.size();
    const double inv_n = 1.0 / static_cast<double>(p.N);

    double m1 = 0.0;
    for (std::size_t k = 0; k < K; ++k) m1 += static_cast<double>(k) * x[k];

    FvTrial trial;
    trial.freqs.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double drift = (p.s * (m1 - static_cast<double>(k)) - p.lambda) * x[k];
        if (k > 0) drift += p.lambda * x[k - 1];
        trial.freqs[k] = x[k] + dt * drift;
    }

    // antisymmetric pairwise noise: one Gaussian per ordered pair (j > k)
    for (std::size_t k = 0; k + 1 < K; ++k) {
        if (x[k] <= 0.0) continue;
        for (std::size_t j = k + 1; j < K; ++j) {
            if (x[j] <= 0.0) continue;
            const double amt = std::sqrt(dt * x[k] * x[j] * inv_n) * rng.normal();
            trial.freqs[k] += amt;
            trial.freqs[j] -= amt;
        }
    }

    for (double& v : trial.freqs) {
        if (v < 0.0) {
            trial.clamped_mass -= v;
            v = 0.0;
        } else if (v < kFvTailFloor) {
            v = 0.0;
        }
    }
    return trial;
}

std::vector<double> fv_step_depth(const std::vector<double>& x, const RatchetParams& p,
                                  double dt, Rng& rng, int depth) {
    FvTrial trial = fv_euler_trial(x, p, dt, rng);
    if (trial.clamped_mass <= 1e-3) return std::move(trial.freqs);
    if (depth >= 10)
        throw std::runtime_error("fv_step: clamped mass still excessive after 10 halvings");
    std::vector<double> half = fv_step_depth(x, p, 0.5 * dt, rng, depth + 1);
    double mass = 0.0;
    for (double v : half) mass += v;
    for (double& v : half) v /= mass;
    return fv_step_depth(half, p, 0.5 * dt, rng, depth + 1);
}

}  // namespace

TypeProfile fv_step(const TypeProfile& x, const RatchetParams& p, double dt, Rng& rng,
                    StepOutcome* outcome) {
    validate_sim_params(p);
    if (!(dt > 0.0 && dt <= 1.0)) throw std::domain_error("fv_step: need 0 < dt <= 1");
    if (x.freqs.empty()) throw std::domain_error("fv_step: empty profile");
    const double theta = (p.s > 0.0) ? p.lambda / p.s : 0.0;
    if (theta > 0.0 && x.freqs.size() < fv_min_window(theta))
        throw std::domain_error("fv_step: window shorter than theta + 10 sqrt(theta) + 25");

    TypeProfile next;
    next.offset = x.offset;
    next.freqs = fv_step_depth(x.freqs, p, dt, rng, 0);

    double mass = 0.0;
    for (double v : next.freqs) mass += v;
    if (!(mass > 0.0)) throw std::runtime_error("fv_step: profile mass vanished");
    for (double& v : next.freqs) v /= mass;

    StepOutcome local;
    if (next.freqs[0] == 0.0) {
        std::size_t shift = 0;
        while (shift < next.freqs.size() && next.freqs[shift] == 0.0) ++shift;
        if (shift == next.freqs.size())
            throw std::runtime_error("fv_step: profile mass vanished");
        next.freqs.erase(next.freqs.begin(), next.freqs.begin() + static_cast<long>(shift));
        next.offset += static_cast<long long>(shift);
        local.clicks = static_cast<long long>(shift);
        local.new_best_freq = next.freqs[0];
    }

    // keep the right edge padded with zero classes
    if (theta > 0.0) {
        const std::size_t want = fv_min_window(theta);
        if (next.freqs.size() < want) next.freqs.resize(want, 0.0);
    }
    if (next.freqs.back() > 1e-12 && next.freqs.size() < kMaxWindow)
        next.freqs.resize(std::min(next.freqs.size() + 8, kMaxWindow), 0.0);

    if (outcome) *outcome = local;
    return next;
}

RunStats fv_run(const RatchetParams& p, double generations, double dt,
                const RecorderConfig& rc, std::uint64_t seed) {
    validate_sim_params(p);
    if (!(dt > 0.0 && dt <= 1.0)) throw std::domain_error("fv_run: need 0 < dt <= 1");
    Rng rng(seed);

    TypeProfile state;
    if (p.lambda > 0.0 && p.s > 0.0) {
        const double theta = p.lambda / p.s;
        const std::size_t window =
            std::max(fv_min_window(theta), poisson_window(theta, kProfileTailTol));
        state = poisson_profile(theta, window);
        if (state.freqs.size() < fv_min_window(theta))
            state.freqs.resize(fv_min_window(theta), 0.0);
    } else {
        state.freqs.assign(fv_min_window(1.0), 0.0);
        state.freqs[0] = 1.0;
    }

    return run_recorded(
        p, generations, dt, rc, seed, rng, std::move(state),
        [&p, dt](TypeProfile& st, Rng& r, StepOutcome* out) {
            st = fv_step(st, p, dt, r, out);
        },
        [](const TypeProfile& st) { return st.freqs[0]; },
        [](const TypeProfile& st) { return st.mean(); },
        [&p](const TypeProfile& st) { return profile_fitness(st.freqs, p.s); }, "fv");
}

MomentReport moment_diagnostics(const std::vector<TypeProfile>& path,
                                const RatchetParams& p, double dt) {
    validate_sim_params(p);
    if (!(dt > 0.0)) throw std::domain_error("moment_diagnostics: dt must be > 0");
    if (path.size() < 1001)
        throw std::invalid_argument(
            "moment_diagnostics: need at least 1000 steps of path");

    const std::size_t n = path.size() - 1;
    const double inv_n_pop = 1.0 / static_cast<double>(p.N);

    std::vector<double> d1(n), pred1(n), q1(n), qpred1(n);
    std::vector<double> d2(n), pred2(n), q2(n), qpred2(n);
    for (std::size_t i = 0; i < n; ++i) {
        // absolute mean: click handling shifts the window offset, the
        // underlying M1 evolves continuously
        const double m1a = static_cast<double>(path[i].offset) + path[i].mean();
        const double m1b = static_cast<double>(path[i + 1].offset) + path[i + 1].mean();
        const double m2 = path[i].central_moment(2);
        const double m3 = path[i].central_moment(3);
        const double m4 = path[i].central_moment(4);
        const double m2b = path[i + 1].central_moment(2);

        d1[i] = (m1b - m1a) / dt;
        pred1[i] = p.lambda - p.s * m2;
        const double r1 = (m1b - m1a) - pred1[i] * dt;
        q1[i] = r1 * r1 / dt;
        qpred1[i] = m2 * inv_n_pop;

        d2[i] = (m2b - m2) / dt;
        pred2[i] = -m2 * inv_n_pop + p.lambda - p.s * m3;
        const double r2 = (m2b - m2) - pred2[i] * dt;
        q2[i] = r2 * r2 / dt;
        qpred2[i] = (m4 - m2 * m2) * inv_n_pop;
    }

    auto check = [](const std::vector<double>& emp, const std::vector<double>& pred) {
        MomentCheck c;
        std::vector<double> diff(emp.size());
        for (std::size_t i = 0; i < emp.size(); ++i) diff[i] = emp[i] - pred[i];
        const Summary sd = summarize(diff);
        const Summary se_ = summarize(emp);
        const Summary sp = summarize(pred);
        c.empirical = se_.mean;
        c.predicted = sp.mean;
        c.se = sd.se_mean;
        c.z = (c.se > 0.0) ? std::fabs(sd.mean) / c.se : 0.0;
        return c;
    };

    MomentReport rep;
    rep.steps = n;
    rep.m1_drift = check(d1, pred1);
    rep.m1_qv = check(q1, qpred1);
    rep.m2_drift = check(d2, pred2);
    rep.m2_qv = check(q2, qpred2);
    return rep;
}

}  // namespace ratchet
