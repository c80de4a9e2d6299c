#include "ratchet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchet/csv_io.hpp"
#include "ratchet/parallel.hpp"
#include "ratchet/rng.hpp"

namespace ratchet {

namespace {

constexpr double kDefaultFvDt = 0.1;
constexpr double kDefaultDiffusionDt = 0.1;

bool is_diffusion_tag(const std::string& simulator, Regime& regime_out) {
    if (simulator == "small-A" || simulator == "smalla") {
        regime_out = Regime::small_a();
        return true;
    }
    if (simulator == "A=1" || simulator == "a1") {
        regime_out = Regime::a_equals_one();
        return true;
    }
    if (simulator == "large-A" || simulator == "largea") {
        regime_out = Regime::large_a();
        return true;
    }
    return false;
}

}  // namespace

void SweepResult::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set("experiment", "power_law_sweep");
    m.set("simulator", simulator);
    m.set("n", N);
    m.set("gamma", gamma);
    m.set("seed", seed);
    m.set("rng", kRngAlgorithm);
    m.set("slope", slope);
    m.set("slope_se", slope_se);
    m.set("intercept", intercept);
    m.set("intercept_se", intercept_se);
    m.set("fit_points", static_cast<long long>(fit_points));
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    CsvWriter w(prefix + ".csv", ref);
    w.header({"n", "lambda", "s", "gamma", "n_lambda", "clicks", "generations",
              "rate_per_n_generations", "rate_se", "used_in_fit", "log_residual"});
    for (const auto& pt : points) {
        w.field(pt.params.N)
            .field(pt.params.lambda)
            .field(pt.params.s)
            .field(pt.gamma)
            .field(pt.n_lambda)
            .field(pt.clicks)
            .field(pt.generations)
            .field(pt.rate)
            .field(pt.rate_se)
            .field(static_cast<long long>(pt.used_in_fit ? 1 : 0))
            .field(pt.log_residual);
        w.end_row();
    }
}

SweepResult power_law_sweep(long long N, double gamma, const std::vector<double>& lambdas,
                            long long generations, const std::string& simulator,
                            std::uint64_t seed, unsigned workers) {
    if (lambdas.empty()) throw std::invalid_argument("power_law_sweep: empty lambda list");
    Regime regime;
    const bool diffusion = is_diffusion_tag(simulator, regime);
    if (!diffusion && simulator != "wf" && simulator != "fv")
        throw std::invalid_argument("power_law_sweep: unknown simulator " + simulator);

    SweepResult result;
    result.simulator = simulator;
    result.seed = seed;
    result.N = N;
    result.gamma = gamma;
    result.points.resize(lambdas.size());

    run_jobs(lambdas.size(), workers, [&](std::size_t j) {
        const double lambda = lambdas[j];
        RatchetParams p{N, lambda, solve_s_for_gamma(N, lambda, gamma)};
        SweepPoint pt;
        pt.params = p;
        pt.gamma = gamma;
        pt.n_lambda = p.n_lambda();
        pt.log_residual = std::numeric_limits<double>::quiet_NaN();
        const std::uint64_t sj = job_seed(seed, j);
        if (diffusion) {
            const auto clicks = simulate_clicks(regime, p, static_cast<double>(generations),
                                                kDefaultDiffusionDt, sj);
            pt.clicks = static_cast<long long>(clicks.size());
            pt.generations = static_cast<double>(generations);
        } else if (simulator == "fv") {
            const RunStats stats =
                fv_run(p, static_cast<double>(generations), kDefaultFvDt, {}, sj);
            pt.clicks = stats.click_count();
            pt.generations = stats.generations;
        } else {
            const RunStats stats = wf_run(p, generations, {}, sj);
            pt.clicks = stats.click_count();
            pt.generations = stats.generations;
        }
        pt.rate = static_cast<double>(pt.clicks) * static_cast<double>(N) / pt.generations;
        pt.rate_se = std::sqrt(static_cast<double>(pt.clicks)) * static_cast<double>(N) /
                     pt.generations;
        result.points[j] = pt;
    });

    std::vector<double> lx, ly;
    for (auto& pt : result.points) {
        if (pt.clicks >= 10) {
            pt.used_in_fit = true;
            lx.push_back(std::log(pt.n_lambda));
            ly.push_back(std::log(pt.rate));
        }
    }
    if (lx.size() < 3)
        throw std::runtime_error(
            "power_law_sweep: fewer than 3 points with >= 10 clicks; cannot fit");
    const LinearFit fit = fit_line(lx, ly);
    result.slope = fit.slope;
    result.slope_se = fit.slope_se;
    result.intercept = fit.intercept;
    result.intercept_se = fit.intercept_se;
    result.fit_points = lx.size();
    std::size_t r = 0;
    for (auto& pt : result.points)
        if (pt.used_in_fit) pt.log_residual = fit.residuals[r++];
    return result;
}

void RateScan::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set("experiment", "rate_vs_gamma");
    m.set("n", N);
    m.set("n_lambda", n_lambda);
    m.set("seed", seed);
    m.set("rng", kRngAlgorithm);
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    CsvWriter w(prefix + ".csv", ref);
    w.header({"gamma", "s", "clicks", "generations", "rate_per_n_generations",
              "rate_upper95"});
    for (const auto& pt : points) {
        w.field(pt.gamma)
            .field(pt.s)
            .field(pt.clicks)
            .field(pt.generations)
            .field(pt.rate)
            .field(pt.rate_upper95);
        w.end_row();
    }
}

RateScan rate_vs_gamma(long long N, double n_lambda, const std::vector<double>& gammas,
                       long long generations, std::uint64_t seed, unsigned workers) {
    if (gammas.empty()) throw std::invalid_argument("rate_vs_gamma: empty gamma list");
    const double lambda = n_lambda / static_cast<double>(N);

    RateScan scan;
    scan.N = N;
    scan.n_lambda = n_lambda;
    scan.seed = seed;
    scan.points.resize(gammas.size());

    run_jobs(gammas.size(), workers, [&](std::size_t j) {
        const double gamma = gammas[j];
        RatchetParams p{N, lambda, solve_s_for_gamma(N, lambda, gamma)};
        const RunStats stats = wf_run(p, generations, {}, job_seed(seed, j));
        RatePoint pt;
        pt.gamma = gamma;
        pt.s = p.s;
        pt.clicks = stats.click_count();
        pt.generations = stats.generations;
        pt.rate = stats.rate_per_n_generations();
        const double n_over_g = static_cast<double>(N) / stats.generations;
        pt.rate_upper95 = (pt.clicks == 0)
                              ? 3.0 * n_over_g
                              : pt.rate + 1.96 * std::sqrt(static_cast<double>(pt.clicks)) *
                                              n_over_g;
        scan.points[j] = pt;
    });
    return scan;
}

void PhasePlaneResult::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set("experiment", "phase_plane");
    m.set_common(params, seed);
    m.set("theta", theta);
    m.set("pi0", pi0);
    m.set("slope", fit.slope);
    m.set("slope_se", fit.slope_se);
    m.set("intercept", fit.intercept);
    m.set("intercept_se", fit.intercept_se);
    m.set("slope_small_a", slope_small_a);
    m.set("slope_a1", slope_a1);
    m.set("slope_large_a", slope_large_a);
    m.set("best_regime", best_regime);
    m.set("value_at_pi0", value_at_pi0);
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    CsvWriter w(prefix + ".csv", ref);
    w.header({"generation", "y0", "m1"});
    for (const auto& s : samples) {
        w.field(s.generation).field(s.y0).field(s.m1);
        w.end_row();
    }
}

PhasePlaneResult phase_plane(const RatchetParams& p, long long generations,
                             std::uint64_t seed) {
    const RunStats stats = wf_run(p, generations, {}, seed);
    if (stats.scatter.size() < 1000)
        throw std::runtime_error("phase_plane: insufficient samples (need >= 1000)");

    PhasePlaneResult res;
    res.params = p;
    res.seed = seed;
    res.theta = p.lambda / p.s;
    res.pi0 = std::exp(-res.theta);
    res.samples = stats.scatter;

    std::vector<double> y0s, m1s;
    y0s.reserve(res.samples.size());
    m1s.reserve(res.samples.size());
    for (const auto& s : res.samples) {
        y0s.push_back(s.y0);
        m1s.push_back(s.m1);
    }
    res.fit = fit_line(y0s, m1s);

    res.slope_small_a = -res.theta / (1.0 - res.pi0);
    res.slope_a1 = -kEminus1Inv / res.pi0;
    res.slope_large_a = -1.0 / res.pi0;
    res.value_at_pi0 = res.fit.intercept + res.fit.slope * res.pi0;

    const double d_small = std::fabs(res.fit.slope - res.slope_small_a);
    const double d_a1 = std::fabs(res.fit.slope - res.slope_a1);
    const double d_large = std::fabs(res.fit.slope - res.slope_large_a);
    if (d_small <= d_a1 && d_small <= d_large)
        res.best_regime = "small-A";
    else if (d_a1 <= d_large)
        res.best_regime = "A=1";
    else
        res.best_regime = "large-A";
    return res;
}

void OccupationResult::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set("experiment", "occupation_compare");
    m.set_common(params, seed);
    m.set("regime", regime.name());
    m.set("diffusion_clicks", diffusion_clicks);
    m.set("reached_target", reached_target ? "true" : "false");
    m.set("l1_diffusion_green", l1_diffusion_green);
    if (has_wf) {
        m.set("l1_wf_green", l1_wf_green);
        m.set("l1_wf_diffusion", l1_wf_diffusion);
    }
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    CsvWriter w(prefix + ".csv", ref);
    if (has_wf)
        w.header({"bin_lo", "bin_hi", "diffusion_mass", "green_mass", "wf_mass"});
    else
        w.header({"bin_lo", "bin_hi", "diffusion_mass", "green_mass"});
    for (std::size_t i = 0; i < diffusion_mass.size(); ++i) {
        w.field(diffusion_hist.bin_lo(i))
            .field(diffusion_hist.bin_hi(i))
            .field(diffusion_mass[i])
            .field(green_mass[i]);
        if (has_wf) w.field(wf_mass[i]);
        w.end_row();
    }
}

OccupationResult occupation_compare(const RatchetParams& p, const Regime& regime,
                                    long long clicks_target, double dt,
                                    std::uint64_t seed, bool compare_wf,
                                    long long wf_generations, unsigned workers) {
    if (clicks_target < 1)
        throw std::invalid_argument("occupation_compare: clicks_target must be >= 1");
    const DiffusionSpec spec = make_spec(regime, p);
    const double theta = p.lambda / p.s;
    const double pi0 = std::exp(-theta);

    const RecorderConfig rc;
    const std::size_t bins = static_cast<std::size_t>(
        std::lround(rc.hist_range_pi0 / rc.hist_bin_width_pi0));
    const double hist_hi = rc.hist_range_pi0 * pi0;

    // per-job horizon from the Green-function click time estimate
    const GreenResult oracle = green_function(spec, entry_point(spec), {});
    const unsigned jobs = std::max(1u, workers);
    const long long per_job = (clicks_target + jobs - 1) / jobs;
    const double horizon =
        oracle.expected_click_time * (static_cast<double>(per_job) * 4.0 + 100.0);

    std::vector<Histogram> hists(jobs, Histogram(0.0, hist_hi, bins));
    std::vector<long long> counts(jobs, 0);
    run_jobs(jobs, workers, [&](std::size_t j) {
        const auto clicks = simulate_clicks(spec, horizon, dt, job_seed(seed, j),
                                            &hists[j], per_job);
        counts[j] = static_cast<long long>(clicks.size());
    });

    OccupationResult res;
    res.params = p;
    res.regime = regime;
    res.seed = seed;
    res.diffusion_hist = Histogram(0.0, hist_hi, bins);
    for (unsigned j = 0; j < jobs; ++j) {
        res.diffusion_hist.merge(hists[j]);
        res.diffusion_clicks += counts[j];
    }
    res.reached_target = res.diffusion_clicks >= clicks_target;
    res.diffusion_mass = res.diffusion_hist.normalized();
    res.green_mass = green_bin_masses(spec, entry_point(spec), res.diffusion_hist);
    res.l1_diffusion_green = l1_distance(res.diffusion_mass, res.green_mass);

    if (compare_wf) {
        if (wf_generations < 1)
            throw std::invalid_argument("occupation_compare: wf_generations must be >= 1");
        const RunStats wf = wf_run(p, wf_generations, rc, job_seed(seed, jobs + 1));
        res.has_wf = true;
        res.wf_mass = wf.y0_hist.normalized();
        res.l1_wf_green = l1_distance(res.wf_mass, res.green_mass);
        res.l1_wf_diffusion = l1_distance(res.wf_mass, res.diffusion_mass);
    }
    return res;
}

void ClickEntryResult::write_artifacts(const std::string& prefix) const {
    Manifest m;
    m.set("experiment", "click_entry_histogram");
    m.set_common(params, seed);
    m.set("clicks", clicks);
    m.set("generations", generations);
    m.set("mode", mode);
    const std::string ref = prefix + ".manifest";
    m.write(ref);

    CsvWriter w(prefix + ".csv", ref);
    w.header({"bin_lo", "bin_hi", "mass"});
    const auto mass = hist.normalized();
    for (std::size_t i = 0; i < mass.size(); ++i) {
        w.field(hist.bin_lo(i)).field(hist.bin_hi(i)).field(mass[i]);
        w.end_row();
    }
}

ClickEntryResult click_entry_histogram(const RatchetParams& p, long long clicks_target,
                                       std::uint64_t seed, long long max_generations) {
    if (clicks_target < 1)
        throw std::invalid_argument("click_entry_histogram: clicks_target must be >= 1");
    if (max_generations <= 0) {
        const double budget = 3.0 * static_cast<double>(clicks_target) *
                              std::max(haigh_click_time(p), 100.0);
        max_generations = static_cast<long long>(std::min(budget, 1e9));
    }
    const RunStats stats = wf_run(p, max_generations, {}, seed);

    const double theta = p.lambda / p.s;
    const double pi0 = std::exp(-theta);
    ClickEntryResult res;
    res.params = p;
    res.seed = seed;
    res.generations = stats.generations;
    // coarser bins than the occupancy histogram (click samples are scarce)
    // and a wider range: entry frequencies sit near pi1 = theta pi0 with a
    // long upper tail under frequent clicking
    const double hi = std::min(1.0, 16.0 * pi0);
    res.hist = Histogram(0.0, hi, static_cast<std::size_t>(
                                      std::lround(hi / (pi0 / 10.0))));
    for (const auto& c : stats.clicks) {
        res.hist.add(c.new_best_freq);
        ++res.clicks;
        if (res.clicks >= clicks_target) break;
    }
    res.mode = res.hist.smoothed_mode_midpoint();
    return res;
}

}  // namespace ratchet
