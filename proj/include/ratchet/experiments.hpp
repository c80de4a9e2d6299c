#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratchet/diffusion1d.hpp"
#include "ratchet/forward_sim.hpp"
#include "ratchet/params.hpp"
#include "ratchet/stats.hpp"

namespace ratchet {

struct SweepPoint {
    RatchetParams params;
    double gamma = 0.0;
    double n_lambda = 0.0;
    long long clicks = 0;
    double generations = 0.0;
    double rate = 0.0;     // clicks * N / generations
    double rate_se = 0.0;  // sqrt(clicks) * N / generations
    bool used_in_fit = false;
    double log_residual = 0.0;  // ln(rate) - fit, NaN when not fitted
};

struct SweepResult {
    std::string simulator;  // wf | fv | small-A | A=1 | large-A
    std::uint64_t seed = 0;
    long long N = 0;
    double gamma = 0.0;
    std::vector<SweepPoint> points;
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
    double intercept_se = 0.0;
    std::size_t fit_points = 0;

    void write_artifacts(const std::string& prefix) const;
};

// Click rate per N generations across a lambda list at fixed gamma (s per
// point from solve_s_for_gamma), with the log-log power-law fit over points
// having >= 10 clicks. Throws if fewer than 3 points qualify.
SweepResult power_law_sweep(long long N, double gamma, const std::vector<double>& lambdas,
                            long long generations, const std::string& simulator,
                            std::uint64_t seed, unsigned workers = 1);

struct RatePoint {
    double gamma = 0.0;
    double s = 0.0;
    long long clicks = 0;
    double generations = 0.0;
    double rate = 0.0;
    double rate_upper95 = 0.0;  // rule-of-three bound for zero-click runs
};

struct RateScan {
    long long N = 0;
    double n_lambda = 0.0;
    std::uint64_t seed = 0;
    std::vector<RatePoint> points;

    void write_artifacts(const std::string& prefix) const;
};

RateScan rate_vs_gamma(long long N, double n_lambda, const std::vector<double>& gammas,
                       long long generations, std::uint64_t seed, unsigned workers = 1);

struct PhasePlaneResult {
    RatchetParams params;
    std::uint64_t seed = 0;
    double theta = 0.0;
    double pi0 = 0.0;
    LinearFit fit;  // M1 regressed on Y0
    double slope_small_a = 0.0;
    double slope_a1 = 0.0;
    double slope_large_a = 0.0;
    std::string best_regime;
    double value_at_pi0 = 0.0;  // fitted line at Y0 = pi0 (theta expected)
    std::vector<ScatterPoint> samples;

    void write_artifacts(const std::string& prefix) const;
};

// (Y0, M1) phase-plane regression from a Wright-Fisher run against the
// three regime slope predictions -theta/(1-pi0), -(1/(e-1))/pi0, -1/pi0.
PhasePlaneResult phase_plane(const RatchetParams& p, long long generations,
                             std::uint64_t seed);

struct OccupationResult {
    RatchetParams params;
    Regime regime;
    std::uint64_t seed = 0;
    Histogram diffusion_hist;
    std::vector<double> diffusion_mass;  // normalized occupancy
    std::vector<double> green_mass;      // Green prediction per bin
    double l1_diffusion_green = 0.0;
    long long diffusion_clicks = 0;
    bool reached_target = true;  // false = partial result
    bool has_wf = false;
    std::vector<double> wf_mass;
    double l1_wf_green = 0.0;
    double l1_wf_diffusion = 0.0;

    void write_artifacts(const std::string& prefix) const;
};

// Occupation histogram of the regime diffusion (accumulated until
// clicks_target clicks) against the normalized Green density, optionally
// also against a Wright-Fisher occupancy histogram.
OccupationResult occupation_compare(const RatchetParams& p, const Regime& regime,
                                    long long clicks_target, double dt,
                                    std::uint64_t seed, bool compare_wf = false,
                                    long long wf_generations = 0,
                                    unsigned workers = 1);

struct ClickEntryResult {
    RatchetParams params;
    std::uint64_t seed = 0;
    Histogram hist;  // new-best-class frequency at click times
    long long clicks = 0;
    double generations = 0.0;
    double mode = 0.0;

    void write_artifacts(const std::string& prefix) const;
};

// Histogram of the new best-class frequency immediately after each click of
// a Wright-Fisher run. max_generations = 0 derives a budget from Haigh's
// click-time formula.
ClickEntryResult click_entry_histogram(const RatchetParams& p, long long clicks_target,
                                       std::uint64_t seed,
                                       long long max_generations = 0);

}  // namespace ratchet
