#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratchet/params.hpp"
#include "ratchet/profile.hpp"
#include "ratchet/rng.hpp"
#include "ratchet/stats.hpp"

namespace ratchet {

// Count profile of the finite population: counts[k] individuals carry
// offset+k mutations; counts always sum to exactly N.
struct CountProfile {
    long long offset = 0;
    std::vector<long long> counts;

    long long total() const;
    TypeProfile frequencies() const;
};

// One click event (possibly multiple offset steps at once).
struct ClickRecord {
    double time = 0.0;             // generations since measurement start
    long long clicks_at_event = 0; // offset jump size, >= 1
    double new_best_freq = 0.0;    // frequency of the new best class
};

struct RecorderConfig {
    double hist_bin_width_pi0 = 1.0 / 50.0;  // bin width as multiple of pi0
    double hist_range_pi0 = 5.0;             // histogram covers [0, range*pi0]
    long long scatter_interval = 10;         // generations between (Y0,M1) samples
    long long trace_interval = 100;          // generations between W(t) samples
    double burnin_cap_haigh = 100.0;         // burn-in cap in units of haigh_click_time
};

struct ScatterPoint {
    double generation = 0.0;
    double y0 = 0.0;
    double m1 = 0.0;
};

struct TracePoint {
    double generation = 0.0;
    double fitness = 0.0;
};

// Accumulated results of one forward run (measurement phase only; burn-in
// through the first click is discarded).
struct RunStats {
    RatchetParams params;
    std::uint64_t seed = 0;
    std::string simulator;  // "wf" | "fv"
    double dt = 1.0;
    double generations = 0.0;         // measured span
    double burnin_generations = 0.0;  // discarded span
    bool burnin_clicked = false;      // false = zero-click outcome
    std::vector<ClickRecord> clicks;
    Histogram y0_hist;
    long long scatter_interval = 10;
    std::vector<ScatterPoint> scatter;
    long long trace_interval = 100;
    std::vector<TracePoint> fitness_trace;

    long long click_count() const;  // sum of clicks_at_event
    double rate_per_n_generations() const;

    // clicks/hist/scatter CSVs plus a `key = value` manifest.
    void write_artifacts(const std::string& prefix) const;
};

// Offspring class distribution of the discrete dynamics: selection-weighted
// profile convolved with Poisson(lambda) mutations. Also the deterministic
// one-generation map; window extended so omitted mass < 1e-12.
TypeProfile wf_weights(const TypeProfile& x, double lambda, double s);

struct StepOutcome {
    long long clicks = 0;
    double new_best_freq = 0.0;
};

// One Wright-Fisher generation: multinomial resampling of N individuals via
// sequential conditional binomials. Click handling shifts the offset when
// the best class empties.
CountProfile wf_step(const CountProfile& c, const RatchetParams& p, Rng& rng,
                     StepOutcome* outcome = nullptr);

RunStats wf_run(const RatchetParams& p, long long generations,
                const RecorderConfig& rc, std::uint64_t seed);

// One Euler step of the Fleming-Viot system with the antisymmetric pairwise
// noise array. Rejects and internally halves dt (up to 10 times) if the
// negative-clamp mass exceeds 1e-3.
TypeProfile fv_step(const TypeProfile& x, const RatchetParams& p, double dt, Rng& rng,
                    StepOutcome* outcome = nullptr);

RunStats fv_run(const RatchetParams& p, double generations, double dt,
                const RecorderConfig& rc, std::uint64_t seed);

struct MomentCheck {
    double predicted = 0.0;
    double empirical = 0.0;
    double se = 0.0;  // standard error of (empirical - predicted)
    double z = 0.0;   // |empirical - predicted| / se
};

// Empirical drift and quadratic variation of M1 and M2 along a Fleming-Viot
// path against the moment-equation predictions.
struct MomentReport {
    std::size_t steps = 0;
    MomentCheck m1_drift;  // prediction lambda - s M2
    MomentCheck m1_qv;     // prediction M2 / N
    MomentCheck m2_drift;  // prediction -M2/N + lambda - s M3
    MomentCheck m2_qv;     // prediction (M4 - M2^2) / N
};

MomentReport moment_diagnostics(const std::vector<TypeProfile>& path,
                                const RatchetParams& p, double dt);

}  // namespace ratchet
