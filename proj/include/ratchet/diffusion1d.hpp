#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ratchet/forward_sim.hpp"
#include "ratchet/params.hpp"
#include "ratchet/stats.hpp"

namespace ratchet {

// One-dimensional diffusion for the best-class frequency:
//   dY = drift_coef (1 - Y/pi0) Y dt + sqrt(Y/N) dW
// absorbing at click_threshold, reflecting at y_max. drift_coef = 0 gives
// the driftless case used to validate the Green function machinery.
struct DiffusionSpec {
    Regime regime;
    RatchetParams params;
    double drift_coef = 0.0;
    double pi0 = 1.0;
    double y_max = 1.0;
    double click_threshold = 0.0;  // alternative: 1/(2N)
};

// Spec with the defaults: y_max = min(1, 8 pi0), absorption at 0.
DiffusionSpec make_spec(const Regime& regime, const RatchetParams& p);
DiffusionSpec zero_drift_spec(long long N, double y_max);

// Post-click entry state: pi_1/(1-pi0) for SmallA, pi0 for LargeA,
// 1.6 pi0 otherwise.
double entry_point(const DiffusionSpec& spec);

// Regime drift at y: SmallA lambda (pi0 - y) y; AEqualsOne (1/(e-1)) s
// (1 - y/pi0) y; LargeA s (1 - y/pi0) y; Generic s (eta/(e^eta-1)) (1 - y/pi0) y.
double drift(const Regime& regime, double y, const RatchetParams& p);

// Full-truncation Euler simulation of the regime diffusion with click
// detection and per-regime post-click resets (SmallA runs the phase-one
// mean-reversion dynamics from pi_1/(1-pi0) until 1.6 pi0 first; that time
// counts toward the inter-click interval). Optional occupancy histogram
// accumulates time spent per Y0 bin; max_clicks < 0 means horizon-only.
std::vector<ClickRecord> simulate_clicks(const DiffusionSpec& spec, double horizon,
                                         double dt, std::uint64_t seed,
                                         Histogram* occupancy = nullptr,
                                         long long max_clicks = -1);
std::vector<ClickRecord> simulate_clicks(const Regime& regime, const RatchetParams& p,
                                         double horizon, double dt, std::uint64_t seed);

// Single absorption time from x0 under full-truncation Euler (no resets);
// Monte Carlo oracle for the Green-function expected click time. Returns
// t_cap if not absorbed in time.
double first_passage_time(const DiffusionSpec& spec, double x0, double dt, Rng& rng,
                          double t_cap);

struct RescaleResult {
    double coefficient = 0.0;
    std::string description;
};

// Mean-reversion coefficient of the rescaled equation
// dZ = coeff (1-Z) Z dt + sqrt(Z) dW under Z(t) = Y0(N pi0 t)/pi0.
RescaleResult rescale(const Regime& regime, const RatchetParams& p);

struct ScaleSpeed {
    double scale_density = 0.0;   // s(y), normalized so s(0) = 1
    double scale_function = 0.0;  // S(y) = int_0^y s(u) du
    double speed_density = 0.0;   // m(y) = 1/(sigma^2(y) s(y))
};

ScaleSpeed scale_speed(const DiffusionSpec& spec, double y);

struct GreenResult {
    std::vector<double> y;
    std::vector<double> green;               // G(x0, y) = 2 m(y) S(x0 ^ y)
    std::vector<double> occupation_density;  // green / expected_click_time
    double expected_click_time = 0.0;
};

// Green function of the diffusion absorbed at 0 and reflected at y_max,
// evaluated on the given y grid; expected_click_time by quadrature.
GreenResult green_function(const DiffusionSpec& spec, double x0,
                           const std::vector<double>& grid);

// Occupation mass per histogram bin (integral of the normalized Green
// density over each bin), for L1 comparison against simulated histograms.
std::vector<double> green_bin_masses(const DiffusionSpec& spec, double x0,
                                     const Histogram& bins);

}  // namespace ratchet
