#pragma once

#include "ratchet/params.hpp"
#include "ratchet/profile.hpp"

namespace ratchet {

// Exact flow of the infinite-population dynamics for time t, as the
// factorized map: selection tilt by e^(-s t k), then convolution with
// Poisson((lambda/s)(1 - e^(-s t))). Equivalent to the cumulant-space
// matrix-exponential solution; evolve_ode is the independent check.
TypeProfile evolve_closed(const TypeProfile& x0, const RatchetParams& p, double t);

// Fixed-step classic RK4 integration of
//   dx_k/dt = (s (M1 - k) - lambda) x_k + lambda x_{k-1}
// on the truncated window. Oracle for evolve_closed.
TypeProfile evolve_ode(const TypeProfile& x0, const RatchetParams& p, double t,
                       double dt);

struct ClosedObservables {
    double x0 = 0.0;
    double m1 = 0.0;
};

// x0(t) and M1(t) evaluated directly from the initial profile's generating
// function, without evolving the full profile.
ClosedObservables closed_observables(const TypeProfile& x0, const RatchetParams& p,
                                     double t);

// Best-class frequency and mean along the flow started from pi_tilde:
// with r = theta e^(-s t), x0 = e^(-theta) r/(1-e^(-r)),
// m1 = theta - 1 + r/(e^r - 1).
ClosedObservables phase_one(double theta, double s, double t);

// c/s ratio of the phase-one drift, (r(1-e^-r) - r^2 e^-r) /
// (r(1-e^-r) - (1-e^-r)^2); series branch below r = 1e-3.
double mean_reversion_ratio(double r);

// Mean of the profile that solves the dynamics for time A*tau started from
// a PPA, expressed through the already-relaxed best-class frequency:
// M1 = theta + (eta/(e^eta - 1)) (1 - y0/pi0), eta = theta^(1-A).
double relaxed_m1(double y0_at_Atau, double theta, double A);

}  // namespace ratchet
