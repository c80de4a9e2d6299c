#include "ratchet/numerics.hpp"

namespace ratchet {

std::vector<double> poisson_weights(double mu, std::size_t K) {
    if (!(mu > 0.0)) throw std::domain_error("poisson_weights: mu must be > 0");
    std::vector<double> w(K);
    // log-space recurrence keeps far-tail entries finite for large mu
    double logw = -mu;
    for (std::size_t k = 0; k < K; ++k) {
        w[k] = std::exp(logw);
        logw += std::log(mu) - std::log(static_cast<double>(k) + 1.0);
    }
    return w;
}

std::size_t poisson_window(double mu, double tol) {
    if (!(mu > 0.0)) throw std::domain_error("poisson_window: mu must be > 0");
    double term = std::exp(-mu);
    double cum = term;
    std::size_t k = 0;
    while (1.0 - cum >= tol) {
        ++k;
        if (k >= kMaxWindow)
            throw std::runtime_error("poisson_window: window cap exceeded");
        term *= mu / static_cast<double>(k);
        cum += term;
    }
    return k + 1;
}

namespace {

double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                double fm, double fb, double whole, double tol, int depth,
                bool& converged) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, m - a);
    const double right = simpson(fm, frm, fb, b - m);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) {
        converged = false;
        return left + right;
    }
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, converged) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, converged);
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double tol, int max_depth) {
    QuadratureResult res;
    if (a == b) return res;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = simpson(fa, fm, fb, b - a);
    bool converged = true;
    res.value = adaptive(f, a, b, fa, fm, fb, whole, tol, max_depth, converged);
    res.converged = converged;
    res.error_estimate = converged ? tol : std::fabs(res.value) * 1e-3;
    return res;
}

}  // namespace ratchet
