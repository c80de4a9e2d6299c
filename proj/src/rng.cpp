#include "ratchet/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ratchet {

long long Rng::binomial(long long n, double p) {
    if (n < 0) throw std::domain_error("binomial: n < 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binomial: p outside [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;

    const double r = std::min(p, 1.0 - p);
    const long long k = (static_cast<double>(n) * r < 30.0) ? binomial_inversion(n, r)
                                                            : binomial_btpe(n, r);
    return (p > 0.5) ? n - k : k;
}

// Inversion by sequential search of the cdf; valid while n*r stays small
// enough that q^n does not underflow (n*r < 30 guarantees this).
long long Rng::binomial_inversion(long long n, double r) {
    const double q = 1.0 - r;
    const double s = r / q;
    const double a = (static_cast<double>(n) + 1.0) * s;
    const double qn = std::exp(static_cast<double>(n) * std::log(q));
    for (;;) {
        double u = uniform01();
        double f = qn;
        long long x = 0;
        while (u > f) {
            u -= f;
            ++x;
            if (x > n || x > 140) break;  // fp dust; restart
            f *= a / static_cast<double>(x) - s;
        }
        if (u <= f && x <= n) return x;
    }
}

// BTPE: triangle + parallelogram + two exponential tails majorizing the
// scaled pmf, with squeeze and Stirling-corrected exact test.
long long Rng::binomial_btpe(long long n, double r) {
    const double nd = static_cast<double>(n);
    const double q = 1.0 - r;
    const double nrq = nd * r * q;
    const double fm = nd * r + r;
    const long long m = static_cast<long long>(std::floor(fm));
    const double p1 = std::floor(2.195 * std::sqrt(nrq) - 4.6 * q) + 0.5;
    const double xm = static_cast<double>(m) + 0.5;
    const double xl = xm - p1;
    const double xr = xm + p1;
    const double c = 0.134 + 20.5 / (15.3 + static_cast<double>(m));
    double a = (fm - xl) / (fm - xl * r);
    const double laml = a * (1.0 + 0.5 * a);
    a = (xr - fm) / (xr * q);
    const double lamr = a * (1.0 + 0.5 * a);
    const double p2 = p1 * (1.0 + 2.0 * c);
    const double p3 = p2 + c / laml;
    const double p4 = p3 + c / lamr;

    for (;;) {
        const double u = uniform01() * p4;
        double v = uniform_pos();
        long long y;

        if (u <= p1) {  // triangular central region
            return static_cast<long long>(std::floor(xm - p1 * v + u));
        }
        if (u <= p2) {  // parallelogram
            const double x = xl + (u - p1) / c;
            v = v * c + 1.0 - std::fabs(xm - x) / p1;
            if (v > 1.0) continue;
            y = static_cast<long long>(std::floor(x));
        } else if (u <= p3) {  // left exponential tail
            y = static_cast<long long>(std::floor(xl + std::log(v) / laml));
            if (y < 0) continue;
            v = v * (u - p2) * laml;
        } else {  // right exponential tail
            y = static_cast<long long>(std::floor(xr - std::log(v) / lamr));
            if (y > n) continue;
            v = v * (u - p3) * lamr;
        }

        const long long kdist = std::llabs(y - m);
        if (kdist <= 20 || static_cast<double>(kdist) >= nrq / 2.0 - 1.0) {
            // evaluate f(y)/f(m) directly via the pmf recurrence
            const double s = r / q;
            const double aa = s * (nd + 1.0);
            double f = 1.0;
            if (m < y) {
                for (long long i = m + 1; i <= y; ++i) f *= aa / static_cast<double>(i) - s;
            } else if (m > y) {
                for (long long i = y + 1; i <= m; ++i) f /= aa / static_cast<double>(i) - s;
            }
            if (v <= f) return y;
            continue;
        }

        // squeeze on log scale
        const double kd = static_cast<double>(kdist);
        const double rho =
            (kd / nrq) * ((kd * (kd / 3.0 + 0.625) + 1.0 / 6.0) / nrq + 0.5);
        const double t = -kd * kd / (2.0 * nrq);
        const double logv = std::log(v);
        if (logv < t - rho) return y;
        if (logv > t + rho) continue;

        // exact test with Stirling series corrections
        const double x1 = static_cast<double>(y + 1);
        const double f1 = static_cast<double>(m + 1);
        const double z = static_cast<double>(n + 1 - m);
        const double w = static_cast<double>(n - y + 1);
        const double x2 = x1 * x1;
        const double f2 = f1 * f1;
        const double z2 = z * z;
        const double w2 = w * w;
        const double bound =
            xm * std::log(f1 / x1) + (nd - static_cast<double>(m) + 0.5) * std::log(z / w) +
            static_cast<double>(y - m) * std::log(w * r / (x1 * q)) +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 / 166320.0 +
            (13860.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w / 166320.0;
        if (logv <= bound) return y;
    }
}

}  // namespace ratchet
