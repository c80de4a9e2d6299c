#include "ratchet/stats.hpp"

#include <cmath>

namespace ratchet {

Histogram::Histogram(double lo, double hi, std::size_t bins)
    : lo_(lo), hi_(hi), mass_(bins, 0.0) {
    if (!(hi > lo) || bins == 0)
        throw std::invalid_argument("Histogram: need hi > lo and bins > 0");
    width_ = (hi - lo) / static_cast<double>(bins);
}

void Histogram::add(double x, double weight) {
    long long i = static_cast<long long>(std::floor((x - lo_) / width_));
    if (i < 0) i = 0;
    if (i >= static_cast<long long>(mass_.size()))
        i = static_cast<long long>(mass_.size()) - 1;
    mass_[static_cast<std::size_t>(i)] += weight;
    total_ += weight;
}

void Histogram::merge(const Histogram& other) {
    if (other.mass_.size() != mass_.size() || other.lo_ != lo_ || other.hi_ != hi_)
        throw std::invalid_argument("Histogram::merge: incompatible binning");
    for (std::size_t i = 0; i < mass_.size(); ++i) mass_[i] += other.mass_[i];
    total_ += other.total_;
}

std::vector<double> Histogram::normalized() const {
    std::vector<double> out(mass_.size(), 0.0);
    if (total_ <= 0.0) return out;
    for (std::size_t i = 0; i < mass_.size(); ++i) out[i] = mass_[i] / total_;
    return out;
}

double Histogram::mode_midpoint() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < mass_.size(); ++i)
        if (mass_[i] > mass_[best]) best = i;
    return 0.5 * (bin_lo(best) + bin_hi(best));
}

double Histogram::smoothed_mode_midpoint(std::size_t radius) const {
    std::size_t best = 0;
    double best_sum = -1.0;
    for (std::size_t i = 0; i < mass_.size(); ++i) {
        double sum = 0.0;
        const std::size_t lo = (i >= radius) ? i - radius : 0;
        const std::size_t hi = std::min(i + radius, mass_.size() - 1);
        for (std::size_t j = lo; j <= hi; ++j) sum += mass_[j];
        if (sum > best_sum) {
            best_sum = sum;
            best = i;
        }
    }
    return 0.5 * (bin_lo(best) + bin_hi(best));
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
    return d;
}

Summary summarize(const std::vector<double>& xs) {
    Summary s;
    s.n = xs.size();
    if (s.n == 0) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.variance = ss / static_cast<double>(s.n - 1);
        s.se_mean = std::sqrt(s.variance / static_cast<double>(s.n));
    }
    return s;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("fit_line: need at least 3 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw std::invalid_argument("fit_line: degenerate x values");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.resize(n);
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += fit.residuals[i] * fit.residuals[i];
    }
    const double sigma2 = sse / static_cast<double>(n - 2);
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.intercept_se = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    return fit;
}

}  // namespace ratchet
