#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ratchet {

// Fixed uniform-bin histogram on [lo, hi); out-of-range samples are clamped
// into the edge bins so recorded mass always sums to the sample weight.
class Histogram {
  public:
    Histogram() = default;
    Histogram(double lo, double hi, std::size_t bins);

    void add(double x, double weight = 1.0);
    void merge(const Histogram& other);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    std::size_t bins() const { return mass_.size(); }
    double bin_lo(std::size_t i) const { return lo_ + width_ * static_cast<double>(i); }
    double bin_hi(std::size_t i) const { return lo_ + width_ * static_cast<double>(i + 1); }
    double total() const { return total_; }
    const std::vector<double>& raw_mass() const { return mass_; }

    // Masses normalized to sum to 1 (empty histogram -> all zeros).
    std::vector<double> normalized() const;

    // Midpoint of the heaviest bin (ties resolved to the lowest bin).
    double mode_midpoint() const;

    // Midpoint of the bin with the heaviest (2 radius + 1)-bin neighborhood
    // sum; robust against single-bin spikes such as edge-clamp piles.
    double smoothed_mode_midpoint(std::size_t radius = 1) const;

  private:
    double lo_ = 0.0, hi_ = 1.0, width_ = 1.0, total_ = 0.0;
    std::vector<double> mass_;
};

// L1 distance between two equal-length mass vectors.
double l1_distance(const std::vector<double>& a, const std::vector<double>& b);

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased
    double se_mean = 0.0;
};

Summary summarize(const std::vector<double>& xs);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double intercept_se = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares of y on x; requires >= 3 points for the SEs.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ratchet
