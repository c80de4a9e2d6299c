#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ratchet {

// Contract tolerance for truncated profile tails (window construction must
// leave less than this much mass outside the window).
inline constexpr double kProfileTailTol = 1e-12;

// Frequency profile over mutation classes. freqs[0] is the current best
// class; offset is its absolute class index k*.
struct TypeProfile {
    long long offset = 0;
    std::vector<double> freqs;

    std::size_t size() const { return freqs.size(); }
    double mass() const;
    // Mean class index relative to the best class.
    double mean() const;
    // Raw moment sum_k k^order freqs[k] (relative indices, unnormalized).
    double raw_moment(int order) const;
    // Central moment of given order about the mean.
    double central_moment(int order) const;

    void renormalize();
    // Drop exactly-zero leading classes (advancing offset) and trailing
    // classes whose combined mass is below tail_tol, then renormalize.
    void compact(double tail_tol);
};

// kappa[0] = -ln x0, kappa[k] for k >= 1 the usual cumulants of the profile
// viewed as a distribution on relative class indices.
struct CumulantVector {
    std::vector<double> kappa;
};

// Poisson(mu) truncated to window length K, renormalized; offset 0.
// Throws (reporting the required window) if K leaves more than
// kProfileTailTol outside.
TypeProfile poisson_profile(double mu, std::size_t K);

// Haigh's post-click profile: (1/(1-pi0)) (pi_1, pi_2, ...) with freqs[0]
// the new best class.
TypeProfile pi_tilde(double theta, std::size_t K);

// Poisson profile approximation based on best-class frequency y0.
TypeProfile ppa(double y0, double theta, std::size_t K);

// Cumulants kappa_0..kappa_K from raw moments via the standard recursion.
// Conditioning degrades roughly one decimal digit per two orders beyond
// K ~ 20; callers wanting high orders should not trust the top entries.
CumulantVector cumulants_of(const TypeProfile& x, std::size_t K);

// CSV serialization: header line, columns (absolute_class_index, frequency),
// 17 significant digits.
void write_profile_csv(const TypeProfile& x, std::ostream& out);
void write_profile_csv(const TypeProfile& x, const std::string& path);
TypeProfile read_profile_csv(std::istream& in);

}  // namespace ratchet
