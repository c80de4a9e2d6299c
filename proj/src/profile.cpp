#include "ratchet/profile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ratchet/numerics.hpp"

namespace ratchet {

double TypeProfile::mass() const {
    double m = 0.0;
    for (double f : freqs) m += f;
    return m;
}

double TypeProfile::mean() const {
    double m = 0.0, w = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        m += static_cast<double>(k) * freqs[k];
        w += freqs[k];
    }
    if (w <= 0.0) throw std::domain_error("TypeProfile::mean: empty profile");
    return m / w;
}

double TypeProfile::raw_moment(int order) const {
    double m = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k)
        m += std::pow(static_cast<double>(k), order) * freqs[k];
    return m;
}

double TypeProfile::central_moment(int order) const {
    const double mu = mean();
    double m = 0.0, w = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        m += std::pow(static_cast<double>(k) - mu, order) * freqs[k];
        w += freqs[k];
    }
    return m / w;
}

void TypeProfile::renormalize() {
    const double m = mass();
    if (m <= 0.0) throw std::domain_error("TypeProfile::renormalize: zero mass");
    for (double& f : freqs) f /= m;
}

void TypeProfile::compact(double tail_tol) {
    std::size_t lead = 0;
    while (lead < freqs.size() && freqs[lead] == 0.0) ++lead;
    if (lead == freqs.size())
        throw std::domain_error("TypeProfile::compact: all-zero profile");
    if (lead > 0) {
        freqs.erase(freqs.begin(), freqs.begin() + static_cast<long>(lead));
        offset += static_cast<long long>(lead);
    }
    double tail = 0.0;
    std::size_t keep = freqs.size();
    while (keep > 1 && tail + freqs[keep - 1] < tail_tol) {
        tail += freqs[keep - 1];
        --keep;
    }
    freqs.resize(keep);
    renormalize();
}

TypeProfile poisson_profile(double mu, std::size_t K) {
    if (!(mu > 0.0)) throw std::domain_error("poisson_profile: mu must be > 0");
    const std::size_t need = poisson_window(mu, kProfileTailTol);
    if (K < need)
        throw std::invalid_argument("poisson_profile: window too small, need K >= " +
                                    std::to_string(need));
    TypeProfile x;
    x.freqs = poisson_weights(mu, K);
    x.renormalize();
    return x;
}

TypeProfile pi_tilde(double theta, std::size_t K) {
    if (!(theta > 0.0)) throw std::domain_error("pi_tilde: theta must be > 0");
    const std::size_t need = poisson_window(theta, kProfileTailTol);
    if (K + 1 < need)
        throw std::invalid_argument("pi_tilde: window too small, need K >= " +
                                    std::to_string(need - 1));
    // classes 1,2,... of Poisson(theta), re-indexed so the new best class is 0
    const std::vector<double> pois = poisson_weights(theta, K + 1);
    TypeProfile x;
    x.freqs.assign(pois.begin() + 1, pois.end());
    x.renormalize();
    return x;
}

TypeProfile ppa(double y0, double theta, std::size_t K) {
    if (!(y0 > 0.0 && y0 < 1.0)) throw std::domain_error("ppa: y0 must lie in (0,1)");
    if (!(theta > 0.0)) throw std::domain_error("ppa: theta must be > 0");
    const std::size_t need = poisson_window(theta, kProfileTailTol);
    if (K < need)
        throw std::invalid_argument("ppa: window too small, need K >= " +
                                    std::to_string(need));
    const std::vector<double> pois = poisson_weights(theta, K);
    double upper = 0.0;
    for (std::size_t k = 1; k < K; ++k) upper += pois[k];
    TypeProfile x;
    x.freqs.resize(K);
    x.freqs[0] = y0;
    // (1-y0)/(1-pi0) pi_k, with the truncated upper mass standing in for 1-pi0
    for (std::size_t k = 1; k < K; ++k) x.freqs[k] = (1.0 - y0) * pois[k] / upper;
    return x;
}

CumulantVector cumulants_of(const TypeProfile& x, std::size_t K) {
    if (x.freqs.empty()) throw std::domain_error("cumulants_of: empty profile");
    if (!(x.freqs[0] > 0.0))
        throw std::domain_error("cumulants_of: x0 = 0, kappa_0 undefined");

    const double mass = x.mass();
    std::vector<double> m(K + 1, 0.0);  // raw moments, m[0] = 1
    m[0] = 1.0;
    for (std::size_t k = 0; k < x.freqs.size(); ++k) {
        const double w = x.freqs[k] / mass;
        double pk = 1.0;
        for (std::size_t j = 1; j <= K; ++j) {
            pk *= static_cast<double>(k);
            m[j] += pk * w;
        }
    }

    CumulantVector cv;
    cv.kappa.assign(K + 1, 0.0);
    cv.kappa[0] = -std::log(x.freqs[0] / mass);
    // kappa_n = m_n - sum_{j=1}^{n-1} C(n-1, j-1) kappa_j m_{n-j}
    for (std::size_t n = 1; n <= K; ++n) {
        double acc = m[n];
        double binom = 1.0;  // C(n-1, j-1), starts at j=1
        for (std::size_t j = 1; j < n; ++j) {
            acc -= binom * cv.kappa[j] * m[n - j];
            binom *= static_cast<double>(n - 1 - (j - 1)) / static_cast<double>(j);
        }
        cv.kappa[n] = acc;
    }
    return cv;
}

void write_profile_csv(const TypeProfile& x, std::ostream& out) {
    out << "absolute_class_index,frequency\n";
    char buf[64];
    for (std::size_t k = 0; k < x.freqs.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n",
                      x.offset + static_cast<long long>(k), x.freqs[k]);
        out << buf;
    }
}

void write_profile_csv(const TypeProfile& x, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
    if (!out) throw std::runtime_error("cannot open " + path);
    write_profile_csv(x, out);
}

TypeProfile read_profile_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_profile_csv: empty input");
    TypeProfile x;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw std::runtime_error("read_profile_csv: malformed row: " + line);
        const long long idx = std::stoll(a);
        const double f = std::stod(b);
        if (first) {
            x.offset = idx;
            first = false;
        }
        const long long rel = idx - x.offset;
        if (rel < 0 || rel != static_cast<long long>(x.freqs.size()))
            throw std::runtime_error("read_profile_csv: non-contiguous class indices");
        x.freqs.push_back(f);
    }
    if (x.freqs.empty()) throw std::runtime_error("read_profile_csv: no data rows");
    return x;
}

}  // namespace ratchet
