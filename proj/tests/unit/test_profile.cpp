#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ratchet/numerics.hpp"
#include "ratchet/profile.hpp"

using namespace ratchet;

TEST_CASE("poisson_profile basics") {
    const TypeProfile x = poisson_profile(5.0, 45);
    CHECK(x.offset == 0);
    CHECK(x.freqs[0] == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
    CHECK(x.freqs[1] / x.freqs[0] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(x.mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(x.mean() == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("poisson_profile rejects too-small windows with guidance") {
    CHECK_THROWS_WITH_AS(poisson_profile(5.0, 10) , doctest::Contains("need K >="),
                         std::invalid_argument);
}

TEST_CASE("pi_tilde matches the post-click profile") {
    const double theta = 5.0;
    const TypeProfile x = pi_tilde(theta, 50);
    // component 0 = theta e^-theta / (1 - e^-theta)
    CHECK(x.freqs[0] == doctest::Approx(0.033918274531521155).epsilon(1e-12));
    CHECK(x.mass() == doctest::Approx(1.0).epsilon(1e-12));
    // mean after the index shift: theta/(1-e^-theta) - 1 (direct summation oracle)
    double oracle = 0.0;
    {
        double term = std::exp(-theta);
        double total = 0.0;
        for (int k = 1; k < 200; ++k) {
            term *= theta / k;  // pi_k
            oracle += (k - 1) * term;
            total += term;
        }
        oracle /= total;
    }
    CHECK(x.mean() == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(x.mean() == doctest::Approx(4.0339182745315212).epsilon(1e-10));
}

TEST_CASE("ppa components and mass") {
    const double theta = 5.0;
    // y0 = pi0 collapses to Poisson(theta)
    const double pi0 = std::exp(-theta);
    const TypeProfile collapse = ppa(pi0, theta, 45);
    const TypeProfile pois = poisson_profile(theta, 45);
    for (std::size_t k = 0; k < collapse.size(); ++k)
        CHECK(collapse.freqs[k] == doctest::Approx(pois.freqs[k]).epsilon(1e-9));

    const TypeProfile x = ppa(0.01, theta, 45);
    CHECK(x.freqs[0] == 0.01);
    CHECK(x.freqs[1] == doctest::Approx(0.033579091786205944).epsilon(1e-10));
    CHECK(x.mass() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(ppa(0.0, theta, 45), std::domain_error);
    CHECK_THROWS_AS(ppa(1.0, theta, 45), std::domain_error);
}

TEST_CASE("cumulants of a Poisson profile are all equal to the mean") {
    const TypeProfile x = poisson_profile(5.0, 60);
    const CumulantVector cv = cumulants_of(x, 3);
    CHECK(cv.kappa[0] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(cv.kappa[1] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(cv.kappa[2] == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(cv.kappa[3] == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("cumulants of degenerate and Bernoulli profiles") {
    TypeProfile point;
    point.freqs = {1.0};
    const CumulantVector cv = cumulants_of(point, 4);
    for (double k : cv.kappa) CHECK(k == doctest::Approx(0.0).epsilon(1e-15));

    TypeProfile bern;
    bern.freqs = {0.5, 0.5};
    const CumulantVector cb = cumulants_of(bern, 3);
    CHECK(cb.kappa[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(cb.kappa[1] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(cb.kappa[2] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cb.kappa[3] == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("cumulants require x0 > 0") {
    TypeProfile x;
    x.freqs = {0.0, 1.0};
    CHECK_THROWS_AS(cumulants_of(x, 2), std::domain_error);
}

TEST_CASE("profile csv round trip keeps full precision") {
    TypeProfile x = poisson_profile(3.3, 40);
    x.offset = 17;
    std::ostringstream out;
    write_profile_csv(x, out);
    std::istringstream in(out.str());
    const TypeProfile back = read_profile_csv(in);
    CHECK(back.offset == x.offset);
    REQUIRE(back.size() == x.size());
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(back.freqs[k] == x.freqs[k]);
    // header present
    CHECK(out.str().rfind("absolute_class_index,frequency\n", 0) == 0);
}

TEST_CASE("compact drops leading zeros and advances the offset") {
    TypeProfile x;
    x.freqs = {0.0, 0.0, 0.5, 0.5};
    x.offset = 3;
    x.compact(1e-14);
    CHECK(x.offset == 5);
    CHECK(x.freqs.size() == 2);
    CHECK(x.mass() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("poisson_window covers all but tol of the mass") {
    for (double mu : {0.1, 1.0, 5.0, 20.0}) {
        const std::size_t K = poisson_window(mu, 1e-12);
        const auto w = poisson_weights(mu, K);
        double sum = 0.0;
        for (double v : w) sum += v;
        CHECK(1.0 - sum < 1e-12);
        CHECK(1.0 - sum >= 0.0);
    }
}
