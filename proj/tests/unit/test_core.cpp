#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratchet/params.hpp"

using namespace ratchet;

TEST_CASE("derive_params matches the defining arithmetic") {
    const DerivedParams d = derive_params({10000, 0.1, 0.02});
    CHECK(d.theta == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(d.pi0 == doctest::Approx(0.0067379469990854673).epsilon(1e-14));
    CHECK(d.n0 == doctest::Approx(67.379469990854673).epsilon(1e-14));
    CHECK(d.gamma == doctest::Approx(0.72382413650541977).epsilon(1e-14));
    CHECK(d.tau_defined);
    CHECK(d.tau == doctest::Approx(80.471895621705016).epsilon(1e-14));

    const DerivedParams d2 = derive_params({100000, 0.01, 0.005});
    CHECK(d2.theta == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(d2.n0 == doctest::Approx(13533.528323661271).epsilon(1e-12));
    CHECK(d2.gamma == doctest::Approx(0.28952965460216789).epsilon(1e-12));
    CHECK(d2.tau == doctest::Approx(138.62943611198907).epsilon(1e-13));
}

TEST_CASE("pi0 and n0 are exact transforms") {
    const RatchetParams p{1234, 0.07, 0.013};
    const DerivedParams d = derive_params(p);
    CHECK(d.pi0 == std::exp(-p.lambda / p.s));
    CHECK(d.n0 == static_cast<double>(p.N) * d.pi0);
}

TEST_CASE("identity n0 = N (N lambda)^(-gamma)") {
    for (const auto& p : {RatchetParams{10000, 0.1, 0.02}, RatchetParams{100000, 0.01, 0.005},
                          RatchetParams{500, 0.05, 0.003}, RatchetParams{100000, 0.9, 0.07}}) {
        const DerivedParams d = derive_params(p);
        const double alt =
            static_cast<double>(p.N) * std::pow(p.n_lambda(), -d.gamma);
        CHECK(std::fabs(d.n0 - alt) / d.n0 < 1e-12);
    }
}

TEST_CASE("tau undefined at theta <= 1, not an error") {
    const DerivedParams d = derive_params({1000, 0.01, 0.01});  // theta = 1
    CHECK_FALSE(d.tau_defined);
}

TEST_CASE("derive_params domain errors") {
    CHECK_THROWS_AS(derive_params({10, 0.01, 0.02}), std::domain_error);   // N lambda <= 1
    CHECK_THROWS_AS(derive_params({1000, 0.1, 1.5}), std::domain_error);   // s outside (0,1)
    CHECK_THROWS_AS(derive_params({1000, 0.1, 0.0}), std::domain_error);
    CHECK_THROWS_AS(derive_params({0, 0.1, 0.1}), std::domain_error);
}

TEST_CASE("solve_s_for_gamma inverts the gamma definition") {
    CHECK(solve_s_for_gamma(100000, 0.1, 0.5) ==
          doctest::Approx(0.021714724095162591).epsilon(1e-14));
    CHECK(solve_s_for_gamma(100000, 0.01, 0.7) ==
          doctest::Approx(0.0020680689614440563).epsilon(1e-13));
    // round trip
    for (double gamma : {0.3, 0.5, 0.72, 0.9, 1.1}) {
        const long long N = 20000;
        const double lambda = 0.03;
        const double s = solve_s_for_gamma(N, lambda, gamma);
        const DerivedParams d = derive_params({N, lambda, s});
        CHECK(std::fabs(d.gamma - gamma) / gamma < 1e-12);
    }
    CHECK_THROWS_AS(solve_s_for_gamma(10, 0.01, 0.5), std::domain_error);
}

TEST_CASE("mean reversion coefficients per regime") {
    // small-A at gamma = 1/2: exponent zero for any N lambda
    for (double lambda : {0.001, 0.01, 0.1}) {
        const long long N = 100000;
        const double s = solve_s_for_gamma(N, lambda, 0.5);
        CHECK(mean_reversion_coefficient(Regime::small_a(), N, lambda, s) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    // A=1 at gamma=0.5, N lambda = 900: about 5.1
    {
        const long long N = 9000;
        const double lambda = 0.1;
        const double s = solve_s_for_gamma(N, lambda, 0.5);
        CHECK(mean_reversion_coefficient(Regime::a_equals_one(), N, lambda, s) ==
              doctest::Approx(5.1332807969961104).epsilon(1e-12));
        // large-A value is the A=1 value without the 1/(e-1) prefactor
        CHECK(mean_reversion_coefficient(Regime::large_a(), N, lambda, s) ==
              doctest::Approx(5.1332807969961104 / kEminus1Inv).epsilon(1e-12));
        // Generic(1) coincides with A=1
        CHECK(mean_reversion_coefficient(Regime::generic(1.0), N, lambda, s) ==
              doctest::Approx(5.1332807969961104).epsilon(1e-9));
    }
    // small-A, gamma=0.3, N lambda = 100: 100^0.4
    {
        const long long N = 10000;
        const double lambda = 0.01;
        const double s = solve_s_for_gamma(N, lambda, 0.3);
        CHECK(mean_reversion_coefficient(Regime::small_a(), N, lambda, s) ==
              doctest::Approx(std::pow(100.0, 0.4)).epsilon(1e-12));
    }
}

TEST_CASE("threshold_n_lambda reproduces the table within factor 2") {
    const double gammas[] = {0.3, 0.4, 0.5, 0.55, 0.6, 0.7, 0.8, 0.9};
    const double table[] = {20.0, 1e2, 9e2, 4e3, 2e4, 4e6, 2e11, 8e26};
    for (int i = 0; i < 8; ++i) {
        const double x = threshold_n_lambda(gammas[i], 5.0);
        CHECK(x >= table[i] / 2.0);
        CHECK(x <= table[i] * 2.0);
    }
}

TEST_CASE("threshold_n_lambda inverts mean_reversion_coefficient") {
    for (double gamma : {0.35, 0.5, 0.65, 0.8}) {
        const double c = 5.0;
        const double x = threshold_n_lambda(gamma, c);
        // evaluate the A=1 coefficient at the returned N lambda; scale N
        // with the threshold so lambda and s stay in their valid ranges
        const long long N = static_cast<long long>(std::ceil(x)) * 10;
        const double lambda = x / static_cast<double>(N);
        const double s = solve_s_for_gamma(N, lambda, gamma);
        const double coeff =
            mean_reversion_coefficient(Regime::a_equals_one(), N, lambda, s);
        CHECK(coeff >= c);
        CHECK(coeff <= c * 1.01);
    }
}

TEST_CASE("threshold_n_lambda is monotone in gamma at c = 5") {
    double prev = 0.0;
    for (double gamma : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9}) {
        const double x = threshold_n_lambda(gamma, 5.0);
        CHECK(x > prev);
        prev = x;
    }
}

TEST_CASE("threshold_n_lambda returns infinity when unreachable") {
    // close to gamma = 1 the coefficient grows like x^(1-gamma)/ln x, far
    // too slowly to reach a large c below the 1e300 cap
    const double x = threshold_n_lambda(0.999999, 1e6);
    CHECK(std::isinf(x));
}

TEST_CASE("haigh_click_time examples") {
    CHECK(haigh_click_time({10000, 0.1, 0.02}) ==
          doctest::Approx(360.78394535045739).epsilon(1e-13));
    CHECK(haigh_click_time({1000, 0.05, 0.01}) ==
          doctest::Approx(218.21785338338057).epsilon(1e-13));
    // theta = 1: the 7 ln(theta) term vanishes
    CHECK(haigh_click_time({1000, 0.01, 0.01}) ==
          doctest::Approx(1651.5177646857693).epsilon(1e-13));
}

TEST_CASE("operations are pure: repeated calls bit-identical") {
    const RatchetParams p{10000, 0.1, 0.02};
    const DerivedParams a = derive_params(p);
    const DerivedParams b = derive_params(p);
    CHECK(a.theta == b.theta);
    CHECK(a.pi0 == b.pi0);
    CHECK(a.n0 == b.n0);
    CHECK(a.gamma == b.gamma);
    CHECK(a.tau == b.tau);
    CHECK(haigh_click_time(p) == haigh_click_time(p));
    CHECK(threshold_n_lambda(0.5, 5.0) == threshold_n_lambda(0.5, 5.0));
}
