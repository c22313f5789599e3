#include "impactpath/entropy.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace impactpath;

TEST_CASE("fuzzy_membership") {
    CHECK(fuzzy_membership(0.0, 0.2, 2.0) == 1.0);
    // exp(-d^2/0.2) = 0.5 at d = sqrt(0.2 ln 2)
    const Scalar half = std::sqrt(0.2 * std::log(2.0));
    CHECK(fuzzy_membership(half, 0.2, 2.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fuzzy_membership(0.37233, 0.2, 2.0) == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(fuzzy_membership(10.0, 0.2, 2.0) < 1e-200);
}

TEST_CASE("constant windows give exactly zero entropy") {
    EntropyParams params;
    params.n = 30;
    const Series u = Series::Constant(30, 1.0);
    const Series v = Series::Constant(30, 2.0);
    CHECK(cross_fuzzy_entropy(u, v, params) == 0.0);
}

TEST_CASE("entropy matches the naive transcription oracle") {
    oracle::Rng rng(20240611);
    for (const Index n : {10, 30, 64}) {
        for (const int m : {1, 2, 3}) {
            EntropyParams params;
            params.n = n;
            params.m = m;
            for (int rep = 0; rep < 5; ++rep) {
                const Series u = rng.normal_series(n);
                const Series v = rng.normal_series(n);
                const Scalar got = cross_fuzzy_entropy(u, v, params);
                const Scalar want = oracle::cross_fuzzy_entropy(u, v, m, 0.2, 2.0);
                CHECK(got == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("entropy symmetry and offset invariance") {
    oracle::Rng rng(7);
    EntropyParams params;
    params.n = 24;
    for (int rep = 0; rep < 25; ++rep) {
        const Series u = rng.normal_series(24);
        const Series v = rng.normal_series(24);
        const Scalar forward = cross_fuzzy_entropy(u, v, params);
        CHECK(cross_fuzzy_entropy(v, u, params) == doctest::Approx(forward).epsilon(1e-14));
        // constant shifts cancel in the baseline subtraction; the only
        // residue is the rounding of the shifted inputs themselves
        CHECK(cross_fuzzy_entropy(u + 3.25, v, params) ==
              doctest::Approx(forward).epsilon(1e-12));
        CHECK(cross_fuzzy_entropy(u, v - 11.5, params) ==
              doctest::Approx(forward).epsilon(1e-12));
    }
}

TEST_CASE("entropy input validation") {
    EntropyParams params;
    params.n = 30;
    CHECK_THROWS_AS(cross_fuzzy_entropy(Series::Zero(30), Series::Zero(29), params), DataError);
    params.m = 29;
    CHECK_THROWS_AS(params.validate(), ConfigError);
    EntropyParams bad;
    bad.r1 = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("entropy_series windows and midpoints") {
    EntropyParams params;  // n=30, p=9
    oracle::Rng rng(99);
    const Series u = rng.normal_series(100);
    const Series v = rng.normal_series(100);
    const auto s = entropy_series(u, v, params);
    REQUIRE(s.size() == 8);
    for (Index i = 0; i < 8; ++i)
        CHECK(s.window_midpoints[static_cast<std::size_t>(i)] == 9 * i + 15);
}

TEST_CASE("entropy_series on identical constant ensembles is all zero") {
    EnsemblePair pair;
    pair.variable = "TREFHT";
    pair.region = "Tropical";
    pair.start_date = Date::from_ymd(1991, 6, 1);
    for (int e = 0; e < 3; ++e) {
        pair.forced.push_back(Series::Constant(60, 280.0));
        pair.counterfactual.push_back(Series::Constant(60, 280.0));
    }
    const auto s = entropy_series(pair, EntropyParams{});
    CHECK((s.values == 0.0).all());
}

TEST_CASE("decorrelated second half raises mean entropy") {
    // First half: v tracks u closely; second half: v is independent.
    oracle::Rng rng(1234);
    const Index total = 360;
    Series u(total), v(total);
    for (Index t = 0; t < total; ++t) {
        const Scalar base = std::sin(2.0 * M_PI * t / 45.0);
        u[t] = base + 0.05 * rng.normal();
        v[t] = t < total / 2 ? base + 0.05 * rng.normal()
                             : std::cos(2.0 * M_PI * t / 17.0) + 0.5 * rng.normal();
    }
    const auto s = entropy_series(u, v, EntropyParams{});
    const Index half = s.size() / 2;
    const Scalar first = s.values.head(half).mean();
    const Scalar second = s.values.tail(s.size() - half).mean();
    CHECK(second > first);
}
