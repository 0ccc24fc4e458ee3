#include <cmath>
#include <random>

#include <boost/math/special_functions/beta.hpp>

#include "doctest.h"
#include "oracles.hpp"
#include "repclust/binomial.hpp"
#include "repclust/error.hpp"

using namespace repclust;

TEST_CASE("zero matches in 1e8 trials") {
    const ConfidenceInterval ci = clopper_pearson(0, 100000000, 0.95);
    CHECK(ci.lo == 0.0);
    CHECK(ci.hi >= 3.68e-8);
    CHECK(ci.hi <= 3.70e-8);
    CHECK(ci.hi == doctest::Approx(-std::log(0.025) / 1e8).epsilon(1e-7));
    CHECK(ci.level == 0.95);
}

TEST_CASE("boundary cases are exact") {
    for (std::uint64_t n : {1, 2, 17, 1000}) {
        CHECK(clopper_pearson(0, n, 0.9).lo == 0.0);
        CHECK(clopper_pearson(n, n, 0.9).hi == 1.0);
        CHECK(clopper_pearson(0, n, 0.9).hi == doctest::Approx(1.0 - std::pow(0.05, 1.0 / double(n))).epsilon(1e-13));
    }
}

TEST_CASE("five of ten") {
    const ConfidenceInterval ci = clopper_pearson(5, 10, 0.95);
    const auto [lo, hi] = oracle::boost_clopper_pearson(5, 10, 0.95);
    CHECK(ci.lo == doctest::Approx(0.187).epsilon(1e-2));
    CHECK(ci.hi == doctest::Approx(0.813).epsilon(1e-2));
    CHECK(std::abs(ci.lo - lo) < 1e-12);
    CHECK(std::abs(ci.hi - hi) < 1e-12);
}

TEST_CASE("incomplete beta and quantile agree with an independent implementation") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double a = 0.5 + 200.0 * u(gen), b = 0.5 + 200.0 * u(gen), x = u(gen);
        CHECK(std::abs(regularized_incomplete_beta(x, a, b) - boost::math::ibeta(a, b, x)) < 1e-12);
        const double p = u(gen);
        CHECK(oracle::relative_error(beta_quantile(p, a, b), boost::math::ibeta_inv(a, b, p)) < 1e-10);
    }
    CHECK(regularized_incomplete_beta(0.0, 2, 3) == 0.0);
    CHECK(regularized_incomplete_beta(1.0, 2, 3) == 1.0);
}

TEST_CASE("intervals agree with the inverse-beta oracle") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::uint64_t n = 1 + gen() % 100000;
        const std::uint64_t x = gen() % (n + 1);
        const double level = trial % 2 ? 0.95 : 0.99;
        const ConfidenceInterval ci = clopper_pearson(x, n, level);
        const auto [lo, hi] = oracle::boost_clopper_pearson(x, n, level);
        CHECK(oracle::relative_error(ci.lo, lo) < 1e-9);
        CHECK(oracle::relative_error(ci.hi, hi) < 1e-9);
        CHECK(0.0 <= ci.lo);
        CHECK(ci.lo <= double(x) / double(n));
        CHECK(double(x) / double(n) <= ci.hi);
        CHECK(ci.hi <= 1.0);
    }
}

TEST_CASE("nesting and symmetry") {
    for (std::uint64_t n : {1, 5, 20, 333}) {
        for (std::uint64_t x = 0; x <= n; x += std::max<std::uint64_t>(1, n / 10)) {
            const auto c95 = clopper_pearson(x, n, 0.95), c99 = clopper_pearson(x, n, 0.99);
            CHECK(c99.lo <= c95.lo);
            CHECK(c99.hi >= c95.hi);
            const auto mirror = clopper_pearson(n - x, n, 0.95);
            CHECK(std::abs(c95.lo - (1.0 - mirror.hi)) < 1e-12);
            CHECK(std::abs(c95.hi - (1.0 - mirror.lo)) < 1e-12);
        }
    }
}

TEST_CASE("exact coverage for small n") {
    for (std::uint64_t n = 1; n <= 20; ++n) {
        std::vector<ConfidenceInterval> cis;
        for (std::uint64_t x = 0; x <= n; ++x) cis.push_back(clopper_pearson(x, n, 0.95));
        for (int g = 0; g <= 100; ++g) {
            const double p = g / 100.0;
            double coverage = 0.0;
            for (std::uint64_t x = 0; x <= n; ++x)
                if (cis[x].lo <= p && p <= cis[x].hi) coverage += oracle::binomial_pmf(x, n, p);
            CHECK(coverage >= 0.95 - 1e-12);
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(clopper_pearson(3, 2, 0.95), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(0, 0, 0.95), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(1, 2, 1.0), InvalidArgument);
    CHECK_THROWS_AS(clopper_pearson(1, 2, 0.0), InvalidArgument);
    CHECK_THROWS_AS(beta_quantile(0.5, -1.0, 2.0), InvalidArgument);
}
