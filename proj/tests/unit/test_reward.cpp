#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <limits>
#include <vector>

#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"

using namespace ratectl;

namespace {
constexpr double e = 2.718281828459045;
}

TEST_CASE("transform_error examples")
{
    TransformConfig const c1 {1.0, false};
    CHECK(transform_error(0.0, c1) == 0.0);
    CHECK(transform_error(e - 1.0, c1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transform_error(-(e - 1.0), c1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(transform_error(-3.25, TransformConfig::function_minimization()) == -3.25);
    CHECK_THROWS_AS(transform_error(std::numeric_limits<double>::infinity(), c1), std::domain_error);
    CHECK_THROWS_AS(transform_error(std::nan(""), c1), std::domain_error);
}

TEST_CASE("transform is odd and strictly increasing")
{
    Rng rng(7);
    for (double c : {0.01, 1.0, 5.0}) {
        TransformConfig const cfg {c, false};
        for (int i = 0; i < 2000; ++i) {
            double const x = rng.uniform(-1e4, 1e4);
            double const y = x + rng.uniform(1e-6, 10.0);
            CHECK(transform_error(-x, cfg) == -transform_error(x, cfg));
            CHECK(transform_error(x, cfg) < transform_error(y, cfg));
        }
    }
}

TEST_CASE("immediate_reward examples and antisymmetry")
{
    TransformConfig const c1 {1.0, false};
    CHECK(immediate_reward(std::vector {0.0}, std::vector {0.0}, c1) == 0.0);
    CHECK(immediate_reward(std::vector {e - 1.0, e - 1.0}, std::vector {0.0, 0.0}, c1) == doctest::Approx(1.0));
    CHECK(immediate_reward(std::vector {0.0}, std::vector {e - 1.0}, c1) == doctest::Approx(-1.0));
    CHECK_THROWS_AS(immediate_reward(std::vector {0.0}, std::vector {0.0, 1.0}, c1), std::invalid_argument);

    Rng rng(11);
    for (int t = 0; t < 500; ++t) {
        std::vector<double> a(5);
        std::vector<double> b(5);
        for (std::size_t i = 0; i < 5; ++i) {
            a[i] = rng.uniform(0.0, 100.0);
            b[i] = rng.uniform(0.0, 100.0);
        }
        CHECK(immediate_reward(a, b, TransformConfig::symbolic_regression())
            == -immediate_reward(b, a, TransformConfig::symbolic_regression()));
    }
}

TEST_CASE("windowed_max examples")
{
    RewardHistory h(100);
    CHECK(windowed_max(h, -0.5) == -0.5);

    RewardHistory h3(3);
    h3.push(-0.5);
    h3.push(0.2);
    CHECK(windowed_max(h3, -0.1) == 0.2);

    RewardHistory full(3);
    full.push(0.9);
    full.push(0.1);
    full.push(0.1);
    CHECK(windowed_max(full, 0.1) == 0.1);
    CHECK(full.size() == 3);
    CHECK_THROWS(RewardHistory(0));
}

TEST_CASE("windowed_max matches brute-force trailing max")
{
    Rng rng(3);
    for (int stream = 0; stream < 10000; ++stream) {
        std::size_t const cap = 1 + rng.below(20);
        std::size_t const len = 1 + rng.below(60);
        RewardHistory h(cap);
        std::vector<double> seen;
        for (std::size_t i = 0; i < len; ++i) {
            double const r = rng.uniform(-1.0, 1.0);
            seen.push_back(r);
            double const got = windowed_max(h, r);
            double want = -std::numeric_limits<double>::infinity();
            std::size_t const from = seen.size() > cap ? seen.size() - cap : 0;
            for (std::size_t k = from; k < seen.size(); ++k) {
                want = std::max(want, seen[k]);
            }
            REQUIRE(got == want);
            REQUIRE(h.size() <= cap);
        }
    }
}
