#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <vector>

#include "ratectl/funcmin.hpp"
#include "ratectl/rng.hpp"

using namespace ratectl;

namespace {

// Direct transcriptions of the test functions, one plain loop each.
double ref_value(TestFunction f, std::vector<double> const& x)
{
    double const d = static_cast<double>(x.size());
    double const pi = std::numbers::pi;
    double s1 = 0.0;
    double s2 = 0.0;
    double p = 1.0;
    switch (f) {
    case TestFunction::Ackley:
        for (double v : x) {
            s1 += v * v;
            s2 += std::cos(2 * pi * v);
        }
        return -20.0 * std::exp(-0.2 * std::sqrt(s1 / d)) - std::exp(s2 / d) + 20.0 + std::numbers::e;
    case TestFunction::Griewank:
        for (std::size_t i = 0; i < x.size(); ++i) {
            s1 += x[i] * x[i] / 4000.0;
            p *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
        }
        return s1 - p + 1.0;
    case TestFunction::Rastrigin:
        for (double v : x) {
            s1 += v * v - 10.0 * std::cos(2 * pi * v);
        }
        return 10.0 * d + s1;
    case TestFunction::Rosenbrock:
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            s1 += 100.0 * (x[i + 1] - x[i] * x[i]) * (x[i + 1] - x[i] * x[i]) + (1.0 - x[i]) * (1.0 - x[i]);
        }
        return s1;
    case TestFunction::Sphere:
        for (double v : x) {
            s1 += v * v;
        }
        return s1;
    case TestFunction::Linear:
        for (double v : x) {
            s1 += v;
        }
        return s1;
    }
    return 0.0;
}

} // namespace

TEST_CASE("minima")
{
    std::vector<double> const zero(100, 0.0);
    std::vector<double> const one(100, 1.0);
    CHECK(std::abs(evaluate_test_function(TestFunction::Ackley, zero)) < 1e-12);
    CHECK(std::abs(evaluate_test_function(TestFunction::Griewank, zero)) < 1e-12);
    CHECK(std::abs(evaluate_test_function(TestFunction::Rastrigin, zero)) < 1e-12);
    CHECK(std::abs(evaluate_test_function(TestFunction::Rosenbrock, one)) < 1e-12);
    CHECK(evaluate_test_function(TestFunction::Sphere, zero) == 0.0);
    CHECK(evaluate_test_function(TestFunction::Linear, zero) == 0.0);
    CHECK(evaluate_test_function(TestFunction::Sphere, one) == 100.0);
}

TEST_CASE("functions match direct transcriptions")
{
    Rng rng(1);
    for (auto f : {TestFunction::Ackley, TestFunction::Griewank, TestFunction::Rastrigin, TestFunction::Rosenbrock,
             TestFunction::Sphere, TestFunction::Linear}) {
        for (int t = 0; t < 200; ++t) {
            std::size_t const d = 1 + rng.below(130);
            std::vector<double> x(d);
            for (double& v : x) {
                v = rng.normal(0.0, 5.0);
            }
            double const want = ref_value(f, x);
            CHECK(evaluate_test_function(f, x) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("ackley and rastrigin are non-negative")
{
    Rng rng(2);
    for (int t = 0; t < 100000; ++t) {
        std::vector<double> x(3);
        for (double& v : x) {
            v = rng.normal(0.0, t % 2 == 0 ? 1e-3 : 10.0);
        }
        REQUIRE(evaluate_test_function(TestFunction::Ackley, x) >= 0.0);
        REQUIRE(evaluate_test_function(TestFunction::Rastrigin, x) >= 0.0);
    }
}

TEST_CASE("sphere gradient by central differences")
{
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(10);
        for (double& v : x) {
            v = rng.normal(0.0, 3.0);
        }
        std::size_t const i = rng.below(10);
        double const h = 1e-4;
        auto xp = x;
        auto xm = x;
        xp[i] += h;
        xm[i] -= h;
        double const fd = (evaluate_test_function(TestFunction::Sphere, xp)
                              - evaluate_test_function(TestFunction::Sphere, xm)) / (2 * h);
        CHECK(fd == doctest::Approx(2.0 * x[i]).epsilon(1e-6));
    }
}

TEST_CASE("overflow clamps to the largest finite value")
{
    std::vector<double> const big(10, 1e300);
    CHECK(evaluate_test_function(TestFunction::Sphere, big) == std::numeric_limits<double>::max());
    std::vector<double> const neg(10, -1e308);
    CHECK(evaluate_test_function(TestFunction::Linear, neg) == -std::numeric_limits<double>::max());
}

TEST_CASE("gaussian mutation")
{
    Rng rng(4);
    std::vector<double> const zero(1000, 0.0);
    double s = 0.0;
    double ss = 0.0;
    int n = 0;
    for (int t = 0; t < 1000; ++t) {
        for (double v : gaussian_mutate(zero, 1.0, rng)) {
            s += v;
            ss += v * v;
            ++n;
        }
    }
    double const mean = s / n;
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::sqrt(ss / n - mean * mean) == doctest::Approx(1.0).epsilon(0.01));

    std::vector<double> const x {1.0, -2.0, 3.0};
    auto const tiny = gaussian_mutate(x, 1e-300, rng);
    CHECK(tiny == x);
    auto const huge = gaussian_mutate(x, std::exp(100.0 * 7.0), rng);
    for (double v : huge) {
        CHECK(std::isfinite(v));
    }
    CHECK_THROWS(gaussian_mutate(x, 0.0, rng));
}

TEST_CASE("initialization")
{
    CHECK(FuncMinProblem(TestFunction::Rosenbrock).init_sigma() == 1.0);
    CHECK(FuncMinProblem(TestFunction::Griewank).init_sigma() == 1000.0);
    CHECK(FuncMinProblem(TestFunction::Ackley).init_sigma() == 10.0);
    CHECK(FuncMinProblem(TestFunction::Linear).init_sigma() == 1.0);
    FuncMinProblem const p(TestFunction::Sphere, 100);
    Rng rng(5);
    double ss = 0.0;
    std::size_t n = 0;
    for (auto const& g : p.init_population(1000, rng)) {
        for (double v : g) {
            ss += v * v;
            ++n;
        }
    }
    CHECK(std::sqrt(ss / static_cast<double>(n)) == doctest::Approx(10.0).epsilon(0.01));
    CHECK(parse_test_function("rastrigin") == TestFunction::Rastrigin);
    CHECK_THROWS(parse_test_function("bogus"));
}
