#include "ratectl/funcmin.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ratectl/kernels.hpp"

namespace ratectl {
namespace {

constexpr double kMaxFinite = std::numeric_limits<double>::max();

double clamp_overflow(double v)
{
    static std::atomic<bool> warned {false};
    if (std::isfinite(v)) {
        return v;
    }
    if (!warned.exchange(true)) {
        std::cerr << "warning: test function overflow, clamping to the largest finite value\n";
    }
    if (std::isnan(v)) {
        return kMaxFinite;
    }
    return v > 0 ? kMaxFinite : -kMaxFinite;
}

double sum_cos(std::span<double const> x, double scale)
{
    std::vector<double> c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        c[i] = std::cos(scale * x[i]);
    }
    return kernels::active().sum(c.data(), c.size());
}

} // namespace

TestFunction parse_test_function(std::string_view name)
{
    if (name == "ackley") return TestFunction::Ackley;
    if (name == "griewank") return TestFunction::Griewank;
    if (name == "rastrigin") return TestFunction::Rastrigin;
    if (name == "rosenbrock") return TestFunction::Rosenbrock;
    if (name == "sphere") return TestFunction::Sphere;
    if (name == "linear") return TestFunction::Linear;
    throw std::invalid_argument("unknown test function '" + std::string(name) + "'");
}

std::string_view to_string(TestFunction f)
{
    switch (f) {
    case TestFunction::Ackley: return "ackley";
    case TestFunction::Griewank: return "griewank";
    case TestFunction::Rastrigin: return "rastrigin";
    case TestFunction::Rosenbrock: return "rosenbrock";
    case TestFunction::Sphere: return "sphere";
    case TestFunction::Linear: return "linear";
    }
    return "unknown";
}

double default_init_sigma(TestFunction f)
{
    switch (f) {
    case TestFunction::Ackley: return 10.0;
    case TestFunction::Griewank: return 1000.0;
    case TestFunction::Rastrigin: return 10.0;
    case TestFunction::Rosenbrock: return 1.0;
    case TestFunction::Sphere: return 10.0;
    case TestFunction::Linear: return 1.0;
    }
    return 1.0;
}

double evaluate_test_function(TestFunction f, std::span<double const> x)
{
    if (x.empty()) {
        throw std::invalid_argument("evaluate_test_function: empty vector");
    }
    auto const& k = kernels::active();
    double const d = static_cast<double>(x.size());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double value = 0.0;
    switch (f) {
    case TestFunction::Ackley: {
        constexpr double a = 20.0;
        constexpr double b = 0.2;
        double const rms = std::sqrt(k.sum_squares(x.data(), x.size()) / d);
        double const mean_cos = sum_cos(x, two_pi) / d;
        value = -a * std::exp(-b * rms) - std::exp(mean_cos) + a + std::numbers::e;
        // Rounding can leave a tiny negative residue near the minimum.
        value = std::max(value, 0.0);
        break;
    }
    case TestFunction::Griewank: {
        double prod = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
        }
        value = k.sum_squares(x.data(), x.size()) / 4000.0 - prod + 1.0;
        break;
    }
    case TestFunction::Rastrigin:
        value = 10.0 * d + k.sum_squares(x.data(), x.size()) - 10.0 * sum_cos(x, two_pi);
        break;
    case TestFunction::Rosenbrock:
        value = k.rosenbrock(x.data(), x.size());
        break;
    case TestFunction::Sphere:
        value = k.sum_squares(x.data(), x.size());
        break;
    case TestFunction::Linear:
        value = k.sum(x.data(), x.size());
        break;
    }
    return clamp_overflow(value);
}

RealVector gaussian_mutate(RealVector const& x, double sigma, Rng& rng)
{
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian_mutate: sigma must be positive");
    }
    sigma = std::clamp(sigma, kMinMutationSigma, kMaxMutationSigma);
    RealVector child(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        child[i] = std::clamp(x[i] + sigma * rng.normal(), -kMaxCoordinate, kMaxCoordinate);
    }
    return child;
}

FuncMinProblem::FuncMinProblem(TestFunction function, std::size_t dimension, double init_sigma)
    : function_(function)
    , dimension_(dimension)
    , init_sigma_(init_sigma > 0.0 ? init_sigma : default_init_sigma(function))
{
    if (dimension == 0) {
        throw std::invalid_argument("FuncMinProblem: dimension must be positive");
    }
}

ErrorVector FuncMinProblem::evaluate(Genome const& x) const
{
    if (x.size() != dimension_) {
        throw std::invalid_argument("FuncMinProblem::evaluate: dimension mismatch");
    }
    return {evaluate_test_function(function_, x)};
}

FuncMinProblem::Genome FuncMinProblem::random_genome(Rng& rng) const
{
    Genome x(dimension_);
    for (double& v : x) {
        v = init_sigma_ * rng.normal();
    }
    return x;
}

FuncMinProblem::Genome FuncMinProblem::mutate(Genome const& parent, double rate, Rng& rng) const
{
    return gaussian_mutate(parent, rate, rng);
}

std::vector<FuncMinProblem::Genome> FuncMinProblem::init_population(std::size_t n, Rng& rng) const
{
    std::vector<Genome> pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        pop.push_back(random_genome(rng));
    }
    return pop;
}

} // namespace ratectl
