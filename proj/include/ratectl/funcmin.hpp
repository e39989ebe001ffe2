#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"

namespace ratectl {

enum class TestFunction { Ackley, Griewank, Rastrigin, Rosenbrock, Sphere, Linear };

TestFunction parse_test_function(std::string_view name);
std::string_view to_string(TestFunction f);

// Population initialization standard deviation for each function.
double default_init_sigma(TestFunction f);

// Raw function value; overflow is clamped to the largest finite double.
double evaluate_test_function(TestFunction f, std::span<double const> x);

// Mutation strengths are clamped to this range after exponentiation.
inline constexpr double kMinMutationSigma = 1e-300;
inline constexpr double kMaxMutationSigma = 1e300;
// Coordinates are kept inside ±kMaxCoordinate so every vector stays finite.
inline constexpr double kMaxCoordinate = 1e300;

using RealVector = std::vector<double>;

RealVector gaussian_mutate(RealVector const& x, double sigma, Rng& rng);

// Real-valued minimization of one of the test functions. The controller's
// rate is the mutation standard deviation.
class FuncMinProblem {
public:
    using Genome = RealVector;

    FuncMinProblem(TestFunction function, std::size_t dimension = 100, double init_sigma = 0.0);

    [[nodiscard]] ErrorVector evaluate(Genome const& x) const;
    [[nodiscard]] Genome random_genome(Rng& rng) const;
    [[nodiscard]] Genome mutate(Genome const& parent, double rate, Rng& rng) const;
    [[nodiscard]] bool is_solved(ErrorVector const&) const { return false; }
    [[nodiscard]] std::vector<Genome> init_population(std::size_t n, Rng& rng) const;

    [[nodiscard]] TestFunction function() const { return function_; }
    [[nodiscard]] std::size_t dimension() const { return dimension_; }
    [[nodiscard]] double init_sigma() const { return init_sigma_; }
    [[nodiscard]] std::string name() const { return std::string(to_string(function_)); }

private:
    TestFunction function_;
    std::size_t dimension_;
    double init_sigma_;
};

} // namespace ratectl
