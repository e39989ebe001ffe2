#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ratectl/reward.hpp"
#include "ratectl/rng.hpp"
#include "ratectl/umad.hpp"

namespace ratectl {

enum class Op : Token { Input, ConstOne, Add, Sub, Mul, Div, Sin, Cos, Log };

inline constexpr std::size_t kInstructionCount = 9;
inline constexpr double kValueBound = 1e6;
inline constexpr double kEmptyStackPenalty = 1e6;
inline constexpr double kHitThreshold = 0.01;

std::string_view to_string(Op op);
int arity(Op op);

// Runs the program on one input. Instructions lacking operands are no-ops,
// division by zero and log of a non-positive value push 0, and every pushed
// value is clamped to ±kValueBound. nullopt when the stack ends empty.
std::optional<double> execute(TokenGenome const& program, double x);

// Case-batched execution with the active SIMD kernels; bit-identical to
// execute() applied per input. Returns false when the stack ends empty.
bool execute_batch(TokenGenome const& program, std::span<double const> inputs, std::span<double> outputs);

enum class NguyenTarget { N1 = 1, N2, N3, N4, N5, N6, N7, N8 };

NguyenTarget parse_nguyen(std::string_view name);
double nguyen_target(NguyenTarget id, double x);

// Evenly spaced grid from `first` to `last` inclusive.
std::vector<double> inclusive_grid(double first, double last, double step);

struct SrSettings {
    std::size_t min_init_length = 5;
    std::size_t max_init_length = 50;
    std::size_t max_length = kDefaultMaxGenomeLength;
};

class SrProblem {
public:
    using Genome = TokenGenome;

    explicit SrProblem(NguyenTarget target, SrSettings settings = {});

    [[nodiscard]] ErrorVector evaluate(Genome const& g) const;
    [[nodiscard]] Genome random_genome(Rng& rng) const;
    [[nodiscard]] Genome mutate(Genome const& parent, double rate, Rng& rng) const;
    [[nodiscard]] bool is_solved(ErrorVector const& errors) const;

    [[nodiscard]] NguyenTarget target() const { return target_; }
    [[nodiscard]] std::vector<double> const& inputs() const { return inputs_; }
    [[nodiscard]] std::vector<double> const& outputs() const { return outputs_; }
    [[nodiscard]] std::string name() const;

private:
    NguyenTarget target_;
    SrSettings settings_;
    std::vector<double> inputs_;
    std::vector<double> outputs_;
};

// Scalar-path evaluation, kept for equivalence checks against the batched path.
ErrorVector evaluate_sr_scalar(SrProblem const& problem, TokenGenome const& g);

} // namespace ratectl
