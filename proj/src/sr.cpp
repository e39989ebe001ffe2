#include "ratectl/sr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "ratectl/kernels.hpp"

namespace ratectl {
namespace {

double clamp_value(double v) { return std::min(std::max(v, -kValueBound), kValueBound); }

double protected_log(double v) { return v > 0.0 ? std::log(v) : 0.0; }

} // namespace

std::string_view to_string(Op op)
{
    switch (op) {
    case Op::Input: return "input";
    case Op::ConstOne: return "1.0";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    case Op::Mul: return "*";
    case Op::Div: return "/";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Log: return "log";
    }
    return "?";
}

int arity(Op op)
{
    switch (op) {
    case Op::Input:
    case Op::ConstOne: return 0;
    case Op::Sin:
    case Op::Cos:
    case Op::Log: return 1;
    default: return 2;
    }
}

std::optional<double> execute(TokenGenome const& program, double x)
{
    std::vector<double> stack;
    stack.reserve(program.size());
    for (Token t : program.tokens) {
        auto const op = static_cast<Op>(t);
        if (static_cast<int>(stack.size()) < arity(op)) {
            continue;
        }
        switch (op) {
        case Op::Input: stack.push_back(clamp_value(x)); break;
        case Op::ConstOne: stack.push_back(1.0); break;
        case Op::Sin: stack.back() = clamp_value(std::sin(stack.back())); break;
        case Op::Cos: stack.back() = clamp_value(std::cos(stack.back())); break;
        case Op::Log: stack.back() = clamp_value(protected_log(stack.back())); break;
        default: {
            double const b = stack.back();
            stack.pop_back();
            double& a = stack.back();
            switch (op) {
            case Op::Add: a = clamp_value(a + b); break;
            case Op::Sub: a = clamp_value(a - b); break;
            case Op::Mul: a = clamp_value(a * b); break;
            case Op::Div: a = b == 0.0 ? 0.0 : clamp_value(a / b); break;
            default: break;
            }
        }
        }
    }
    if (stack.empty()) {
        return std::nullopt;
    }
    return stack.back();
}

bool execute_batch(TokenGenome const& program, std::span<double const> inputs, std::span<double> outputs)
{
    std::size_t const n = inputs.size();
    if (outputs.size() != n) {
        throw std::invalid_argument("execute_batch: output span size mismatch");
    }
    auto const& k = kernels::active();
    // Stack depth depends only on the program, so every case shares it.
    thread_local std::vector<double> stack;
    std::size_t depth = 0;
    std::size_t const max_depth = program.size();
    if (stack.size() < max_depth * n) {
        stack.resize(max_depth * n);
    }
    auto row = [&](std::size_t level) { return stack.data() + level * n; };

    for (Token t : program.tokens) {
        auto const op = static_cast<Op>(t);
        if (static_cast<int>(depth) < arity(op)) {
            continue;
        }
        switch (op) {
        case Op::Input: {
            double* dst = row(depth++);
            for (std::size_t i = 0; i < n; ++i) {
                dst[i] = clamp_value(inputs[i]);
            }
            break;
        }
        case Op::ConstOne:
            std::fill_n(row(depth++), n, 1.0);
            break;
        case Op::Sin:
        case Op::Cos:
        case Op::Log: {
            double* top = row(depth - 1);
            for (std::size_t i = 0; i < n; ++i) {
                double const v = op == Op::Sin ? std::sin(top[i]) : op == Op::Cos ? std::cos(top[i]) : protected_log(top[i]);
                top[i] = clamp_value(v);
            }
            break;
        }
        default: {
            double* a = row(depth - 2);
            double const* b = row(depth - 1);
            switch (op) {
            case Op::Add: k.add_clamped(a, b, n, kValueBound); break;
            case Op::Sub: k.sub_clamped(a, b, n, kValueBound); break;
            case Op::Mul: k.mul_clamped(a, b, n, kValueBound); break;
            case Op::Div: k.div_protected(a, b, n, kValueBound); break;
            default: break;
            }
            --depth;
        }
        }
    }
    if (depth == 0) {
        return false;
    }
    std::copy_n(row(depth - 1), n, outputs.begin());
    return true;
}

NguyenTarget parse_nguyen(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (int i = 1; i <= 8; ++i) {
        if (lower == "nguyen" + std::to_string(i)) {
            return static_cast<NguyenTarget>(i);
        }
    }
    throw std::invalid_argument("unknown symbolic regression target '" + std::string(name) + "'");
}

double nguyen_target(NguyenTarget id, double x)
{
    double const x2 = x * x;
    double const x3 = x2 * x;
    double const x4 = x3 * x;
    double const x5 = x4 * x;
    double const x6 = x5 * x;
    switch (id) {
    case NguyenTarget::N1: return x3 + x2 + x;
    case NguyenTarget::N2: return x4 + x3 + x2 + x;
    case NguyenTarget::N3: return x5 + x4 + x3 + x2 + x;
    case NguyenTarget::N4: return x6 + x5 + x4 + x3 + x2 + x;
    case NguyenTarget::N5: return std::sin(x2) * std::cos(x) - 1.0;
    case NguyenTarget::N6: return std::sin(x) + std::sin(x + x2);
    case NguyenTarget::N7: return std::log(x + 1.0) + std::log(x2 + 1.0);
    case NguyenTarget::N8: return std::sqrt(x);
    }
    return 0.0;
}

std::vector<double> inclusive_grid(double first, double last, double step)
{
    if (!(step > 0.0) || last < first) {
        throw std::invalid_argument("inclusive_grid: need step > 0 and last >= first");
    }
    auto const count = static_cast<std::size_t>(std::llround((last - first) / step)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = first + static_cast<double>(i) * step;
    }
    return grid;
}

SrProblem::SrProblem(NguyenTarget target, SrSettings settings)
    : target_(target)
    , settings_(settings)
{
    if (settings_.min_init_length == 0 || settings_.min_init_length > settings_.max_init_length) {
        throw std::invalid_argument("SrProblem: invalid initial genome length range");
    }
    bool const shifted = target == NguyenTarget::N7 || target == NguyenTarget::N8;
    inputs_ = shifted ? inclusive_grid(0.0, 8.0, 0.1) : inclusive_grid(-4.0, 4.0, 0.1);
    outputs_.reserve(inputs_.size());
    for (double x : inputs_) {
        outputs_.push_back(nguyen_target(target, x));
    }
}

std::string SrProblem::name() const
{
    return "nguyen" + std::to_string(static_cast<int>(target_));
}

ErrorVector SrProblem::evaluate(Genome const& g) const
{
    std::size_t const n = inputs_.size();
    ErrorVector errors(n, kEmptyStackPenalty);
    thread_local std::vector<double> out;
    out.resize(n);
    if (!execute_batch(g, inputs_, out)) {
        return errors;
    }
    for (std::size_t i = 0; i < n; ++i) {
        errors[i] = std::abs(out[i] - outputs_[i]);
    }
    return errors;
}

ErrorVector evaluate_sr_scalar(SrProblem const& problem, TokenGenome const& g)
{
    auto const& xs = problem.inputs();
    ErrorVector errors(xs.size(), kEmptyStackPenalty);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (auto v = execute(g, xs[i])) {
            errors[i] = std::abs(*v - problem.outputs()[i]);
        }
    }
    return errors;
}

SrProblem::Genome SrProblem::random_genome(Rng& rng) const
{
    std::size_t const span = settings_.max_init_length - settings_.min_init_length + 1;
    std::size_t const len = settings_.min_init_length + rng.below(span);
    return ratectl::random_genome(len, kInstructionCount, rng);
}

SrProblem::Genome SrProblem::mutate(Genome const& parent, double rate, Rng& rng) const
{
    return umad_mutate(parent, rate, kInstructionCount, rng, settings_.max_length);
}

bool SrProblem::is_solved(ErrorVector const& errors) const
{
    return std::all_of(errors.begin(), errors.end(), [](double e) { return e < kHitThreshold; });
}

} // namespace ratectl
