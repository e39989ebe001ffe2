#include "ratectl/umad.hpp"

#include <cmath>
#include <stdexcept>

namespace ratectl {

double umad_deletion_rate(double rate)
{
    if (!(rate > 0.0)) {
        throw std::invalid_argument("umad: rate must be positive");
    }
    return rate / (1.0 + rate);
}

TokenGenome umad_mutate(TokenGenome const& parent, double rate, std::size_t instruction_count, Rng& rng,
    std::size_t max_length)
{
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("umad: rate must be positive and finite");
    }
    if (instruction_count == 0) {
        throw std::invalid_argument("umad: empty instruction set");
    }
    double const whole = std::floor(rate);
    double const frac = rate - whole;
    double const p_delete = umad_deletion_rate(rate);
    auto const base_inserts = static_cast<std::size_t>(whole);

    TokenGenome child;
    if (max_length == 0) {
        return child;
    }
    std::vector<Token> before;
    std::vector<Token> after;
    auto keep = [&](Token t) {
        if (!rng.bernoulli(p_delete)) {
            child.tokens.push_back(t);
        }
        return child.tokens.size() < max_length;
    };

    // Anchors are processed left to right and the deletion pass is applied to
    // each finished segment, so generation stops once the cap is reached.
    for (Token anchor : parent.tokens) {
        std::size_t const k = base_inserts + (rng.bernoulli(frac) ? 1 : 0);
        before.clear();
        after.clear();
        for (std::size_t n = 0; n < k; ++n) {
            auto const t = static_cast<Token>(rng.below(instruction_count));
            (rng.bernoulli(0.5) ? before : after).push_back(t);
        }
        for (Token t : before) {
            if (!keep(t)) {
                return child;
            }
        }
        if (!keep(anchor)) {
            return child;
        }
        for (Token t : after) {
            if (!keep(t)) {
                return child;
            }
        }
    }
    return child;
}

TokenGenome random_genome(std::size_t length, std::size_t instruction_count, Rng& rng)
{
    if (instruction_count == 0) {
        throw std::invalid_argument("random_genome: empty instruction set");
    }
    TokenGenome g;
    g.tokens.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        g.tokens.push_back(static_cast<Token>(rng.below(instruction_count)));
    }
    return g;
}

} // namespace ratectl
