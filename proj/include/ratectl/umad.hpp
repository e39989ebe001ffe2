#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ratectl/rng.hpp"

namespace ratectl {

using Token = std::uint8_t;

// Linear genome over an instruction set {0, ..., instruction_count - 1}.
struct TokenGenome {
    std::vector<Token> tokens;

    [[nodiscard]] std::size_t size() const { return tokens.size(); }
    [[nodiscard]] bool empty() const { return tokens.empty(); }
    bool operator==(TokenGenome const&) const = default;
};

inline constexpr std::size_t kDefaultMaxGenomeLength = 500;

// Deletion probability that balances an expected addition rate of `rate`.
double umad_deletion_rate(double rate);

// Size-neutral uniform mutation by addition and deletion, extended to rates
// above one: each parent token receives floor(rate) or floor(rate) + 1 new
// neighbours (the latter with probability equal to the fractional part),
// each placed before or after it with equal probability; every token of the
// augmented genome is then deleted independently with umad_deletion_rate.
// Output is truncated to `max_length`.
TokenGenome umad_mutate(TokenGenome const& parent, double rate, std::size_t instruction_count, Rng& rng,
    std::size_t max_length = kDefaultMaxGenomeLength);

TokenGenome random_genome(std::size_t length, std::size_t instruction_count, Rng& rng);

} // namespace ratectl
