#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ratectl {

// Portable random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; every distribution below is written
// out here because the std:: distributions are implementation-defined and
// would break cross-platform reproducibility.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    result_type operator()() { return engine_(); }

    // [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi)
    {
        double x = lo + (hi - lo) * uniform01();
        return x < hi ? x : std::nextafter(hi, lo);
    }

    // Unbiased integer in [0, n) by rejection on the top of the range.
    std::uint64_t below(std::uint64_t n)
    {
        if (n <= 1) {
            return 0;
        }
        std::uint64_t const limit = max() - (max() % n + 1) % n;
        std::uint64_t x = engine_();
        while (x > limit) {
            x = engine_();
        }
        return x % n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Marsaglia polar method; the spare deviate is cached.
    double normal()
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u = 0.0;
        double v = 0.0;
        double s = 0.0;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double const f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Derives an independent stream. Consumes one draw from this stream.
    Rng fork(std::uint64_t salt = 0) { return Rng(splitmix(engine_() ^ splitmix(salt))); }

    // Derives a stream from a copy of the current state; this stream is not advanced.
    [[nodiscard]] Rng peek_fork(std::uint64_t salt) const
    {
        Rng copy = *this;
        return copy.fork(salt);
    }

    bool operator==(Rng const& other) const
    {
        return engine_ == other.engine_ && has_spare_ == other.has_spare_
            && (!has_spare_ || spare_ == other.spare_);
    }

    static std::uint64_t splitmix(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace ratectl
