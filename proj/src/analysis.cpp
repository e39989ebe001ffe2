#include "ratectl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ratectl {

std::vector<double> max_pool_1d(std::span<double const> input, std::size_t kernel)
{
    if (kernel == 0) {
        throw std::invalid_argument("max_pool_1d: kernel must be at least 1");
    }
    if (input.size() < kernel) {
        throw std::invalid_argument("max_pool_1d: input shorter than kernel");
    }
    std::vector<double> out;
    out.reserve(input.size() - kernel + 1);
    // Indices with decreasing values; the front is the window max.
    std::deque<std::size_t> window;
    for (std::size_t i = 0; i < input.size(); ++i) {
        while (!window.empty() && input[window.back()] <= input[i]) {
            window.pop_back();
        }
        window.push_back(i);
        if (window.front() + kernel <= i) {
            window.pop_front();
        }
        if (i + 1 >= kernel) {
            out.push_back(input[window.front()]);
        }
    }
    return out;
}

std::vector<double> ewma(std::span<double const> input, double alpha)
{
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("ewma: alpha must lie in (0, 1]");
    }
    std::vector<double> out;
    out.reserve(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) {
        out.push_back(i == 0 ? input[0] : (1.0 - alpha) * out.back() + alpha * input[i]);
    }
    return out;
}

double sample_mean(std::span<double const> x)
{
    if (x.empty()) {
        throw std::invalid_argument("sample_mean: empty sample");
    }
    double s = 0.0;
    for (double v : x) {
        s += v;
    }
    return s / static_cast<double>(x.size());
}

double sample_variance(std::span<double const> x)
{
    if (x.size() < 2) {
        throw std::invalid_argument("sample_variance: need at least two samples");
    }
    double const m = sample_mean(x);
    double ss = 0.0;
    for (double v : x) {
        ss += (v - m) * (v - m);
    }
    return ss / static_cast<double>(x.size() - 1);
}

namespace {

double quantile_sorted(std::vector<double> const& sorted, double q)
{
    double const pos = q * static_cast<double>(sorted.size() - 1);
    auto const lo = static_cast<std::size_t>(std::floor(pos));
    std::size_t const hi = std::min(lo + 1, sorted.size() - 1);
    double const frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

StatReport bootstrap_ci(std::span<double const> samples, Rng& rng, std::size_t resamples, double level,
    std::function<double(std::span<double const>)> const& statistic)
{
    if (samples.empty()) {
        throw std::invalid_argument("bootstrap_ci: empty sample");
    }
    if (resamples == 0 || !(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("bootstrap_ci: need resamples >= 1 and level in (0, 1)");
    }
    auto const stat = statistic ? statistic : [](std::span<double const> s) { return sample_mean(s); };
    std::vector<double> draws;
    draws.reserve(resamples);
    std::vector<double> buf(samples.size());
    for (std::size_t r = 0; r < resamples; ++r) {
        for (double& v : buf) {
            v = samples[rng.below(samples.size())];
        }
        draws.push_back(stat(buf));
    }
    std::sort(draws.begin(), draws.end());
    double const alpha = 1.0 - level;
    StatReport rep;
    rep.estimate = stat(samples);
    rep.lower = quantile_sorted(draws, alpha / 2.0);
    rep.upper = quantile_sorted(draws, 1.0 - alpha / 2.0);
    return rep;
}

namespace {

double beta_continued_fraction(double a, double b, double x)
{
    constexpr int max_iter = 500;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;
    double const qab = a + b;
    double const qap = a + 1.0;
    double const qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        double const m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double const del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

} // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0 && b > 0.0)) {
        throw std::invalid_argument("incomplete_beta: a and b must be positive");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    double const log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    double const front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

namespace {

// P(|T| > |t|) for T ~ t(dof).
double student_t_two_tail(double t, double dof)
{
    if (std::isinf(t)) {
        return 0.0;
    }
    double const x = dof / (dof + t * t);
    return incomplete_beta(0.5 * dof, 0.5, x);
}

} // namespace

double student_t_cdf(double t, double dof)
{
    if (!(dof > 0.0)) {
        throw std::invalid_argument("student_t_cdf: degrees of freedom must be positive");
    }
    double const tail = 0.5 * student_t_two_tail(t, dof);
    return t > 0.0 ? 1.0 - tail : tail;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

WelchResult welch_test(std::span<double const> a, std::span<double const> b)
{
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_test: each sample needs at least two values");
    }
    double const ma = sample_mean(a);
    double const mb = sample_mean(b);
    double const va = sample_variance(a) / static_cast<double>(a.size());
    double const vb = sample_variance(b) / static_cast<double>(b.size());
    WelchResult r;
    double const se2 = va + vb;
    if (se2 == 0.0) {
        if (ma == mb) {
            return r;
        }
        r.t = ma < mb ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
        r.dof = static_cast<double>(a.size() + b.size() - 2);
        r.p_two_sided = 0.0;
        r.p_less = ma < mb ? 0.0 : 1.0;
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.dof = se2 * se2
        / (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
    r.p_two_sided = r.t == 0.0 ? 1.0 : student_t_two_tail(r.t, r.dof);
    r.p_less = student_t_cdf(r.t, r.dof);
    return r;
}

double welch_t_test(std::span<double const> a, std::span<double const> b) { return welch_test(a, b).p_two_sided; }

ZTestResult two_proportion_z(std::size_t s1, std::size_t n1, std::size_t s2, std::size_t n2)
{
    if (n1 == 0 || n2 == 0) {
        throw std::invalid_argument("two_proportion_z: group sizes must be positive");
    }
    if (s1 > n1 || s2 > n2) {
        throw std::invalid_argument("two_proportion_z: successes exceed trials");
    }
    double const p1 = static_cast<double>(s1) / static_cast<double>(n1);
    double const p2 = static_cast<double>(s2) / static_cast<double>(n2);
    double const pooled = static_cast<double>(s1 + s2) / static_cast<double>(n1 + n2);
    double const se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    ZTestResult r;
    if (p1 == p2 || se == 0.0) {
        return r;
    }
    r.z = (p1 - p2) / se;
    r.p_two_sided = std::erfc(std::abs(r.z) / std::sqrt(2.0));
    return r;
}

double two_proportion_z_test(std::size_t s1, std::size_t n1, std::size_t s2, std::size_t n2)
{
    return two_proportion_z(s1, n1, s2, n2).p_two_sided;
}

} // namespace ratectl
