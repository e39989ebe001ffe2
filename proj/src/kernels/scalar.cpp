#include "ratectl/kernels.hpp"

#include <algorithm>

namespace ratectl::kernels {
namespace {

template <typename Term>
double striped_sum(std::size_t n, Term term)
{
    double s[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s[0] += term(i);
        s[1] += term(i + 1);
        s[2] += term(i + 2);
        s[3] += term(i + 3);
    }
    for (std::size_t k = 0; i < n; ++i, ++k) {
        s[k] += term(i);
    }
    return (s[0] + s[1]) + (s[2] + s[3]);
}

void mean_rows(std::span<double const* const> rows, std::size_t n, double* out)
{
    double const count = static_cast<double>(rows.size());
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (double const* row : rows) {
            total += row[i];
        }
        out[i] = total / count;
    }
}

std::size_t argmax(double const* x, std::size_t n)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] > x[best]) {
            best = i;
        }
    }
    return best;
}

double sum(double const* x, std::size_t n)
{
    return striped_sum(n, [x](std::size_t i) { return x[i]; });
}

double sum_squares(double const* x, std::size_t n)
{
    return striped_sum(n, [x](std::size_t i) { return x[i] * x[i]; });
}

double rosenbrock(double const* x, std::size_t n)
{
    if (n < 2) {
        return 0.0;
    }
    return striped_sum(n - 1, [x](std::size_t i) {
        double const a = x[i + 1] - x[i] * x[i];
        double const b = x[i] - 1.0;
        return 100.0 * (a * a) + b * b;
    });
}

inline double clamp(double v, double bound) { return std::min(std::max(v, -bound), bound); }

void add_clamped(double* a, double const* b, std::size_t n, double bound)
{
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = clamp(a[i] + b[i], bound);
    }
}

void sub_clamped(double* a, double const* b, std::size_t n, double bound)
{
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = clamp(a[i] - b[i], bound);
    }
}

void mul_clamped(double* a, double const* b, std::size_t n, double bound)
{
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = clamp(a[i] * b[i], bound);
    }
}

void div_protected(double* a, double const* b, std::size_t n, double bound)
{
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = b[i] == 0.0 ? 0.0 : clamp(a[i] / b[i], bound);
    }
}

} // namespace

KernelTable const& scalar()
{
    static constexpr KernelTable table {
        "scalar", mean_rows, argmax, sum, sum_squares, rosenbrock,
        add_clamped, sub_clamped, mul_clamped, div_protected,
    };
    return table;
}

} // namespace ratectl::kernels
