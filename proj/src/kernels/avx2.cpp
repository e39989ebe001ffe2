#include "ratectl/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace ratectl::kernels {

#if defined(__AVX2__)
namespace {

// Folds the tail into lanes 0.. and combines lanes in the reference order.
template <typename Term>
double finish(__m256d acc, std::size_t i, std::size_t n, Term term)
{
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    for (std::size_t k = 0; i < n; ++i, ++k) {
        s[k] += term(i);
    }
    return (s[0] + s[1]) + (s[2] + s[3]);
}

void mean_rows(std::span<double const* const> rows, std::size_t n, double* out)
{
    double const count = static_cast<double>(rows.size());
    __m256d const vcount = _mm256_set1_pd(count);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d total = _mm256_setzero_pd();
        for (double const* row : rows) {
            total = _mm256_add_pd(total, _mm256_loadu_pd(row + i));
        }
        _mm256_storeu_pd(out + i, _mm256_div_pd(total, vcount));
    }
    for (; i < n; ++i) {
        double total = 0.0;
        for (double const* row : rows) {
            total += row[i];
        }
        out[i] = total / count;
    }
}

std::size_t argmax(double const* x, std::size_t n)
{
    if (n < 8) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (x[i] > x[best]) {
                best = i;
            }
        }
        return best;
    }
    // Per-lane running max; strict > keeps the first index within a lane.
    __m256d best = _mm256_loadu_pd(x);
    __m256i best_idx = _mm256_setr_epi64x(0, 1, 2, 3);
    __m256i idx = best_idx;
    __m256i const step = _mm256_set1_epi64x(4);
    std::size_t i = 4;
    for (; i + 4 <= n; i += 4) {
        idx = _mm256_add_epi64(idx, step);
        __m256d const v = _mm256_loadu_pd(x + i);
        __m256d const gt = _mm256_cmp_pd(v, best, _CMP_GT_OQ);
        best = _mm256_blendv_pd(best, v, gt);
        best_idx = _mm256_castpd_si256(
            _mm256_blendv_pd(_mm256_castsi256_pd(best_idx), _mm256_castsi256_pd(idx), gt));
    }
    alignas(32) double lane_val[4];
    alignas(32) long long lane_idx[4];
    _mm256_store_pd(lane_val, best);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane_idx), best_idx);
    std::size_t result = static_cast<std::size_t>(lane_idx[0]);
    double result_val = lane_val[0];
    for (int k = 1; k < 4; ++k) {
        auto const li = static_cast<std::size_t>(lane_idx[k]);
        if (lane_val[k] > result_val || (lane_val[k] == result_val && li < result)) {
            result_val = lane_val[k];
            result = li;
        }
    }
    for (; i < n; ++i) {
        if (x[i] > result_val) {
            result_val = x[i];
            result = i;
        }
    }
    return result;
}

double sum(double const* x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    return finish(acc, i, n, [x](std::size_t j) { return x[j]; });
}

double sum_squares(double const* x, std::size_t n)
{
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d const v = _mm256_loadu_pd(x + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
    }
    return finish(acc, i, n, [x](std::size_t j) { return x[j] * x[j]; });
}

double rosenbrock(double const* x, std::size_t n)
{
    if (n < 2) {
        return 0.0;
    }
    std::size_t const m = n - 1;
    __m256d const hundred = _mm256_set1_pd(100.0);
    __m256d const one = _mm256_set1_pd(1.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= m; i += 4) {
        __m256d const x0 = _mm256_loadu_pd(x + i);
        __m256d const x1 = _mm256_loadu_pd(x + i + 1);
        __m256d const a = _mm256_sub_pd(x1, _mm256_mul_pd(x0, x0));
        __m256d const b = _mm256_sub_pd(x0, one);
        acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(hundred, _mm256_mul_pd(a, a)), _mm256_mul_pd(b, b)));
    }
    return finish(acc, i, m, [x](std::size_t j) {
        double const a = x[j + 1] - x[j] * x[j];
        double const b = x[j] - 1.0;
        return 100.0 * (a * a) + b * b;
    });
}

inline __m256d clamp(__m256d v, __m256d lo, __m256d hi) { return _mm256_min_pd(_mm256_max_pd(v, lo), hi); }

inline double clamp(double v, double bound)
{
    v = v < -bound ? -bound : v;
    return bound < v ? bound : v;
}

template <typename VecOp, typename ScalarOp>
void binary_clamped(double* a, double const* b, std::size_t n, double bound, VecOp vop, ScalarOp sop)
{
    __m256d const lo = _mm256_set1_pd(-bound);
    __m256d const hi = _mm256_set1_pd(bound);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d const r = vop(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(a + i, clamp(r, lo, hi));
    }
    for (; i < n; ++i) {
        a[i] = clamp(sop(a[i], b[i]), bound);
    }
}

void add_clamped(double* a, double const* b, std::size_t n, double bound)
{
    binary_clamped(a, b, n, bound, [](__m256d p, __m256d q) { return _mm256_add_pd(p, q); },
        [](double p, double q) { return p + q; });
}

void sub_clamped(double* a, double const* b, std::size_t n, double bound)
{
    binary_clamped(a, b, n, bound, [](__m256d p, __m256d q) { return _mm256_sub_pd(p, q); },
        [](double p, double q) { return p - q; });
}

void mul_clamped(double* a, double const* b, std::size_t n, double bound)
{
    binary_clamped(a, b, n, bound, [](__m256d p, __m256d q) { return _mm256_mul_pd(p, q); },
        [](double p, double q) { return p * q; });
}

void div_protected(double* a, double const* b, std::size_t n, double bound)
{
    __m256d const lo = _mm256_set1_pd(-bound);
    __m256d const hi = _mm256_set1_pd(bound);
    __m256d const zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d const den = _mm256_loadu_pd(b + i);
        __m256d const q = clamp(_mm256_div_pd(_mm256_loadu_pd(a + i), den), lo, hi);
        __m256d const is_zero = _mm256_cmp_pd(den, zero, _CMP_EQ_OQ);
        _mm256_storeu_pd(a + i, _mm256_blendv_pd(q, zero, is_zero));
    }
    for (; i < n; ++i) {
        a[i] = b[i] == 0.0 ? 0.0 : clamp(a[i] / b[i], bound);
    }
}

} // namespace

KernelTable const* avx2()
{
    static constexpr KernelTable table {
        "avx2", mean_rows, argmax, sum, sum_squares, rosenbrock,
        add_clamped, sub_clamped, mul_clamped, div_protected,
    };
    static bool const supported = __builtin_cpu_supports("avx2");
    return supported ? &table : nullptr;
}

#else

KernelTable const* avx2() { return nullptr; }

#endif

} // namespace ratectl::kernels
