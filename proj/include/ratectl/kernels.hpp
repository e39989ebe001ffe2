#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace ratectl::kernels {

// Data-parallel inner loops. Every variant must produce bit-identical output
// to the scalar reference: reductions use four striped partial sums combined
// as (s0 + s1) + (s2 + s3), with tail elements folded into lanes 0.. in order.
struct KernelTable {
    std::string_view name;

    // out[i] = (rows[0][i] + rows[1][i] + ...) / rows.size(), summed in row order.
    void (*mean_rows)(std::span<double const* const> rows, std::size_t n, double* out);
    // Lowest index holding the maximum.
    std::size_t (*argmax)(double const* x, std::size_t n);

    double (*sum)(double const* x, std::size_t n);
    double (*sum_squares)(double const* x, std::size_t n);
    // Σ_{i<n-1} 100·(x[i+1] − x[i]²)² + (x[i] − 1)²
    double (*rosenbrock)(double const* x, std::size_t n);

    // Elementwise a[i] = clamp(a[i] op b[i], -bound, bound); division by exactly 0 yields 0.
    void (*add_clamped)(double* a, double const* b, std::size_t n, double bound);
    void (*sub_clamped)(double* a, double const* b, std::size_t n, double bound);
    void (*mul_clamped)(double* a, double const* b, std::size_t n, double bound);
    void (*div_protected)(double* a, double const* b, std::size_t n, double bound);
};

KernelTable const& scalar();
// Null when the build or the host CPU lacks AVX2.
KernelTable const* avx2();

// Selected once at first use: AVX2 when available unless RATECTL_SIMD=scalar.
KernelTable const& active();

} // namespace ratectl::kernels
