#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "ratectl/kernels.hpp"
#include "ratectl/rng.hpp"

using namespace ratectl;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double scale)
{
    std::vector<double> v(n);
    for (double& x : v) {
        x = rng.normal(0.0, scale);
        if (rng.below(50) == 0) {
            x = 0.0;
        }
    }
    return v;
}

bool same_bits(std::vector<double> const& a, std::vector<double> const& b)
{
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::signbit(a[i]) != std::signbit(b[i]) || !(a[i] == b[i] || (std::isnan(a[i]) && std::isnan(b[i])))) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("scalar kernels against plain loops")
{
    auto const& k = kernels::scalar();
    std::vector<double> const x {3.0, -1.0, 7.0, 7.0, 2.0};
    CHECK(k.argmax(x.data(), x.size()) == 2);
    CHECK(k.sum(x.data(), x.size()) == 18.0);
    CHECK(k.sum_squares(x.data(), x.size()) == 9.0 + 1.0 + 49.0 + 49.0 + 4.0);
    std::vector<double> const ones(4, 1.0);
    CHECK(k.rosenbrock(ones.data(), ones.size()) == 0.0);

    std::vector<double> a {1.0, 2.0, 3.0, 4.0};
    std::vector<double> const z {0.0, 2.0, 0.0, 8.0};
    k.div_protected(a.data(), z.data(), a.size(), 1e6);
    CHECK(a == std::vector {0.0, 1.0, 0.0, 0.5});
    std::vector<double> m {1e5, -1e5};
    std::vector<double> const m2 {1e5, 1e5};
    k.mul_clamped(m.data(), m2.data(), m.size(), 1e6);
    CHECK(m == std::vector {1e6, -1e6});

    std::vector<double> const r0 {1.0, 2.0, 3.0};
    std::vector<double> const r1 {3.0, 4.0, 5.0};
    std::vector<double const*> const rows {r0.data(), r1.data()};
    std::vector<double> out(3);
    k.mean_rows(rows, 3, out.data());
    CHECK(out == std::vector {2.0, 3.0, 4.0});
}

TEST_CASE("avx2 kernels are bit-identical to scalar")
{
    auto const* v = kernels::avx2();
    if (v == nullptr) {
        MESSAGE("AVX2 kernels unavailable on this machine; skipping equivalence");
        return;
    }
    auto const& s = kernels::scalar();
    Rng rng(1);
    for (int t = 0; t < 3000; ++t) {
        std::size_t const n = rng.below(70);
        double const scale = std::pow(10.0, rng.uniform(-3.0, 6.0));
        auto const x = random_vec(rng, n, scale);
        auto const y = random_vec(rng, n, scale);

        REQUIRE(s.sum(x.data(), n) == v->sum(x.data(), n));
        REQUIRE(s.sum_squares(x.data(), n) == v->sum_squares(x.data(), n));
        REQUIRE(s.rosenbrock(x.data(), n) == v->rosenbrock(x.data(), n));
        if (n > 0) {
            auto ties = x;
            if (n > 3) {
                ties[n - 1] = ties[1] = 1e9;
            }
            REQUIRE(s.argmax(ties.data(), n) == v->argmax(ties.data(), n));
        }
        for (auto op : {&kernels::KernelTable::add_clamped, &kernels::KernelTable::sub_clamped,
                 &kernels::KernelTable::mul_clamped, &kernels::KernelTable::div_protected}) {
            auto a1 = x;
            auto a2 = x;
            (s.*op)(a1.data(), y.data(), n, 1e6);
            (v->*op)(a2.data(), y.data(), n, 1e6);
            REQUIRE(same_bits(a1, a2));
        }
        std::size_t const nrows = 1 + rng.below(25);
        std::vector<std::vector<double>> store;
        std::vector<double const*> rows;
        for (std::size_t r = 0; r < nrows; ++r) {
            store.push_back(random_vec(rng, n, scale));
        }
        for (auto const& r : store) {
            rows.push_back(r.data());
        }
        std::vector<double> o1(n);
        std::vector<double> o2(n);
        s.mean_rows(rows, n, o1.data());
        v->mean_rows(rows, n, o2.data());
        REQUIRE(same_bits(o1, o2));
    }
}
