#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "ratectl/rng.hpp"
#include "ratectl/sr.hpp"

using namespace ratectl;

namespace {

TokenGenome prog(std::initializer_list<Op> ops)
{
    TokenGenome g;
    for (Op o : ops) {
        g.tokens.push_back(static_cast<Token>(o));
    }
    return g;
}

} // namespace

TEST_CASE("execute examples")
{
    CHECK(execute(prog({Op::Input}), 3.5) == 3.5);
    CHECK(execute(prog({Op::Input, Op::Input, Op::Mul, Op::Input, Op::Add}), 2.0) == 6.0);
    CHECK(execute(prog({Op::ConstOne, Op::ConstOne, Op::Sub, Op::Log}), 0.0) == 0.0);
    CHECK_FALSE(execute(prog({Op::Add}), 1.0).has_value());
    CHECK_FALSE(execute(TokenGenome {}, 1.0).has_value());
    // Protected division and under-arity no-ops.
    CHECK(execute(prog({Op::ConstOne, Op::Input, Op::Div}), 0.0) == 0.0);
    CHECK(execute(prog({Op::ConstOne, Op::Input, Op::Div}), 4.0) == 0.25);
    CHECK(execute(prog({Op::Input, Op::Sub}), 5.0) == 5.0);
    CHECK(execute(prog({Op::Input, Op::Log}), -3.0) == 0.0);
    CHECK(execute(prog({Op::Input, Op::Log}), std::exp(2.0)) == doctest::Approx(2.0));
    // Clamping.
    TokenGenome big = prog({Op::Input});
    for (int i = 0; i < 5; ++i) {
        big.tokens.push_back(static_cast<Token>(Op::Input));
        big.tokens.push_back(static_cast<Token>(Op::Mul));
    }
    CHECK(execute(big, 100.0) == kValueBound);
}

TEST_CASE("nguyen targets")
{
    CHECK(nguyen_target(NguyenTarget::N1, 1.0) == 3.0);
    CHECK(nguyen_target(NguyenTarget::N5, 0.0) == -1.0);
    CHECK(nguyen_target(NguyenTarget::N8, 4.0) == 2.0);
    CHECK(parse_nguyen("nguyen3") == NguyenTarget::N3);
    CHECK_THROWS(parse_nguyen("nguyen9"));
}

TEST_CASE("grid")
{
    SrProblem const n1(NguyenTarget::N1);
    CHECK(n1.inputs().size() == 81);
    CHECK(n1.inputs().front() == -4.0);
    CHECK(n1.inputs().back() == doctest::Approx(4.0));
    SrProblem const n8(NguyenTarget::N8);
    CHECK(n8.inputs().front() == 0.0);
    CHECK(n8.inputs().back() == doctest::Approx(8.0));
}

TEST_CASE("evaluate examples")
{
    SrProblem const n1(NguyenTarget::N1);
    auto const exact = prog({Op::Input, Op::Input, Op::Input, Op::Mul, Op::Mul, Op::Input, Op::Input, Op::Mul,
        Op::Add, Op::Input, Op::Add});
    auto const e = n1.evaluate(exact);
    CHECK(e.size() == 81);
    for (double v : e) {
        CHECK(v < 1e-9);
    }
    CHECK(n1.is_solved(e));
    for (double v : n1.evaluate(TokenGenome {})) {
        CHECK(v == kEmptyStackPenalty);
    }
    SrProblem const n8(NguyenTarget::N8);
    auto const one = n8.evaluate(prog({Op::ConstOne}));
    std::size_t const at4 = 40;
    REQUIRE(n8.inputs()[at4] == doctest::Approx(4.0));
    CHECK(one[at4] == doctest::Approx(1.0));
}

TEST_CASE("batched execution equals per-case execution")
{
    Rng rng(1);
    for (auto t : {NguyenTarget::N1, NguyenTarget::N4, NguyenTarget::N7}) {
        SrProblem const p(t);
        for (int i = 0; i < 3000; ++i) {
            auto const g = random_genome(1 + rng.below(80), kInstructionCount, rng);
            auto const fast = p.evaluate(g);
            auto const slow = evaluate_sr_scalar(p, g);
            REQUIRE(fast == slow);
        }
    }
}

TEST_CASE("execution is total and bounded")
{
    Rng rng(2);
    std::vector<double> xs(16);
    std::vector<double> out(16);
    for (int i = 0; i < 100000; ++i) {
        auto const g = random_genome(rng.below(60), kInstructionCount, rng);
        double const x = rng.uniform(-10.0, 10.0);
        auto const v = execute(g, x);
        if (v) {
            REQUIRE(std::isfinite(*v));
            REQUIRE(std::abs(*v) <= kValueBound);
        }
        if (i % 10 == 0) {
            for (double& s : xs) {
                s = rng.uniform(-10.0, 10.0);
            }
            if (execute_batch(g, xs, out)) {
                for (double o : out) {
                    REQUIRE(std::isfinite(o));
                    REQUIRE(std::abs(o) <= kValueBound);
                }
            }
        }
    }
}

TEST_CASE("random genomes respect the initial length range")
{
    SrProblem const p(NguyenTarget::N2);
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        auto const g = p.random_genome(rng);
        CHECK(g.size() >= 5);
        CHECK(g.size() <= 50);
        for (Token t : g.tokens) {
            CHECK(t < kInstructionCount);
        }
    }
}
