#include <gtest/gtest.h>

#include <random>

#include "orbitcancel/counterexamples/counterexamples.hpp"

using namespace orbitcancel;

namespace {

IntPoint2 ip(long a, long b) { return {BigInt(a), BigInt(b)}; }

MultiPoly xy_poly(std::initializer_list<std::tuple<unsigned, unsigned, long>> terms) {
    MultiPoly p(2);
    for (const auto& [i, j, c] : terms) p.add_term({i, j}, c);
    return p;
}

}  // namespace

TEST(Fibonacci, SmallCases) {
    EXPECT_EQ(fibonacci_point(0), ip(0, 1));
    EXPECT_EQ(fibonacci_map(ip(0, 1)), ip(0, 0));

    EXPECT_EQ(fibonacci_point(1), ip(1, 0));
    EXPECT_EQ(fibonacci_map(ip(1, 0)), ip(0, 1));
    EXPECT_EQ(fibonacci_map(ip(0, 1)), ip(0, 0));

    EXPECT_EQ(fibonacci_point(2), ip(-1, 1));
    EXPECT_EQ(fibonacci_map(ip(-1, 1)), ip(-1, 0));
    EXPECT_EQ(fibonacci_map(fibonacci_map(ip(-1, 1))), ip(0, 1));
}

TEST(Fibonacci, VerifyTo25) {
    const FibonacciReport rep = fibonacci_verify(25);
    EXPECT_TRUE(rep.base_case_ok);
    ASSERT_EQ(rep.rows.size(), 25u);
    long long prev = 0, cur = 1;  // F_0, F_1 from the plain recurrence
    for (const auto& row : rep.rows) {
        EXPECT_EQ(row.F, BigInt(std::to_string(cur))) << row.n;
        EXPECT_TRUE(row.killed) << row.n;
        EXPECT_TRUE(row.alive_before) << row.n;
        ASSERT_TRUE(row.scale) << row.n;
        EXPECT_EQ(*row.scale, row.n % 2 ? row.F : BigInt(-row.F)) << row.n;
        EXPECT_TRUE(row.ok());
        const long long next = prev + cur;
        prev = cur;
        cur = next;
    }
    for (std::size_t i = 0; i < rep.scale_signs.size(); ++i) EXPECT_EQ(rep.scale_signs[i], i % 2 ? -1 : 1);
    EXPECT_TRUE(rep.all_ok());
    EXPECT_EQ(fibonacci_verify(5).rows.size(), 5u);
    EXPECT_THROW(fibonacci_verify(0), PreconditionError);
}

TEST(Fibonacci, OrbitLengthIsExact) {
    // a_n reaches the origin in exactly n+1 steps; count by brute iteration on scaled representatives.
    for (unsigned n = 0; n <= 25; ++n) {
        IntPoint2 p = fibonacci_point(n);
        unsigned steps = 0;
        while (!is_origin(p)) {
            p = primitive(fibonacci_map(p));
            ++steps;
            ASSERT_LE(steps, n + 5);
        }
        EXPECT_EQ(steps, n + 1);
    }
}

TEST(PlaneMap, FirstLevels) {
    const auto states = p2_iterate_symbolic(2);
    ASSERT_EQ(states.size(), 2u);
    EXPECT_EQ(states[0].P, xy_poly({{2, 0, 1}, {0, 1, 1}}));
    EXPECT_EQ(states[0].Q, xy_poly({{2, 0, 1}, {0, 2, 1}, {0, 1, 1}}));
    // (x^2+y)^2 + x^2+y^2+y
    EXPECT_EQ(states[1].P, xy_poly({{4, 0, 1}, {2, 1, 2}, {0, 2, 2}, {2, 0, 1}, {0, 1, 1}}));
    for (const auto& st : states) {
        EXPECT_TRUE(st.derivative_identities);
        EXPECT_EQ(st.jacobian_at_origin, expected_smooth_jacobian());
    }
}

TEST(PlaneMap, RecurrenceAndDerivativesThroughLevel6) {
    const auto states = p2_iterate_symbolic(6);
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        const MultiPoly& P = states[i].P;
        const MultiPoly& Q = states[i].Q;
        EXPECT_EQ(states[i + 1].P, P * P + Q);
        EXPECT_EQ(states[i + 1].Q, P * P + Q * Q + Q);
    }
    for (const auto& st : states) {
        EXPECT_EQ(st.P.total_degree(), 1u << st.level);
        EXPECT_EQ(st.P.partial(1).eval({0, 0}), 1);
        EXPECT_EQ(st.Q.partial(1).eval({0, 0}), 1);
        EXPECT_EQ(st.P.partial(0).eval({0, 0}), 0);
        EXPECT_EQ(st.Q.partial(0).eval({0, 0}), 0);
    }
}

TEST(PlaneMap, JetsAgreeWithFullExpansion) {
    const auto full = p2_iterate_symbolic(6);
    for (unsigned k : {1u, 3u, 7u}) {
        const auto jets = p2_iterate_symbolic(6, P2Options{0, k});
        for (std::size_t i = 0; i < full.size(); ++i) EXPECT_EQ(jets[i].P, full[i].P.truncated(k)) << i << " " << k;
    }
}

TEST(PlaneMap, SymbolicMatchesNumericIteration) {
    const auto states = p2_iterate_symbolic(5);
    std::mt19937 rng(11);
    std::uniform_int_distribution<long> num(-5, 5), den(1, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const BigRat x = make_rat(num(rng), den(rng)), y = make_rat(num(rng), den(rng));
        for (const auto& st : states) {
            const auto [u, v] = p2_affine_iterate(BigRat(x), BigRat(y), st.level);
            EXPECT_EQ(st.P.eval({x, y}), u);
            EXPECT_EQ(st.Q.eval({x, y}), v);
        }
    }
}

TEST(PlaneMap, TermBudget) {
    EXPECT_THROW(p2_iterate_symbolic(12), ResourceError);
    EXPECT_THROW(p2_iterate_symbolic(6, P2Options{100, std::nullopt}), ResourceError);
    EXPECT_EQ(p2_iterate_symbolic(12, P2Options{0, 1u}).size(), 12u);
}

TEST(PlaneMap, SmoothnessThroughLevel12) {
    for (unsigned n = 1; n <= 12; ++n) {
        const SmoothnessReport rep = p2_smoothness_check(n);
        EXPECT_TRUE(rep.matches_expected) << n;
        EXPECT_EQ(rep.rank, 2u);
    }
    EXPECT_EQ(rank_q(expected_smooth_jacobian()), 2u);
}

TEST(PlaneMap, PhiPsiJacobianFromFullPolynomials) {
    // Differentiate Phi and Psi directly at level 4, independent of the stored matrix.
    const auto st = p2_iterate_symbolic(4).back();
    const std::vector<BigRat> origin(4, BigRat(0));
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(st.Phi.partial(i).eval(origin), expected_smooth_jacobian()[0][i]);
        EXPECT_EQ(st.Psi.partial(i).eval(origin), expected_smooth_jacobian()[1][i]);
    }
}
