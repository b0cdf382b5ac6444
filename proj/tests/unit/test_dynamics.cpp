#include <gtest/gtest.h>

#include <random>
#include <set>

#include "orbitcancel/dynamics/germ.hpp"

using namespace orbitcancel;

namespace {

RatMapP1 poly_map(std::vector<long> c) {
    std::vector<BigRat> q(c.begin(), c.end());
    return RatMapP1::from_polynomial(QPoly(q));
}

PointP1 pt(long a, long b = 1) { return {a, b}; }

}  // namespace

TEST(PointP1, NormalisesCoordinates) {
    EXPECT_EQ(pt(3, 6), pt(1, 2));
    EXPECT_EQ(pt(-2, -4), pt(1, 2));
    EXPECT_EQ(pt(-5, 0), PointP1::infinity());
    EXPECT_EQ(PointP1::parse("inf"), PointP1::infinity());
    EXPECT_EQ(PointP1::parse("-24/25"), pt(-24, 25));
    EXPECT_THROW(pt(0, 0), PreconditionError);
}

TEST(RatMap, FormsAndResultant) {
    RatMapP1 sq = poly_map({0, 0, 1});
    EXPECT_EQ(sq.F(), (std::vector<BigInt>{0, 0, 1}));
    EXPECT_EQ(sq.G(), (std::vector<BigInt>{1, 0, 0}));
    EXPECT_EQ(sq.resultant(), 1);
    RatMapP1 r = RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1}));
    EXPECT_EQ(r.F(), (std::vector<BigInt>{1, 0, 2}));
    EXPECT_EQ(r.G(), (std::vector<BigInt>{-3, 1, 0}));
    // common factors cancel: (x^2 - 1)/(x - 1) = x + 1
    RatMapP1 c = RatMapP1::from_rational_function(QPoly({-1, 0, 1}), QPoly({-1, 1}));
    EXPECT_EQ(c.degree(), 1);
    EXPECT_THROW(RatMapP1({0, 0, 3}, {0, 1, 0}), PreconditionError);
    EXPECT_THROW(RatMapP1::from_polynomial(QPoly({5})), PreconditionError);
}

TEST(RatMap, IteratePointExamples) {
    RatMapP1 sq = poly_map({0, 0, 1});
    EXPECT_EQ(iterate_point(sq, pt(2), 3), pt(256));
    RatMapP1 f = poly_map({-1, 0, 1});
    EXPECT_EQ(iterate_point(f, pt(0), 2), pt(0));
    EXPECT_EQ(iterate_point(f, pt(7, 3), 0), pt(7, 3));
    EXPECT_EQ(f(PointP1::infinity()), PointP1::infinity());
    EXPECT_EQ(f(pt(1, 5)), pt(-24, 25));
}

TEST(RatMap, IterationIsAdditive) {
    const std::vector<RatMapP1> maps = {poly_map({-1, 0, 1}), RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1})),
                                        RatMapP1({1, 0, -1}, {0, 2, 0})};
    for (const auto& f : maps)
        for (unsigned m = 0; m <= 4; ++m)
            for (unsigned n = 0; n <= 4; ++n)
                EXPECT_EQ(iterate_point(f, pt(2, 3), m + n), iterate_point(f, iterate_point(f, pt(2, 3), m), n));
}

TEST(RatMap, CompositionMatchesPointwise) {
    RatMapP1 f = RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1}));
    RatMapP1 g = poly_map({-1, 0, 1});
    RatMapP1 fg = f.compose(g);
    for (long a = -5; a <= 5; ++a) EXPECT_EQ(fg(pt(a, 2)), f(g(pt(a, 2))));
    EXPECT_EQ(g.iterate(3)(pt(1, 5)), iterate_point(g, pt(1, 5), 3));
}

TEST(Reduction, TablesFromExamples) {
    FpMapTable t = reduce_mod_p(poly_map({0, 0, 1}), 3);
    EXPECT_EQ(t.table, (std::vector<std::size_t>{0, 1, 1, 3}));
    EXPECT_EQ(t.N0, 1u);
    FpMapTable u = reduce_mod_p(poly_map({-1, 0, 1}), 5);
    EXPECT_EQ(u.table, (std::vector<std::size_t>{4, 0, 3, 3, 0, 5}));
    EXPECT_EQ(u.N0, 2u);
    FpMapTable w = reduce_mod_p(poly_map({0, 0, 1}), 7);
    EXPECT_EQ(w.N0, 2u);
    EXPECT_THROW(reduce_mod_p(RatMapP1({0, 0, 3}, {1, 0, 0}), 3), PreconditionError);
}

TEST(Reduction, IdentityPeriodIsOne) {
    FpMapTable t;
    t.p = 3;
    t.table = {0, 1, 2, 3};
    EXPECT_EQ(reduction_period(t), 1u);
}

TEST(Reduction, PeriodSatisfiesDefiningIdentity) {
    const std::vector<RatMapP1> maps = {poly_map({-1, 0, 1}), poly_map({0, 0, 1}), poly_map({1, 0, 1}), poly_map({-2, 0, 1}),
                                        RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1}))};
    for (const auto& f : maps)
        for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
            if (!has_good_reduction(f, p)) continue;
            FpMapTable t = reduce_mod_p(f, p);
            for (std::size_t x = 0; x <= p; ++x) EXPECT_EQ(t.apply(x, t.N0), t.apply(x, 2 * t.N0));
            for (unsigned long n = 1; n < t.N0; ++n) {
                bool all = true;
                for (std::size_t x = 0; x <= p; ++x) all = all && t.apply(x, n) == t.apply(x, 2 * n);
                EXPECT_FALSE(all) << "N0 not minimal for p=" << p;
            }
        }
}

TEST(Reduction, CommutesWithIteration) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> coord(-50, 50);
    const RatMapP1 f = RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1}));
    const unsigned long p = find_good_prime(f);
    FpMapTable t = reduce_mod_p(f, p);
    for (int i = 0; i < 100; ++i) {
        long a = coord(rng), b = coord(rng);
        if (a == 0 && b == 0) continue;
        PointP1 x(a, b);
        const unsigned n = static_cast<unsigned>(i % 7);
        EXPECT_EQ(reduce_point(iterate_point(f, x, n), p), t.apply(reduce_point(x, p), n));
    }
}

TEST(Reduction, AutoPrimePolicy) {
    EXPECT_EQ(auto_prime(poly_map({-1, 0, 1})), 5u);
    EXPECT_EQ(find_good_prime(RatMapP1({0, 0, 3}, {1, 0, 0})), 5u);
}

TEST(Germ, SquaringAtZeroAndInfinity) {
    RatMapP1 sq = poly_map({0, 0, 1});
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        auto g0 = germ_at_residue_fixed_point(sq, p, 0, 1, 8);
        EXPECT_EQ(g0.series.str(), "(1)z^2");
        EXPECT_EQ(g0.series.tail(), TailKind::zero);
        auto ginf = germ_at_residue_fixed_point(sq, p, p, 1, 8);
        EXPECT_EQ(ginf.series.str(), "(1)z^2");
    }
}

TEST(Germ, ShiftedChartExample) {
    RatMapP1 f = poly_map({-1, 0, 1});
    auto g = germ_at_residue_fixed_point(f, 5, 3, 1, 6);
    EXPECT_EQ(g.series.str(), "(5)z^0 + (6)z^1 + (1)z^2");
    EXPECT_EQ(*g.series[1].abs(), PPower::of(5, 0));
    EXPECT_THROW(germ_at_residue_fixed_point(f, 5, 1, 1, 6), PreconditionError);
}

TEST(Germ, OrbitCompositionAgreesWithExactEvaluation) {
    RatMapP1 f = poly_map({-1, 0, 1});
    auto g = germ_at_residue_fixed_point(f, 5, 0, 2, 16);
    EXPECT_TRUE(g.series.all_integral());
    EXPECT_GE(g.series[0].valuation(), 1);
    // f^2(z) = z^4 - 2 z^2 in the chart at 0
    EXPECT_EQ(g.series.str(), "(-2)z^2 + (1)z^4");
    auto h = germ_at_residue_fixed_point(RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1})), 5, 5, 0, 12);
    for (long z : {5, 10, -15, 25}) {
        Padic zp = Padic::from_int(z, 5);
        Padic direct = h.eval(zp);
        Padic series = Padic::exact_zero(5);
        for (auto it = h.series.coeffs().rbegin(); it != h.series.coeffs().rend(); ++it) series = series * zp + *it;
        EXPECT_GE((direct - series).valuation(), 13);
    }
}

TEST(Preimages, Examples) {
    RatMapP1 sq = poly_map({0, 0, 1});
    EXPECT_EQ(rational_preimages(sq, pt(4)), (std::vector<PointP1>{pt(-2), pt(2)}));
    EXPECT_TRUE(rational_preimages(sq, pt(-1)).empty());
    EXPECT_EQ(rational_preimages(poly_map({-2, 0, 1}), pt(-2)), (std::vector<PointP1>{pt(0)}));
    EXPECT_EQ(rational_preimages(sq, PointP1::infinity()), (std::vector<PointP1>{PointP1::infinity()}));
}

TEST(Preimages, CompleteAgainstBruteForce) {
    const std::vector<RatMapP1> maps = {poly_map({-1, 0, 1}), RatMapP1::from_rational_function(QPoly({0, 0, 1}), QPoly({1, 0, 0, 1})),
                                        RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1})),
                                        poly_map({0, -3, 0, 0, 1})};
    const long H = 1000;
    std::vector<PointP1> pts;
    for (long b = 0; b <= H; ++b)
        for (long a = -H; a <= H; ++a)
            if (std::gcd(a, b) == 1 && (b > 0 || a == 1)) pts.emplace_back(a, b);
    std::mt19937_64 rng(5);
    for (const auto& f : maps) {
        std::unordered_map<PointP1, std::vector<PointP1>, PointP1Hash> fibres;
        for (const auto& x : pts) fibres[f(x)].push_back(x);
        std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
        for (int i = 0; i < 300; ++i) {
            const PointP1 y = f(pts[pick(rng)]);
            std::set<PointP1> got;
            for (const auto& z : rational_preimages(f, y)) {
                EXPECT_EQ(f(z), y);
                got.insert(z);
            }
            for (const auto& x : fibres[y]) EXPECT_TRUE(got.count(x)) << x.str() << " missing over " << y.str();
        }
    }
}
