#include <gtest/gtest.h>

#include "orbitcancel/tower/tower.hpp"

using namespace orbitcancel;

namespace {

RatMapP1 poly_map(std::vector<long> c) {
    std::vector<BigRat> q(c.begin(), c.end());
    return RatMapP1::from_polynomial(QPoly(q));
}

PointP1 pt(long a, long b = 1) { return {a, b}; }
const PointP1 inf = PointP1::infinity();

}  // namespace

TEST(Invariance, Examples) {
    EXPECT_TRUE(invariance_check(poly_map({0, 0, 1}), {pt(0), inf}).invariant);
    EXPECT_TRUE(invariance_check(poly_map({-2, 0, 1}), {pt(2), inf}).invariant);
    const InvarianceResult bad = invariance_check(poly_map({0, 0, 1}), {pt(2)});
    EXPECT_FALSE(bad.invariant);
    EXPECT_EQ(*bad.witness, pt(2));
    EXPECT_THROW(invariance_check(poly_map({0, 0, 1}), {}), PreconditionError);
}

TEST(Tower, Examples) {
    TowerState a = tower_compute(poly_map({0, 0, 1}), {pt(0), inf}, 4);
    ASSERT_TRUE(a.s0);
    EXPECT_EQ(*a.s0, 0u);
    for (const auto& level : a.levels) EXPECT_EQ(level, (PointSet{pt(0), inf}));

    TowerState b = tower_compute(poly_map({0, 0, 1}), {pt(1), inf}, 4);
    EXPECT_EQ(*b.s0, 1u);
    EXPECT_EQ(b.levels[1], (PointSet{pt(-1), pt(1), inf}));
    EXPECT_EQ(b.levels[2], b.levels[1]);

    TowerState c = tower_compute(poly_map({-2, 0, 1}), {pt(2), inf}, 5);
    EXPECT_EQ(*c.s0, 2u);
    EXPECT_EQ(c.levels[1], (PointSet{pt(-2), pt(2), inf}));
    EXPECT_EQ(c.levels[2], (PointSet{pt(-2), pt(0), pt(2), inf}));
    EXPECT_EQ(c.levels[5], c.levels[2]);
    EXPECT_TRUE(c.stable_for_range);

    EXPECT_THROW(tower_compute(poly_map({0, 0, 1}), {pt(2)}, 3), PreconditionError);
}

TEST(Tower, UnstableWithinRange) {
    // x^2 - 1 over the 2-cycle {0, -1}: 0 <- +-1 and -1 <- 0, so level 1 gains 1
    TowerState t = tower_compute(poly_map({-1, 0, 1}), {pt(0), pt(-1)}, 1);
    EXPECT_FALSE(t.s0);
    EXPECT_FALSE(t.stable_for_range);
    EXPECT_EQ(t.levels[1], (PointSet{pt(-1), pt(0), pt(1)}));
}

TEST(Tower, InvariantsOnCorpusMaps) {
    const std::vector<std::pair<RatMapP1, PointSet>> cases = {
        {poly_map({-1, 0, 1}), {pt(0), pt(-1), inf}},
        {poly_map({-2, 0, 1}), {pt(2), inf}},
        {poly_map({0, 0, 1}), {pt(1), inf}},
        {poly_map({0, -3, 0, 0, 1}), {pt(0), inf}},
        {RatMapP1::from_rational_function(QPoly({0, 0, 1}), QPoly({1, 0, 0, 1})), {pt(0)}},
        {RatMapP1({1, 0, -1}, {0, 2, 0}), {inf, pt(0)}},
    };
    for (const auto& [f, Y] : cases) {
        const TowerState st = tower_compute(f, Y, 6, 4);
        EXPECT_TRUE(tower_is_consistent(st)) << f.str();
        for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
            if (!has_good_reduction(f, p)) continue;
            const SeparationReport r = reduction_separation_bound(f, Y, p, st.levels);
            EXPECT_TRUE(r.within_bound);
            for (auto n : r.classes_per_level) EXPECT_LE(n, p + 1);
        }
    }
}

TEST(Separation, Examples) {
    EXPECT_EQ(reduction_separation_bound(poly_map({0, 0, 1}), {pt(0)}, 3).t, 4u);
    EXPECT_EQ(reduction_separation_bound(poly_map({0, 0, 1}), {pt(0)}, 7).t, 8u);
    const RatMapP1 f = poly_map({-2, 0, 1});
    const TowerState st = tower_compute(f, {pt(2), inf}, 2);
    const SeparationReport r = reduction_separation_bound(f, {pt(2), inf}, 5, st.levels);
    EXPECT_EQ(r.classes_per_level.back(), 4u);
    EXPECT_EQ(r.t, 6u);
    EXPECT_TRUE(r.Y_separated);
    EXPECT_FALSE(reduction_separation_bound(f, {pt(2), pt(7)}, 5).Y_separated);
    EXPECT_THROW(reduction_separation_bound(RatMapP1({0, 0, 3}, {1, 0, 0}), {pt(0)}, 3), PreconditionError);
}
