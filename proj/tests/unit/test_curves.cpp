#include <gtest/gtest.h>

#include <random>
#include <unordered_map>

#include "orbitcancel/curves/sigma.hpp"

using namespace orbitcancel;

namespace {

QPoly qp(std::vector<long> c) { return QPoly(std::vector<BigRat>(c.begin(), c.end())); }

/// sum c[i][j] x^i y^j
CurveOnP1xP1 curve(Matrix<BigRat> c) { return CurveOnP1xP1::from_form(BiPoly(std::move(c))); }

PointP1 pt(long a, long b = 1) { return {a, b}; }
const PointP1 inf = PointP1::infinity();

std::vector<std::string> names(const std::vector<CurveComponent>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(c.curve.str());
    return out;
}

}  // namespace

TEST(IntFactor, FactorsAndHilbertSymbols) {
    auto f = factor_integer(BigInt("600851475143"));
    ASSERT_TRUE(f);
    EXPECT_EQ(f->size(), 4u);
    auto g = factor_integer(BigInt(1000003) * BigInt(998244353) * 12);
    ASSERT_TRUE(g);
    EXPECT_EQ((*g)[BigInt(2)], 2u);
    EXPECT_EQ((*g)[BigInt(998244353)], 1u);
    // x^2 + y^2 = z^2 and x^2 + y^2 = 3 z^2
    EXPECT_TRUE(*legendre_solvable(1, 1));
    EXPECT_TRUE(*legendre_solvable(3, -3));
    EXPECT_FALSE(*legendre_solvable(-1, -1));
    EXPECT_FALSE(*legendre_solvable(3, -1));
    EXPECT_TRUE(*legendre_solvable(2, 7));
    EXPECT_FALSE(*legendre_solvable(-1, 3));
}

TEST(IntFactor, LegendreAgreesWithSearch) {
    for (long a = -12; a <= 12; ++a)
        for (long b = -12; b <= 12; ++b) {
            if (a == 0 || b == 0) continue;
            bool found = false;
            for (long x = 0; x <= 40 && !found; ++x)
                for (long y = 0; y <= 40 && !found; ++y) {
                    if (x == 0 && y == 0) continue;
                    const long v = a * x * x + b * y * y;
                    if (v < 0) continue;
                    const long r = std::lround(std::sqrt(static_cast<double>(v)));
                    found = r * r == v;
                }
            EXPECT_EQ(*legendre_solvable(a, b), found) << a << " " << b;
        }
}

TEST(Decompose, Examples) {
    const Decomposition a = poly_decompose(qp({0, 0, 0, 0, 1}));
    ASSERT_EQ(a.factors.size(), 2u);
    EXPECT_EQ(a.factors[0], qp({0, 0, 1}));
    EXPECT_EQ(a.factors[1], qp({0, 0, 1}));
    const Decomposition b = poly_decompose(qp({0, 0, 0, 2, 0, 0, 1}));
    ASSERT_EQ(b.factors.size(), 2u);
    EXPECT_EQ(b.factors[0], qp({0, 2, 1}));
    EXPECT_EQ(b.factors[1], qp({0, 0, 0, 1}));
    EXPECT_TRUE(poly_decompose(qp({3, -1, 4, 1, -5, 9})).indecomposable());
    EXPECT_FALSE(b.needs_extension);
}

TEST(Decompose, RecoversRandomCompositions) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> coef(-4, 4);
    auto rand_poly = [&](long d) {
        std::vector<long> c(static_cast<std::size_t>(d + 1));
        for (auto& x : c) x = coef(rng);
        if (c.back() == 0) c.back() = 1;
        return qp(c);
    };
    for (int i = 0; i < 30; ++i) {
        const QPoly g = rand_poly(2 + i % 2), h = rand_poly(2 + (i / 2) % 2);
        const QPoly P = g.compose(h);
        const Decomposition d = poly_decompose(P);
        EXPECT_GE(d.factors.size(), 2u) << to_string(P);
        EXPECT_EQ(compose_all(d.factors), P);
        for (const auto& f : d.factors) EXPECT_TRUE(poly_decompose(f).indecomposable());
    }
}

TEST(Components, Examples) {
    const CurveOnP1xP1 delta = CurveOnP1xP1::diagonal(), anti = CurveOnP1xP1::antidiagonal();
    EXPECT_EQ(names(diagonal_preimage_components(qp({0, 0, 1}), delta)), (std::vector<std::string>{"x-y", "x+y"}));
    EXPECT_EQ(names(diagonal_preimage_components(qp({0, 0, 0, 1}), delta)), (std::vector<std::string>{"x-y", "x^2+x*y+y^2"}));
    EXPECT_EQ(names(diagonal_preimage_components(qp({0, 0, 0, 1}), anti)), (std::vector<std::string>{"x+y", "x^2-x*y+y^2"}));
    EXPECT_THROW(diagonal_preimage_components(qp({0, 0, 0, 0, 0, 0, 0, 1}), curve({{0, 0}, {0, 1}})), ResourceError);
}

TEST(Components, ProductRecoversSubstitution) {
    const std::vector<QPoly> maps = {qp({0, 0, 1}), qp({0, 0, 0, 1}), qp({-2, 0, 1}), qp({-1, 0, 1}), qp({0, -3, 0, 1})};
    const std::vector<CurveOnP1xP1> curves = {CurveOnP1xP1::diagonal(), CurveOnP1xP1::antidiagonal(), curve({{-4, 0, 1}, {0}, {1}}),
                                              curve({{0, 1}, {1, 0}})};
    for (const auto& phi : maps)
        for (const auto& C : curves) {
            const auto comps = diagonal_preimage_components(phi, C);
            BiPoly prod = BiPoly::constant(1);
            for (const auto& c : comps) prod = prod * c.curve.form.pow(c.multiplicity);
            EXPECT_EQ(prod.normalized(), C.form.substitute(phi, phi).normalized()) << to_string(phi) << " " << C.str();
            for (const auto& c : comps) {
                EXPECT_TRUE(etale_over_infinity(c.curve, 1).etale()) << c.curve.str();
                EXPECT_TRUE(etale_over_infinity(c.curve, 2).etale()) << c.curve.str();
            }
        }
}

TEST(Etale, Examples) {
    EXPECT_TRUE(etale_over_infinity(CurveOnP1xP1::diagonal(), 1).etale());
    EXPECT_TRUE(etale_over_infinity(CurveOnP1xP1::antidiagonal(), 2).etale());
    const CurveOnP1xP1 c = curve({{0, 0, 1}, {0, 1}, {1}});
    const EtaleReport r = etale_over_infinity(c, 1);
    EXPECT_TRUE(r.etale());
    EXPECT_EQ(r.unramified_places, 2);
    // y = x^2: one unramified place over x = infinity; two branches over y = infinity glued into a cusp-free ramified point
    const CurveOnP1xP1 parab = curve({{0, -1}, {0}, {1}});
    EXPECT_TRUE(etale_over_infinity(parab, 1).etale());
    EXPECT_EQ(etale_over_infinity(parab, 2).status, EtaleStatus::ramified);
    // y^2 = x^3 + 1: over x = infinity a single place with ramification 2
    EXPECT_EQ(etale_over_infinity(curve({{-1, 0, 1}, {0}, {0}, {-1}}), 1).status, EtaleStatus::ramified);
    EXPECT_THROW(etale_over_infinity(curve({{-2}, {0}, {1}}), 1), PreconditionError);
}

TEST(Genus, Examples) {
    EXPECT_EQ(genus_lower_bound(2, 0, 2).euler_bound, -2);
    EXPECT_TRUE(genus_lower_bound(2, 0, 2).admits_genus(0));
    for (long d = 1; d <= 6; ++d) EXPECT_GT(genus_lower_bound(2, 1, d).euler_bound, 0);
    EXPECT_EQ(genus_lower_bound(2, 0, 3).euler_bound, -1);
    EXPECT_FALSE(genus_lower_bound(2, 0, 3).admits_genus(0));
    EXPECT_EQ(genus_lower_bound(3, 0, 2, true).euler_bound, -4);
    EXPECT_THROW(genus_lower_bound(1, 0, 1), PreconditionError);
}

TEST(Genus, Monotone) {
    for (long n = 2; n <= 5; ++n)
        for (long g = 0; g <= 3; ++g)
            for (long d = 1; d <= 5; ++d)
                for (bool v : {false, true}) {
                    const long e = genus_lower_bound(n, g, d, v).euler_bound;
                    EXPECT_LE(e, genus_lower_bound(n + 1, g, d, v).euler_bound + (g == 0 ? 2 : 0));
                    EXPECT_LT(e, genus_lower_bound(n, g + 1, d, v).euler_bound);
                    EXPECT_LE(e, genus_lower_bound(n, g, d + 1, v).euler_bound);
                }
}

TEST(InfinitePoints, Examples) {
    EXPECT_EQ(infinite_points_test(CurveOnP1xP1::antidiagonal()).verdict, Verdict::yes);
    EXPECT_EQ(infinite_points_test(curve({{0, 0, 1}, {0, 1}, {1}})).verdict, Verdict::no);
    EXPECT_EQ(infinite_points_test(curve({{0, 0, 1}, {0, -1}, {1}})).verdict, Verdict::no);
    const PointsVerdict circle = infinite_points_test(curve({{-4, 0, 1}, {0}, {1}}));
    EXPECT_EQ(circle.verdict, Verdict::yes);
    EXPECT_EQ(*circle.genus, 0);
    // x^2 + y^2 = 3: the only rational point is the node at (inf, inf), whose tangents are conjugate
    EXPECT_EQ(infinite_points_test(curve({{-3, 0, 1}, {0}, {1}})).verdict, Verdict::no);
    // 2 x^2 + y^2 = 1 through (0, 1)
    EXPECT_EQ(infinite_points_test(curve({{-1, 0, 1}, {0}, {2}})).verdict, Verdict::yes);
    // y^2 = x^4 + 1 type (genus 1) and y^2 = x^5 - x + 1 type (genus 2) in bidegree (4,2) and (5,2)
    EXPECT_EQ(infinite_points_test(curve({{-1, 0, 1}, {0}, {0}, {0}, {-1}})).verdict, Verdict::unknown);
    EXPECT_EQ(infinite_points_test(curve({{-1, 0, 1}, {1}, {0}, {0}, {0}, {-1}})).verdict, Verdict::no);
    // x y^2 = x^2 + 1: w^2 = 4x(x^2 + 1), genus 1
    const PointsVerdict e = infinite_points_test(curve({{-1}, {0, 0, 1}, {-1}}));
    EXPECT_EQ(e.verdict, Verdict::unknown);
    EXPECT_EQ(*e.genus, 1);
}

TEST(RationalPoints, GeometricallyReducibleCurve) {
    // x^2 + xy + y^2 = 0: only (0, 0) and (inf, inf)
    const auto pts = rational_points_geometrically_reducible(curve({{0, 0, 1}, {0, 1}, {1}}));
    EXPECT_EQ(pts, (std::vector<PointPair>{{pt(0), pt(0)}, {inf, inf}}));
    const auto viaSearch = rational_points_search(curve({{0, 0, 1}, {0, 1}, {1}}), 30);
    EXPECT_EQ(viaSearch.size(), 2u);
}

TEST(Sigma, SquaringMap) {
    const SigmaLedger L = sigma_recursion({qp({0, 0, 1})}, 6);
    ASSERT_TRUE(L.terminated);
    EXPECT_FALSE(L.incomplete);
    ASSERT_EQ(L.levels.size(), 3u);
    EXPECT_EQ(L.levels[1].size(), 1u);
    EXPECT_EQ(L.levels[1][0], CurveOnP1xP1::antidiagonal());
    EXPECT_TRUE(L.levels[2].empty());
    EXPECT_EQ(*L.termination_level, 2u);
    EXPECT_EQ(L.omega().size(), 2u);
}

TEST(Sigma, SquareAndCube) {
    const SigmaLedger L = sigma_recursion({qp({0, 0, 1}), qp({0, 0, 0, 1})}, 6, {kDefaultFactorCap, 20, 4});
    ASSERT_TRUE(L.terminated);
    const auto omega = L.omega();
    EXPECT_EQ(omega.size(), 2u);
    EXPECT_TRUE(std::find(omega.begin(), omega.end(), CurveOnP1xP1::antidiagonal()) != omega.end());
    EXPECT_TRUE(L.levels[2].empty());
    for (const auto& g : L.generated) {
        EXPECT_TRUE(g.etale_x.etale() && g.etale_y.etale()) << g.curve.str();
        EXPECT_LE(g.curve.deg_x(), 2);
        EXPECT_LE(g.curve.deg_y(), 2);
    }
    EXPECT_TRUE(L.unknown_log.empty());
    // T: (0, 0) and (inf, inf) are on the diagonal, so nothing is left
    EXPECT_TRUE(L.T.empty());
}

TEST(Sigma, Chebyshev) {
    const SigmaLedger L = sigma_recursion({qp({-2, 0, 1})}, 4);
    ASSERT_GE(L.levels.size(), 3u);
    EXPECT_EQ(L.levels[1][0], CurveOnP1xP1::antidiagonal());
    EXPECT_EQ(L.levels[2][0], curve({{-4, 0, 1}, {0}, {1}}));
    ASSERT_TRUE(L.terminated);
    EXPECT_EQ(*L.termination_level, 3u);
    for (const auto& g : L.generated) EXPECT_TRUE(g.etale_x.etale() && g.etale_y.etale()) << g.curve.str();
    for (const auto& c : L.omega()) {
        EXPECT_LE(c.deg_x(), 2);
        EXPECT_LE(c.deg_y(), 2);
    }
}

TEST(Sigma, RejectsDecomposableMaps) {
    EXPECT_THROW(sigma_recursion({qp({0, 0, 0, 0, 1})}, 3), PreconditionError);
}

TEST(Sigma, CollisionsLieInZ) {
    const std::vector<QPoly> maps = {qp({0, 0, 1}), qp({0, 0, 0, 1})};
    const SigmaLedger L = sigma_recursion(maps, 6);
    std::vector<RatMapP1> fs;
    for (const auto& m : maps) fs.push_back(RatMapP1::from_polynomial(m));
    std::vector<PointP1> pts;
    for (long b = 1; b <= 50; ++b)
        for (long a = -50; a <= 50; ++a)
            if (std::gcd(a, b) == 1) pts.emplace_back(a, b);
    pts.push_back(inf);
    std::size_t collisions = 0;
    for (unsigned len = 1; len <= 5; ++len)
        for (unsigned word = 0; word < (1u << len); ++word) {
            std::unordered_map<PointP1, std::vector<std::size_t>, PointP1Hash> groups;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                PointP1 x = pts[i];
                for (unsigned k = 0; k < len; ++k) x = fs[(word >> k) & 1](x);
                groups[x].push_back(i);
            }
            for (const auto& [img, idx] : groups)
                for (std::size_t u = 0; u < idx.size(); ++u)
                    for (std::size_t v = u + 1; v < idx.size(); ++v) {
                        ++collisions;
                        EXPECT_TRUE(L.in_Z0(pts[idx[u]], pts[idx[v]])) << pts[idx[u]].str() << " " << pts[idx[v]].str();
                    }
        }
    EXPECT_GT(collisions, 0u);
}

TEST(ExceptionalSet, MembershipAndClosure) {
    const std::vector<QPoly> maps = {qp({0, 0, 1}), qp({0, 0, 0, 1})};
    const SigmaLedger L = sigma_recursion(maps, 6);
    std::vector<RatMapP1> fs;
    for (const auto& m : maps) fs.push_back(RatMapP1::from_polynomial(m));
    SemigroupConstants s = semigroup_constants(fs, surrogate_C(fs), BigRat(0));
    EXPECT_THROW(exceptional_set(L, s), PreconditionError);
    attach_ledger_bounds(s, L, 1e-6);
    const ExceptionalSet Z = exceptional_set(L, s);
    EXPECT_TRUE(Z.contains(pt(123456789), pt(-123456789)));
    EXPECT_TRUE(Z.contains(pt(987654321, 1234567), pt(987654321, 1234567)));
    EXPECT_FALSE(Z.contains(pt(123456789), pt(987654321)));
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<long> coord(-200, 200);
    std::vector<PointPair> samples;
    for (int i = 0; i < 2000; ++i) {
        long a = coord(rng), b = coord(rng), c = coord(rng), d = coord(rng);
        if ((a == 0 && b == 0) || (c == 0 && d == 0)) continue;
        samples.push_back({PointP1(a, b), PointP1(c, d)});
        samples.push_back({PointP1(a, b), PointP1(-a, b)});
    }
    EXPECT_TRUE(closure_violations(Z, maps, samples).empty());
}
