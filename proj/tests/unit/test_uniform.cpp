#include <gtest/gtest.h>

#include <random>

#include "orbitcancel/uniform/cancellation.hpp"

using namespace orbitcancel;

namespace {

TruncSeries series(std::vector<BigRat> c, unsigned long p, long T = kDefaultTruncation) {
    return TruncSeries::from_rationals(c, p, T);
}

RatMapP1 poly_map(std::vector<long> c) {
    std::vector<BigRat> q(c.begin(), c.end());
    return RatMapP1::from_polynomial(QPoly(q));
}

/// Integral germ with G(0) = 0 and v(a1) = v (a1 = 0 when v < 0), random higher coefficients.
TruncSeries random_germ(std::mt19937_64& rng, unsigned long p, long v, long T, long lowest = 2) {
    std::uniform_int_distribution<long> coef(-1000, 1000), unit(1, static_cast<long>(p) - 1);
    std::vector<BigRat> c(static_cast<std::size_t>(T + 1), BigRat(0));
    if (v >= 0) c[1] = BigRat(p_power(p, v) * unit(rng));
    for (long k = lowest; k <= T; ++k) c[static_cast<std::size_t>(k)] = coef(rng);
    if (v < 0) c[static_cast<std::size_t>(lowest)] = BigRat(unit(rng));
    return series(c, p, T);
}

}  // namespace

TEST(Radius, Examples) {
    Radius a = radius_rf(series({0, 3, 1}, 3));
    EXPECT_EQ(a.r, PPower::of(3, 0));
    EXPECT_TRUE(a.rigorous);
    EXPECT_EQ(radius_rf(series({0, 3, 27}, 3)).r, PPower::of(3, 1));
    EXPECT_EQ(radius_rf(series({0, 1, BigRat(1, 3)}, 3)).r, PPower::of(3, BigRat(-1, 2)));
    TruncSeries t = series({0, 0, 1}, 3, 4);
    t.set_tail(TailKind::integral);
    EXPECT_TRUE(radius_rf(t).rigorous);
    t.set_tail(TailKind::unknown);
    EXPECT_FALSE(radius_rf(t).rigorous);
    EXPECT_THROW(radius_rf(series({5}, 5)), PreconditionError);
}

TEST(Contraction, Examples) {
    const PPower third = PPower::of(3, -1);
    EXPECT_EQ(contraction_bound(series({0, 3, 1}, 3), third), PPower::of(3, -2));
    // |G(3)| = |18|_3 = 1/9
    EXPECT_EQ(*Padic::from_int(3 * 3 + 3 * 3, 3).abs(), PPower::of(3, -2));
    EXPECT_EQ(contraction_bound(series({0, 25}, 5), PPower::of(5, -1)), PPower::of(5, -3));
    EXPECT_EQ(contraction_bound(series({0, 0, 1}, 7), PPower::of(7, -1)), PPower::of(7, -2));
    EXPECT_THROW(contraction_bound(series({0, 3, 27}, 3), PPower::of(3, 1)), PreconditionError);
    EXPECT_THROW(contraction_bound(series({0, 1, 1}, 3), third), PreconditionError);
}

TEST(FixedPoint, WorkedExamples) {
    Padic z = germ_fixed_point(series({5, 0, 1}, 5));
    EXPECT_EQ(mod(z.lift(), BigInt(125)), 30);
    EXPECT_TRUE(germ_fixed_point(series({0, 0, 1}, 5)).is_zero());
    Padic w = germ_fixed_point(series({3, 3}, 3));
    EXPECT_EQ(*w.reconstruct_rational(), BigRat(-3, 2));
    EXPECT_THROW(germ_fixed_point(series({1, 0, 1}, 5)), PreconditionError);
    EXPECT_THROW(germ_fixed_point(series({5, 1}, 5)), PreconditionError);
}

TEST(FixedPoint, RandomGermsContractToFixedPoint) {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const unsigned long p = std::vector<unsigned long>{3, 5, 7}[i % 3];
        std::uniform_int_distribution<long> coef(-500, 500);
        std::vector<BigRat> c(9);
        for (auto& x : c) x = coef(rng);
        c[0] *= static_cast<long>(p);
        c[1] *= static_cast<long>(p);
        TruncSeries G = series(c, p, 8);
        Padic z0 = germ_fixed_point(G);
        EXPECT_GE(z0.valuation(), 1);
        Padic acc = Padic::exact_zero(p);
        for (auto it = G.coeffs().rbegin(); it != G.coeffs().rend(); ++it) acc = acc * z0 + *it;
        EXPECT_TRUE((acc - z0).is_zero());
        EXPECT_GE((acc - z0).precision(), 64);
    }
}

TEST(Koenigs, Examples) {
    UniformizationResult lin = koenigs(series({0, 3}, 3, 12));
    EXPECT_EQ(lin.u.str(), "(1)z^1");
    UniformizationResult q = koenigs(series({0, 3, 1}, 3, 12));
    EXPECT_EQ(*q.u[2].reconstruct_rational(), BigRat(-1, 6));
    EXPECT_TRUE(q.residual_vanishes);
    UniformizationResult c = koenigs(series({0, 3, 0, 1}, 3, 16));
    EXPECT_TRUE(c.residual_vanishes);
    EXPECT_THROW(koenigs(series({0, 0, 1}, 3)), PreconditionError);
    EXPECT_THROW(koenigs(series({0, 1, 1}, 3)), PreconditionError);
}

TEST(Koenigs, RandomResidualsVanish) {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 50; ++i) {
        const unsigned long p = std::vector<unsigned long>{3, 5, 7}[i % 3];
        TruncSeries G = random_germ(rng, p, 1 + i % 2, kDefaultTruncation);
        UniformizationResult r = koenigs(G);
        EXPECT_TRUE(r.residual_vanishes) << G.str();
        EXPECT_GE(r.residual_precision, G.min_precision());
        EXPECT_TRUE(r.u[1].agrees_with(Padic::from_int(1, p)));
    }
}

TEST(Koenigs, LimitConstructionConverges) {
    TruncSeries G = series({0, 3, 1, 2}, 3, 6);
    UniformizationResult r = koenigs(G);
    long previous = -1000;
    for (unsigned n : {2u, 4u, 8u}) {
        TruncSeries lim = koenigs_limit(G, n);
        long agree = 1000;
        for (std::size_t k = 1; k <= 6; ++k) agree = std::min(agree, (lim[k] - r.u[k]).valuation());
        EXPECT_GT(agree, previous);
        previous = agree;
    }
}

TEST(Boettcher, Examples) {
    UniformizationResult z3 = boettcher(series({0, 0, 0, 1}, 5, 12));
    EXPECT_EQ(z3.u.str(), "(1)z^1");
    EXPECT_EQ(z3.degree, 3);
    UniformizationResult cz = boettcher(series({0, 0, 7}, 5, 12));
    EXPECT_EQ(cz.u.str(), "(1)z^1");
    ASSERT_TRUE(cz.scale);
    EXPECT_TRUE(cz.scale->agrees_with(Padic::from_int(7, 5)));  // u = 7z
    UniformizationResult zz = boettcher(series({0, 0, 1, 1}, 5, 12));
    EXPECT_EQ(*zz.u[2].reconstruct_rational(), BigRat(1, 2));
    EXPECT_TRUE(zz.residual_vanishes);
    EXPECT_THROW(boettcher(series({0, 5, 1}, 5)), PreconditionError);
}

TEST(Boettcher, ExtensionDegreeBound) {
    // 2 is not a square mod 5: b = sqrt(2) needs a quadratic extension
    UniformizationResult r = boettcher(series({0, 0, 0, 2}, 5, 12));
    EXPECT_FALSE(r.scale);
    EXPECT_EQ(r.extension_degree, 2);
    UniformizationResult s = boettcher(series({0, 0, 0, 4}, 5, 12));
    ASSERT_TRUE(s.scale);
    EXPECT_TRUE((s.scale->pow(2) - Padic::from_int(4, 5)).is_zero());
}

TEST(Boettcher, RandomResidualsVanishAndSolutionIsRigid) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 50; ++i) {
        const unsigned long p = std::vector<unsigned long>{3, 5, 7}[i % 3];
        const long d = 2 + i % 2;
        TruncSeries G = random_germ(rng, p, -1, kDefaultTruncation, d);
        UniformizationResult r = boettcher(G);
        EXPECT_TRUE(r.residual_vanishes) << G.str();
        EXPECT_GE(r.residual_precision, G.min_precision());
        const Padic c = r.multiplier;
        // any other normalised solution would differ at some determined order and break the residual
        const TruncSeries lift = detail::promote(G, 4000);
        TruncSeries w = r.u;
        const std::size_t k = 2 + static_cast<std::size_t>(i) % static_cast<std::size_t>(r.determined_order - 1);
        const std::size_t e = k + static_cast<std::size_t>(d) - 1;
        w[k] = w[k] + Padic::from_int(1, p, 4000);
        const TruncSeries res = series_compose(w, lift) - c * w.pow(static_cast<unsigned>(d));
        EXPECT_FALSE(res[e].is_zero()) << "perturbation at " << k << " went unnoticed";
    }
}

TEST(RootOfUnity, Examples) {
    EXPECT_EQ(root_of_unity_exponent(5, 1, 2), 2);
    EXPECT_EQ(root_of_unity_exponent(3, 1, 3), 0);
    EXPECT_EQ(root_of_unity_exponent(7, 1, 5), 0);
    // degree 2 over Q_3 admits 8th roots of unity (3^2 - 1) and 3rd roots ((3-1) 3^0 <= 2)
    EXPECT_EQ(root_of_unity_exponent(3, 2, 2), 3);
    EXPECT_EQ(root_of_unity_exponent(3, 2, 3), 1);
}

TEST(Cancellation, SquaringMapCertificate) {
    CancellationCertificate c = cancellation_bound(poly_map({0, 0, 1}), 3);
    EXPECT_EQ(c.N0, 1u);
    ASSERT_EQ(c.disks.size(), 3u);
    EXPECT_EQ(c.disks[0].kind, DiskCase::boettcher);
    EXPECT_EQ(c.disks[1].kind, DiskCase::bijective);
    EXPECT_EQ(c.disks[2].kind, DiskCase::boettcher);
    EXPECT_EQ(c.disks[0].lprime, 1);
    EXPECT_GE(c.N, 1u);
    EXPECT_EQ(c.N, c.N0 + c.N0 * 1);
    EXPECT_THROW(cancellation_bound(poly_map({1, 1}), 3), PreconditionError);
    EXPECT_THROW(cancellation_bound(RatMapP1({0, 0, 3}, {1, 0, 0}), 3), PreconditionError);
}

TEST(Cancellation, QuadraticMapCertificate) {
    const RatMapP1 f = poly_map({-1, 0, 1});
    CancellationCertificate c = cancellation_bound(f, 5);
    EXPECT_EQ(c.N0, 2u);
    long worst = 0;
    for (const auto& d : c.disks) {
        EXPECT_EQ(reduce_mod_p(f, 5).apply(d.xi, c.N0), d.xi);
        worst = std::max(worst, d.l + d.lprime);
    }
    EXPECT_EQ(c.N, c.N0 + c.N0 * static_cast<unsigned long>(worst));
    EXPECT_GE(c.N, 2u);
}

TEST(Verify, Examples) {
    VerificationReport sq = verify_cancellation(poly_map({0, 0, 1}), 1, 100, 8);
    EXPECT_EQ(sq.violations, 0);
    EXPECT_EQ(sq.deepest, 1u);
    const RatMapP1 f = poly_map({-1, 0, 1});
    VerificationReport one = verify_cancellation(f, 1, 10, 8);
    EXPECT_GT(one.violations, 0);
    bool found = false;
    for (const auto& w : one.violation_witnesses)
        found = found || (w.a == PointP1(1, 5) && w.b == PointP1(7, 5) && w.depth == 2);
    EXPECT_TRUE(found);
    EXPECT_EQ(collision_depth(f, PointP1(1, 5), PointP1(7, 5), 8), 2u);
    VerificationReport two = verify_cancellation(f, 2, 10, 8);
    EXPECT_EQ(two.violations, 0);
}

TEST(Verify, CertificatesAreSoundOnCorpus) {
    const std::vector<RatMapP1> maps = {poly_map({0, 0, 1}), poly_map({-1, 0, 1}), poly_map({-2, 0, 1}), poly_map({1, 0, 1}),
                                        RatMapP1::from_rational_function(QPoly({1, 0, 2}), QPoly({-3, 1}))};
    for (const auto& f : maps) {
        CancellationCertificate c = cancellation_bound(f, auto_prime(f));
        VerificationReport r = verify_cancellation(f, c.N, 30, 6);
        EXPECT_EQ(r.violations, 0) << f.str() << " N=" << c.N;
    }
}

TEST(Verify, FunctorialityUnderIteration) {
    const RatMapP1 f = poly_map({-1, 0, 1});
    const RatMapP1 f2 = f.iterate(2);
    CancellationCertificate a = cancellation_bound(f, 5), b = cancellation_bound(f2, 7);
    EXPECT_EQ(verify_cancellation(f, a.N, 20, 6).violations, 0);
    EXPECT_EQ(verify_cancellation(f2, b.N, 20, 3).violations, 0);
}
