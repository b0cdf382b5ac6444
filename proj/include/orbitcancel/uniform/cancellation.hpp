#pragma once

#include <algorithm>
#include <map>
#include <thread>
#include <unordered_map>
#include <vector>

#include "orbitcancel/uniform/uniformize.hpp"

namespace orbitcancel {

struct DiskCertificate {
    std::size_t xi = 0;
    DiskCase kind = DiskCase::bijective;
    std::optional<Padic> z0;
    Padic multiplier;
    long local_degree = 1;
    long extension_degree = 1;
    long l = 0;
    long lprime = 0;
    PPower rho;
    bool rigorous = true;
};

/// N = N0 + N0 * max(l + l') with the data each disk contributed.
struct CancellationCertificate {
    unsigned long p = 0;
    unsigned long N0 = 1;
    long truncation = kDefaultTruncation;
    long precision = kDefaultPadicPrecision;
    std::vector<DiskCertificate> disks;
    unsigned long N = 0;
    bool rigorous = true;
};

/// Steps of the contraction estimate needed to push the disk |z| <= 1/p inside |z| <= rho.
inline long disk_entry_count(const TruncSeries& G, const PPower& rho, long cap = 100000) {
    const Radius radius = radius_rf(G);
    PPower r = PPower::of(G.prime(), BigRat(-1));
    long steps = 0;
    while (!(r <= rho)) {
        if (++steps > cap) throw ResourceError("disk-entry count exceeds the iteration cap");
        r = contraction_bound(G, r, radius);
    }
    return steps;
}

inline DiskCertificate certify_disk(const RatMapP1& f, unsigned long p, std::size_t xi, unsigned long N0, long T, long M) {
    DiskCertificate out;
    out.xi = xi;
    const GermAtResidueDisk base = germ_at_residue_fixed_point(f, p, xi, N0, T, M);
    out.multiplier = base.series[1];
    if (base.series[1].is_unit()) {
        out.kind = DiskCase::bijective;
        out.rho = PPower::of(p, 0);
        return out;
    }
    const Padic z0 = germ_fixed_point(base);
    out.z0 = z0;
    const GermAtResidueDisk shifted = germ_at_residue_fixed_point(f, p, xi, N0, T, M, z0);
    const TruncSeries& G = shifted.series;
    if (!G[0].is_zero()) throw ResourceError("precision exhausted while recentring at the fixed point; raise M");
    out.multiplier = G[1];
    const UniformizationResult u = G[1].is_zero() ? boettcher(G) : koenigs(G);
    out.kind = u.kind;
    out.local_degree = u.degree;
    out.extension_degree = u.extension_degree;
    out.rho = u.rho;
    out.l = disk_entry_count(G, u.rho);
    if (u.kind == DiskCase::boettcher) out.lprime = root_of_unity_exponent(p, u.extension_degree, u.degree);
    out.rigorous = u.rho_rigorous && u.residual_vanishes && u.radius.rigorous;
    return out;
}

inline CancellationCertificate cancellation_bound(const RatMapP1& f, unsigned long p, long T = kDefaultTruncation,
                                                  long M = kDefaultPadicPrecision, unsigned workers = 1) {
    if (f.degree() < 2) throw PreconditionError("cancellation bound needs a map of degree at least 2");
    const FpMapTable table = reduce_mod_p(f, p);
    CancellationCertificate c;
    c.p = p;
    c.N0 = table.N0;
    c.truncation = T;
    c.precision = M;
    const auto fixed = table.period_fixed_points();
    c.disks.resize(fixed.size());
    std::vector<std::exception_ptr> errors(fixed.size());
    auto work = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < fixed.size(); i += stride) {
            try {
                c.disks[i] = certify_disk(f, p, fixed[i], table.N0, T, M);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(workers, fixed.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work, w, n);
    work(0, n);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    long worst = 0;
    for (const auto& d : c.disks) {
        worst = std::max(worst, d.l + d.lprime);
        c.rigorous = c.rigorous && d.rigorous;
    }
    c.N = c.N0 + c.N0 * static_cast<unsigned long>(worst);
    return c;
}

/// A pair of points first identified by f at `depth`; `pairs` counts all pairs merged in that event.
struct CollisionEvent {
    unsigned depth = 0;
    PointP1 a, b;
    BigInt pairs = 0;
};

struct VerificationReport {
    unsigned long N = 0;
    long height_bound = 0;
    unsigned max_depth = 0;
    std::size_t points = 0;
    BigInt colliding_pairs = 0;
    BigInt violations = 0;
    unsigned deepest = 0;
    std::map<unsigned, BigInt> pairs_by_depth;
    std::vector<CollisionEvent> violation_witnesses;
    std::vector<CollisionEvent> deepest_witnesses;
    static constexpr std::size_t kWitnessCap = 64;
};

/// Points of P^1(Q) of multiplicative height at most H.
inline std::vector<PointP1> points_of_height_at_most(long H) {
    std::vector<PointP1> out;
    if (H < 1) return out;
    for (long b = 1; b <= H; ++b)
        for (long a = -H; a <= H; ++a)
            if (std::gcd(a, b) == 1) out.emplace_back(a, b);
    out.push_back(PointP1::infinity());
    return out;
}

/// Height first, then positive before negative, then the value.
inline bool simpler(const PointP1& x, const PointP1& y) {
    const BigInt hx = std::max(BigInt(::abs(x.a())), x.b()), hy = std::max(BigInt(::abs(y.a())), y.b());
    if (hx != hy) return hx < hy;
    const bool nx = x.a() < 0, ny = y.a() < 0;
    if (nx != ny) return !nx;
    return x < y;
}

/// Least n <= maxDepth with f^n(a) = f^n(b).
inline std::optional<unsigned> collision_depth(const RatMapP1& f, PointP1 a, PointP1 b, unsigned maxDepth) {
    for (unsigned n = 0; n <= maxDepth; ++n) {
        if (a == b) return n;
        a = f(a);
        b = f(b);
    }
    return std::nullopt;
}

/// Bounded search for pairs a != b of height <= heightBound with f^n(a) = f^n(b) for some n <= maxDepth
/// but f^N(a) != f^N(b). Points with equal images are merged into classes depth by depth, so each
/// distinct value is iterated once.
inline VerificationReport verify_cancellation(const RatMapP1& f, unsigned long N, long heightBound, unsigned maxDepth,
                                              unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    VerificationReport rep;
    rep.N = N;
    rep.height_bound = heightBound;
    rep.max_depth = maxDepth;
    const auto pts = points_of_height_at_most(heightBound);
    rep.points = pts.size();

    struct Class {
        PointP1 value, rep;
        std::size_t size;
    };
    std::vector<Class> classes;
    classes.reserve(pts.size());
    for (const auto& x : pts) classes.push_back({x, x, 1});

    for (unsigned depth = 1; depth <= maxDepth && classes.size() > 1; ++depth) {
        std::vector<PointP1> images(classes.size());
        auto work = [&](std::size_t start, std::size_t stride) {
            for (std::size_t i = start; i < classes.size(); i += stride) images[i] = f(classes[i].value);
        };
        const std::size_t n = std::min<std::size_t>(workers, classes.size());
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work, w, n);
        work(0, n);
        for (auto& t : pool) t.join();

        std::unordered_map<PointP1, std::vector<std::size_t>, PointP1Hash> groups;
        std::vector<PointP1> order;
        for (std::size_t i = 0; i < classes.size(); ++i) {
            auto [it, fresh] = groups.try_emplace(images[i]);
            if (fresh) order.push_back(images[i]);
            it->second.push_back(i);
        }
        std::vector<Class> next;
        next.reserve(order.size());
        for (const auto& img : order) {
            auto& members = groups[img];
            std::sort(members.begin(), members.end(),
                      [&](std::size_t x, std::size_t y) { return simpler(classes[x].rep, classes[y].rep); });
            Class merged{img, classes[members[0]].rep, classes[members[0]].size};
            for (std::size_t k = 1; k < members.size(); ++k) {
                const Class& c = classes[members[k]];
                CollisionEvent ev{depth, merged.rep, c.rep, BigInt(static_cast<unsigned long>(merged.size)) * c.size};
                rep.colliding_pairs += ev.pairs;
                rep.pairs_by_depth[depth] += ev.pairs;
                if (depth > N) {
                    rep.violations += ev.pairs;
                    if (rep.violation_witnesses.size() < VerificationReport::kWitnessCap) rep.violation_witnesses.push_back(ev);
                }
                if (depth > rep.deepest) {
                    rep.deepest = depth;
                    rep.deepest_witnesses.clear();
                }
                if (depth == rep.deepest && rep.deepest_witnesses.size() < VerificationReport::kWitnessCap)
                    rep.deepest_witnesses.push_back(ev);
                merged.size += c.size;
            }
            next.push_back(std::move(merged));
        }
        classes = std::move(next);
    }
    return rep;
}

}  // namespace orbitcancel
