#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "orbitcancel/curves/curve.hpp"
#include "orbitcancel/curves/decompose.hpp"
#include "orbitcancel/heights/heights.hpp"

namespace orbitcancel {

using PointPair = std::pair<PointP1, PointP1>;

/// A component of (phi_j x phi_j)^{-1}(parent) met during the recursion.
struct GeneratedComponent {
    CurveOnP1xP1 curve;
    std::size_t level = 0;  // level of the parent
    std::size_t parent = 0;
    std::size_t map = 0;
    unsigned multiplicity = 1;
    EtaleReport etale_x, etale_y;
    bool in_omega = false;
};

struct SigmaOptions {
    long degree_cap = kDefaultFactorCap;
    long search_bound = 20;
    unsigned workers = 1;
};

/// Levels Sigma_0 = {diagonal}, Sigma_1, ...: Sigma_{m+1} holds the components of preimages of Sigma_m
/// under some phi_j x phi_j that are new and carry infinitely many rational points.
struct SigmaLedger {
    std::vector<QPoly> maps;
    std::vector<std::vector<CurveOnP1xP1>> levels;
    bool terminated = false;
    std::optional<std::size_t> termination_level;
    bool incomplete = false;
    std::string incomplete_reason;
    std::vector<std::string> unknown_log;
    std::vector<GeneratedComponent> generated;
    /// Components outside Omega whose rational points feed T.
    std::vector<CurveOnP1xP1> finite_components;
    /// Rational points off Z0 mapped into Z0 by some phi_j x phi_j.
    std::vector<PointPair> T;
    /// True when T came partly from a bounded search rather than an exact enumeration.
    bool T_search_bounded = false;
    long search_bound = 0;

    std::vector<CurveOnP1xP1> omega() const {
        std::vector<CurveOnP1xP1> out;
        for (const auto& level : levels) out.insert(out.end(), level.begin(), level.end());
        return out;
    }
    bool in_Z0(const PointP1& a, const PointP1& b) const {
        for (const auto& level : levels)
            for (const auto& c : level)
                if (c.contains(a, b)) return true;
        return false;
    }
};

namespace detail {

struct PreimageTask {
    std::size_t parent, map;
    std::vector<CurveComponent> components;
    std::exception_ptr error;
};

}  // namespace detail

inline SigmaLedger sigma_recursion(const std::vector<QPoly>& maps, std::size_t maxLevel, const SigmaOptions& opt = {}) {
    if (maps.empty()) throw PreconditionError("need at least one map");
    for (const auto& phi : maps) {
        if (phi.degree() < 2) throw PreconditionError("maps must have degree at least 2");
        if (!poly_decompose(phi).indecomposable())
            throw PreconditionError(to_string(phi) + " is decomposable; recurse on its indecomposable factors instead");
    }
    SigmaLedger L;
    L.maps = maps;
    L.search_bound = opt.search_bound;
    CurveOnP1xP1 delta = CurveOnP1xP1::diagonal();
    delta.infinite_points = Verdict::yes;
    delta.verdict_reason = "the diagonal";
    delta.absolutely_irreducible = true;
    L.levels.push_back({delta});
    std::vector<CurveOnP1xP1> seen = {delta};

    for (std::size_t m = 0; m < maxLevel; ++m) {
        const auto& current = L.levels[m];
        std::vector<detail::PreimageTask> tasks;
        for (std::size_t i = 0; i < current.size(); ++i)
            for (std::size_t j = 0; j < maps.size(); ++j) tasks.push_back({i, j, {}, nullptr});
        auto work = [&](std::size_t start, std::size_t stride) {
            for (std::size_t t = start; t < tasks.size(); t += stride) {
                try {
                    tasks[t].components = diagonal_preimage_components(maps[tasks[t].map], current[tasks[t].parent], opt.degree_cap);
                } catch (...) {
                    tasks[t].error = std::current_exception();
                }
            }
        };
        const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(opt.workers, tasks.size()));
        std::vector<std::thread> pool;
        for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work, w, n);
        work(0, n);
        for (auto& th : pool) th.join();

        std::vector<CurveOnP1xP1> next;
        for (auto& task : tasks) {
            if (task.error) {
                try {
                    std::rethrow_exception(task.error);
                } catch (const ResourceError& e) {
                    L.incomplete = true;
                    L.incomplete_reason = e.what();
                    return L;
                }
            }
            for (auto& comp : task.components) {
                GeneratedComponent g;
                g.level = m;
                g.parent = task.parent;
                g.map = task.map;
                g.multiplicity = comp.multiplicity;
                g.etale_x = etale_over_infinity(comp.curve, 1);
                g.etale_y = etale_over_infinity(comp.curve, 2);
                CurveOnP1xP1 c = comp.curve;
                const auto known = std::find(L.finite_components.begin(), L.finite_components.end(), c);
                const auto inSeen = std::find(seen.begin(), seen.end(), c), inNext = std::find(next.begin(), next.end(), c);
                if (inSeen != seen.end() || inNext != next.end()) {
                    g.in_omega = true;
                    c = inSeen != seen.end() ? *inSeen : *inNext;
                } else if (known != L.finite_components.end()) {
                    c = *known;
                } else {
                    c.absolutely_irreducible = is_absolutely_irreducible(c.form);
                    const PointsVerdict v = infinite_points_test(c, opt.search_bound);
                    c.infinite_points = v.verdict;
                    c.verdict_reason = v.reason;
                    if (v.verdict == Verdict::yes) {
                        g.in_omega = true;
                        next.push_back(c);
                    } else {
                        if (v.verdict == Verdict::unknown) L.unknown_log.push_back(c.str() + ": " + v.reason + "; excluded");
                        L.finite_components.push_back(c);
                    }
                }
                g.curve = std::move(c);
                L.generated.push_back(std::move(g));
            }
        }
        for (const auto& c : next)
            if (c.deg_x() > 2 || c.deg_y() > 2)
                throw std::logic_error("curve " + c.str() + " with infinitely many rational points has a partial degree above 2");
        seen.insert(seen.end(), next.begin(), next.end());
        L.levels.push_back(std::move(next));
        if (L.levels.back().empty()) {
            L.terminated = true;
            L.termination_level = m + 1;
            break;
        }
    }
    if (!L.terminated) {
        L.incomplete = true;
        L.incomplete_reason = "no empty level up to " + std::to_string(maxLevel);
        return L;
    }
    std::set<PointPair> T;
    for (const auto& c : L.finite_components) {
        std::vector<PointPair> pts;
        if (c.absolutely_irreducible && !*c.absolutely_irreducible) {
            pts = rational_points_geometrically_reducible(c);
        } else {
            pts = rational_points_search(c, opt.search_bound);
            L.T_search_bounded = true;
        }
        for (const auto& p : pts)
            if (!L.in_Z0(p.first, p.second)) T.insert(p);
    }
    L.T.assign(T.begin(), T.end());
    return L;
}

/// Z = S u Z0 with S the pairs of height below the threshold 3 B0 + B1.
struct ExceptionalSet {
    std::vector<CurveOnP1xP1> Z0;
    std::vector<PointPair> T;
    double threshold = 0;
    /// exp(threshold) as a rational: (a, b) is in S iff H(a) H(b) is below it.
    BigRat height_bound;

    bool in_Z0(const PointP1& a, const PointP1& b) const {
        for (const auto& c : Z0)
            if (c.contains(a, b)) return true;
        return false;
    }
    bool in_S(const PointP1& a, const PointP1& b) const { return weil_height(a, b).argument < height_bound; }
    bool contains(const PointP1& a, const PointP1& b) const { return in_Z0(a, b) || in_S(a, b); }
};

/// Pair-level B0 (twice the largest point-level one) and B1 = max canonical height over T.
inline void attach_ledger_bounds(SemigroupConstants& s, const SigmaLedger& L, double tol) {
    double b0 = 0, b1 = 0;
    for (const auto& phi : L.maps) {
        const RatMapP1 f = RatMapP1::from_polynomial(phi);
        const HeightComparison hc = height_comparison_constants(f);
        b0 = std::max(b0, 2 * hc.B0());
        for (const auto& [a, b] : L.T) {
            const CanonicalHeightValue ha = canonical_height(f, a, tol, hc), hb = canonical_height(f, b, tol, hc);
            b1 = std::max(b1, ha.value + ha.error + hb.value + hb.error);
        }
    }
    s.B0 = b0;
    s.B1 = b1;
    s.threshold = 3 * b0 + b1;
}

inline ExceptionalSet exceptional_set(const SigmaLedger& L, const SemigroupConstants& s) {
    if (!s.threshold) throw PreconditionError("exceptional set needs B0 and B1; attach them to the constants first");
    ExceptionalSet Z;
    Z.Z0 = L.omega();
    Z.T = L.T;
    Z.threshold = *s.threshold;
    Z.height_bound = rat_from_double(std::exp(*s.threshold));
    return Z;
}

/// Sampled pairs where phi_j x phi_j lands in Z although the pair itself is outside Z.
inline std::vector<PointPair> closure_violations(const ExceptionalSet& Z, const std::vector<QPoly>& maps, const std::vector<PointPair>& samples) {
    std::vector<PointPair> bad;
    std::vector<RatMapP1> fs;
    for (const auto& phi : maps) fs.push_back(RatMapP1::from_polynomial(phi));
    for (const auto& [a, b] : samples) {
        if (Z.contains(a, b)) continue;
        for (const auto& f : fs)
            if (Z.contains(f(a), f(b))) {
                bad.emplace_back(a, b);
                break;
            }
    }
    return bad;
}

}  // namespace orbitcancel
