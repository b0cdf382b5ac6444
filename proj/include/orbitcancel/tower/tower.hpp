#pragma once

#include <optional>
#include <set>
#include <thread>
#include <vector>

#include "orbitcancel/dynamics/reduction.hpp"

namespace orbitcancel {

using PointSet = std::set<PointP1>;

struct InvarianceResult {
    bool invariant = true;
    /// A point of Y whose image leaves Y.
    std::optional<PointP1> witness;
};

inline InvarianceResult invariance_check(const RatMapP1& f, const PointSet& Y) {
    if (Y.empty()) throw PreconditionError("invariant set must be nonempty");
    for (const auto& y : Y)
        if (!Y.count(f(y))) return {false, y};
    return {};
}

/// Rational points of f^{-s}(Y) for s = 0..levels.size()-1.
struct TowerState {
    RatMapP1 f;
    PointSet Y;
    std::vector<PointSet> levels;
    /// First s with level(s+1) = level(s). Equality of two consecutive levels forces every later
    /// level to coincide as well, since each level is the preimage of the one before.
    std::optional<unsigned> s0;
    bool stable_for_range = false;
};

namespace detail {

inline std::vector<std::vector<PointP1>> preimages_of_all(const RatMapP1& f, const std::vector<PointP1>& frontier, unsigned workers) {
    std::vector<std::vector<PointP1>> out(frontier.size());
    auto work = [&](std::size_t start, std::size_t stride) {
        for (std::size_t i = start; i < frontier.size(); i += stride) out[i] = rational_preimages(f, frontier[i]);
    };
    const std::size_t n = std::max<std::size_t>(1, std::min<std::size_t>(workers, frontier.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work, w, n);
    work(0, n);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace detail

/// Levels 0..sMax, breadth first: only points new at level s need their preimages taken for level s+1.
inline TowerState tower_compute(const RatMapP1& f, const PointSet& Y, unsigned sMax, unsigned workers = 1) {
    const InvarianceResult inv = invariance_check(f, Y);
    if (!inv.invariant) throw PreconditionError("Y is not invariant: " + inv.witness->str() + " maps to " + f(*inv.witness).str());
    TowerState st{f, Y, {Y}, std::nullopt, false};
    std::vector<PointP1> frontier(Y.begin(), Y.end());
    for (unsigned s = 0; s < sMax; ++s) {
        PointSet next = st.levels.back();
        std::vector<PointP1> fresh;
        for (const auto& batch : detail::preimages_of_all(f, frontier, workers))
            for (const auto& x : batch)
                if (next.insert(x).second) fresh.push_back(x);
        if (!st.s0 && fresh.empty()) {
            st.s0 = s;
            st.stable_for_range = true;
        }
        st.levels.push_back(std::move(next));
        frontier = std::move(fresh);
    }
    return st;
}

/// Nesting, f(level s+1) inside level s, and f^s(level s) inside Y, all exact.
inline bool tower_is_consistent(const TowerState& st) {
    for (std::size_t s = 0; s < st.levels.size(); ++s) {
        for (const auto& x : st.levels[s]) {
            if (!st.Y.count(iterate_point(st.f, x, s))) return false;
            if (s + 1 < st.levels.size() && !st.levels[s + 1].count(x)) return false;
            if (s > 0 && !st.levels[s - 1].count(st.f(x))) return false;
        }
    }
    return true;
}

struct SeparationReport {
    unsigned long p = 0;
    /// #P^1(F_p): the number of residue classes rational points can be separated into.
    unsigned long t = 0;
    bool Y_separated = true;
    std::vector<std::size_t> classes_per_level;
    bool within_bound = true;
};

inline SeparationReport reduction_separation_bound(const RatMapP1& f, const PointSet& Y, unsigned long p,
                                                   const std::vector<PointSet>& levels = {}) {
    if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
    if (!has_good_reduction(f, p)) throw PreconditionError("f has bad reduction at " + std::to_string(p));
    SeparationReport r;
    r.p = p;
    r.t = p + 1;
    std::set<std::size_t> residues;
    for (const auto& y : Y) residues.insert(reduce_point(y, p));
    r.Y_separated = residues.size() == Y.size();
    for (const auto& level : levels) {
        std::set<std::size_t> occupied;
        for (const auto& x : level) occupied.insert(reduce_point(x, p));
        r.classes_per_level.push_back(occupied.size());
        r.within_bound = r.within_bound && occupied.size() <= r.t;
    }
    return r;
}

}  // namespace orbitcancel
