#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "orbitcancel/dynamics/rat_map.hpp"
#include "orbitcancel/exact/fp.hpp"

namespace orbitcancel {

/// Points of P^1(F_p) are indexed 0..p-1 for the affine residues and p for infinity.
inline std::string residue_label(std::size_t idx, unsigned long p) {
    return idx == p ? "inf" : std::to_string(idx);
}

inline std::size_t reduce_point(const PointP1& x, unsigned long p) {
    const BigInt P(p);
    if (divides(P, x.b())) return p;
    BigInt r = mod(BigInt(x.a() * inverse_mod(mod(x.b(), P), P)), P);
    return r.get_ui();
}

/// The reduction of a map on P^1(F_p) with its orbit structure.
struct FpMapTable {
    unsigned long p = 0;
    std::vector<std::size_t> table;   // size p + 1
    std::vector<std::size_t> tail;    // steps before entering a cycle
    std::vector<std::size_t> cycle;   // length of the cycle eventually reached
    unsigned long N0 = 1;

    std::size_t apply(std::size_t x, unsigned long n) const {
        for (unsigned long i = 0; i < n; ++i) x = table[x];
        return x;
    }
    bool is_fixed_by_period(std::size_t x) const { return apply(x, N0) == x; }
    std::vector<std::size_t> period_fixed_points() const {
        std::vector<std::size_t> out;
        for (std::size_t x = 0; x < table.size(); ++x)
            if (is_fixed_by_period(x)) out.push_back(x);
        return out;
    }
};

/// Least N0 >= 1 with table^N0 = table^{2 N0} pointwise.
inline unsigned long reduction_period(FpMapTable& t) {
    const std::size_t n = t.table.size();
    t.tail.assign(n, 0);
    t.cycle.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        std::vector<std::size_t> seen(n, static_cast<std::size_t>(-1));
        std::size_t y = x, step = 0;
        while (seen[y] == static_cast<std::size_t>(-1)) {
            seen[y] = step++;
            y = t.table[y];
        }
        t.tail[x] = seen[y];
        t.cycle[x] = step - seen[y];
    }
    unsigned long L = 1, maxTail = 0;
    for (std::size_t x = 0; x < n; ++x) {
        L = std::lcm(L, static_cast<unsigned long>(t.cycle[x]));
        maxTail = std::max(maxTail, static_cast<unsigned long>(t.tail[x]));
    }
    unsigned long N0 = L;
    while (N0 < std::max(maxTail, 1ul)) N0 += L;
    t.N0 = N0;
    return N0;
}

inline FpMapTable reduce_mod_p(const RatMapP1& f, unsigned long p) {
    if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
    const BigInt P(p);
    if (divides(P, f.resultant())) {
        long v = p_valuation(BigRat(f.resultant()), p);
        throw PreconditionError("bad reduction at " + std::to_string(p) + ": resultant " + to_string(f.resultant()) +
                                " is divisible by " + std::to_string(p) + "^" + std::to_string(v));
    }
    FpMapTable t;
    t.p = p;
    t.table.resize(p + 1);
    for (std::size_t x = 0; x <= p; ++x) {
        BigInt a = x == p ? BigInt(1) : BigInt(static_cast<unsigned long>(x));
        BigInt b = x == p ? BigInt(0) : BigInt(1);
        BigInt F = mod(RatMapP1::eval_form(f.F(), a, b), P), G = mod(RatMapP1::eval_form(f.G(), a, b), P);
        if (G == 0) {
            t.table[x] = p;
        } else {
            t.table[x] = mod(BigInt(F * inverse_mod(G, P)), P).get_ui();
        }
    }
    reduction_period(t);
    return t;
}

inline bool has_good_reduction(const RatMapP1& f, unsigned long p) { return !divides(BigInt(p), f.resultant()); }

/// Smallest odd prime p >= minimum with good reduction.
inline unsigned long find_good_prime(const RatMapP1& f, unsigned long minimum = 3) {
    unsigned long q = std::max(minimum, 3ul) - 1;
    for (int tries = 0; tries < 100000; ++tries) {
        q = next_prime(q);
        if (has_good_reduction(f, q)) return q;
    }
    throw ResourceError("no good-reduction prime found");
}

/// The automatic policy: smallest good prime exceeding d + 1.
inline unsigned long auto_prime(const RatMapP1& f) {
    return find_good_prime(f, static_cast<unsigned long>(f.degree()) + 2);
}

}  // namespace orbitcancel
