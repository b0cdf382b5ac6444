#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "orbitcancel/exact/fp.hpp"
#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

namespace detail {

inline BigInt sym_mod(const BigInt& a, const BigInt& m) {
    BigInt r = mod(a, m);
    if (2 * r > m) r -= m;
    return r;
}

inline ZPoly sym_mod(const ZPoly& a, const BigInt& m) {
    std::vector<BigInt> c;
    c.reserve(a.size());
    for (const auto& x : a.coeffs()) c.push_back(sym_mod(x, m));
    return ZPoly(std::move(c));
}

inline ZPoly lift_fp(const FpPoly& a) {
    std::vector<BigInt> c;
    c.reserve(a.size());
    for (auto x : a) c.emplace_back(static_cast<unsigned long>(x));
    return ZPoly(std::move(c));
}

/// Lifts F = g h (mod p) to F = g h (mod p^K), keeping g monic.
inline std::pair<ZPoly, ZPoly> hensel_lift_pair(const ZPoly& F, const FpPoly& g0, const FpPoly& h0, const Fp& fp,
                                                long K) {
    auto [one, s, t] = fp_xgcd(fp, g0, h0);
    if (fp_deg(one) != 0) throw PreconditionError("Hensel lifting needs coprime factors");
    ZPoly g = lift_fp(g0), h = lift_fp(h0);
    const BigInt p(static_cast<unsigned long>(fp.p));
    BigInt pk = p;
    for (long k = 1; k < K; ++k) {
        ZPoly err = F - g * h;
        std::vector<BigInt> ec;
        for (const auto& c : err.coeffs()) {
            if (!divides(pk, c)) throw PreconditionError("Hensel lifting invariant broken");
            ec.push_back(BigInt(c / pk));
        }
        FpPoly e = fp_reduce(fp, ZPoly(std::move(ec)));
        auto [q, dg] = fp_divmod(fp, fp_mul(fp, t, e), g0);
        FpPoly dh = fp_add(fp, fp_mul(fp, s, e), fp_mul(fp, q, h0));
        g = g + lift_fp(dg) * pk;
        h = h + lift_fp(dh) * pk;
        pk *= p;
    }
    return {g, h};
}

/// Coefficient bound for factors of a degree-n integer polynomial (Mignotte).
inline BigInt factor_coefficient_bound(const ZPoly& f) {
    BigInt norm2 = 0;
    for (const auto& c : f.coeffs()) norm2 += c * c;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
    root += 1;
    return ipow(BigInt(2), static_cast<unsigned long>(f.degree())) * root * abs(f.lead());
}

}  // namespace detail

/// Irreducible factors over Z of a primitive square-free polynomial with positive lead.
inline std::vector<ZPoly> factor_squarefree_z(const ZPoly& f0) {
    ZPoly f = primitive_part(f0);
    if (f.degree() <= 1) return {f};

    // Pick the prime (among the first few admissible) with the fewest modular factors.
    std::optional<Fp> best;
    std::vector<FpPoly> bestFactors;
    unsigned long p = 2;
    int tried = 0;
    while (tried < 5) {
        p = next_prime(p);
        if (p > 100000) break;
        if (divides(BigInt(p), f.lead())) continue;
        Fp fp{p};
        FpPoly fb = fp_reduce(fp, f);
        if (!fp_squarefree(fp, fb)) continue;
        ++tried;
        auto facs = fp_factor_squarefree(fp, fb);
        if (!best || facs.size() < bestFactors.size()) {
            best = fp;
            bestFactors = std::move(facs);
        }
        if (bestFactors.size() == 1) break;
    }
    if (!best) throw ResourceError("no suitable prime for factorisation");
    if (bestFactors.size() == 1) return {f};

    const Fp fp = *best;
    const BigInt P(static_cast<unsigned long>(fp.p));
    const BigInt bound = 2 * detail::factor_coefficient_bound(f) + 1;
    long K = 1;
    BigInt m = P;
    while (m <= 2 * bound) {
        m *= P;
        ++K;
    }

    // Multifactor lift by peeling one monic factor at a time.
    std::vector<ZPoly> lifted;
    ZPoly target = f;
    for (std::size_t i = 0; i + 1 < bestFactors.size(); ++i) {
        FpPoly rest = fp_reduce(fp, ZPoly::constant(f.lead()));
        for (std::size_t j = i + 1; j < bestFactors.size(); ++j) rest = fp_mul(fp, rest, bestFactors[j]);
        auto [g, h] = detail::hensel_lift_pair(target, bestFactors[i], rest, fp, K);
        lifted.push_back(detail::sym_mod(g, m));
        target = detail::sym_mod(h, m);
    }
    // target is now lc * (last factor); make it monic mod m.
    BigInt lcInvM = inverse_mod(f.lead(), m);
    lifted.push_back(detail::sym_mod(target * lcInvM, m));

    // Recombination by trial division.
    std::vector<ZPoly> out;
    std::vector<std::size_t> idx(lifted.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    ZPoly cur = f;
    std::size_t s = 1;
    while (2 * s <= idx.size()) {
        bool found = false;
        std::vector<bool> pick(idx.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(s), true);
        do {
            ZPoly cand = ZPoly::constant(cur.lead());
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (pick[i]) cand = detail::sym_mod(cand * lifted[idx[i]], m);
            cand = primitive_part(cand);
            if (cand.degree() < 1) continue;
            if (auto q = divide_exact(cur, cand)) {
                out.push_back(cand);
                cur = *q;
                std::vector<std::size_t> keep;
                for (std::size_t i = 0; i < idx.size(); ++i)
                    if (!pick[i]) keep.push_back(idx[i]);
                idx = std::move(keep);
                found = true;
                break;
            }
        } while (std::prev_permutation(pick.begin(), pick.end()));
        if (!found) ++s;
    }
    if (cur.degree() >= 1) out.push_back(primitive_part(cur));
    return out;
}

struct QFactorization {
    BigRat unit;
    std::vector<std::pair<ZPoly, unsigned>> factors;  // primitive, positive lead, irreducible over Q
};

inline QFactorization factor_q(const QPoly& f) {
    if (f.is_zero()) throw PreconditionError("factorisation of the zero polynomial");
    QFactorization r;
    if (f.degree() == 0) {
        r.unit = f.lead();
        return r;
    }
    auto sqf = squarefree_decomposition(f);
    QPoly prod = QPoly::constant(1);
    for (std::size_t i = 0; i < sqf.size(); ++i) {
        if (sqf[i].degree() < 1) continue;
        for (auto& g : factor_squarefree_z(to_primitive_z(sqf[i]))) {
            prod *= to_q(g).pow(static_cast<unsigned>(i + 1));
            r.factors.emplace_back(std::move(g), static_cast<unsigned>(i + 1));
        }
    }
    r.unit = f.lead() / prod.lead();
    std::sort(r.factors.begin(), r.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return r;
}

inline bool is_irreducible_q(const QPoly& f) {
    if (f.degree() < 1) return false;
    auto fac = factor_q(f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

/// Rational roots with multiplicity, in increasing order.
inline std::vector<std::pair<BigRat, unsigned>> poly_rational_roots_mult(const QPoly& f) {
    if (f.is_zero()) throw PreconditionError("rational roots of the zero polynomial");
    std::vector<std::pair<BigRat, unsigned>> out;
    if (f.degree() < 1) return out;
    // Strip the factor x^k first; it is cheap and common.
    std::size_t k = 0;
    while (f.coeff(k) == 0) ++k;
    if (k) out.emplace_back(BigRat(0), static_cast<unsigned>(k));
    std::vector<BigRat> rest(f.coeffs().begin() + static_cast<long>(k), f.coeffs().end());
    QPoly g(std::move(rest));
    if (g.degree() >= 1) {
        for (const auto& [h, mult] : factor_q(g).factors)
            if (h.degree() == 1) out.emplace_back(make_rat(-h.coeff(0), h.coeff(1)), mult);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<BigRat> poly_rational_roots(const QPoly& f) {
    std::vector<BigRat> out;
    for (const auto& [r, m] : poly_rational_roots_mult(f)) out.push_back(r);
    return out;
}

}  // namespace orbitcancel
