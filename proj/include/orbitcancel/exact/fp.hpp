#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

/// Arithmetic in F_p for word-size primes p < 2^31.
struct Fp {
    std::uint64_t p;

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) % p; }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a + p - b) % p; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return (a * b) % p; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p - a; }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % p;
        a %= p;
        while (e) {
            if (e & 1u) r = mul(r, a);
            a = mul(a, a);
            e >>= 1u;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a % p == 0) throw PreconditionError("inverse of zero in F_p");
        return pow(a, p - 2);
    }
    std::uint64_t from(const BigInt& a) const { return mod(a, BigInt(static_cast<unsigned long>(p))).get_ui(); }
    std::uint64_t from(const BigRat& q) const { return mul(from(q.get_num()), inv(from(q.get_den()))); }
};

/// Polynomial over F_p, low-to-high, no trailing zeros.
using FpPoly = std::vector<std::uint64_t>;

inline void fp_trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline long fp_deg(const FpPoly& a) { return static_cast<long>(a.size()) - 1; }

inline FpPoly fp_reduce(const Fp& F, const ZPoly& a) {
    FpPoly r;
    r.reserve(a.size());
    for (const auto& c : a.coeffs()) r.push_back(F.from(c));
    fp_trim(r);
    return r;
}

inline FpPoly fp_add(const Fp& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FpPoly fp_sub(const Fp& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FpPoly fp_mul(const Fp& F, const FpPoly& a, const FpPoly& b) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % F.p;
    }
    fp_trim(r);
    return r;
}

inline FpPoly fp_scale(const Fp& F, const FpPoly& a, std::uint64_t s) {
    FpPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], s);
    fp_trim(r);
    return r;
}

inline std::pair<FpPoly, FpPoly> fp_divmod(const Fp& F, const FpPoly& a, const FpPoly& b) {
    if (b.empty()) throw PreconditionError("division by zero polynomial in F_p[x]");
    if (a.size() < b.size()) return {{}, a};
    FpPoly r = a, q(a.size() - b.size() + 1, 0);
    const std::uint64_t inv = F.inv(b.back());
    const std::size_t db = b.size() - 1;
    for (std::size_t k = q.size(); k-- > 0;) {
        std::uint64_t t = F.mul(r[k + db], inv);
        q[k] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) r[k + j] = F.sub(r[k + j], F.mul(t, b[j]));
    }
    r.resize(db);
    fp_trim(r);
    fp_trim(q);
    return {q, r};
}

inline FpPoly fp_rem(const Fp& F, const FpPoly& a, const FpPoly& b) { return fp_divmod(F, a, b).second; }

inline FpPoly fp_monic(const Fp& F, const FpPoly& a) {
    if (a.empty()) return a;
    return fp_scale(F, a, F.inv(a.back()));
}

inline FpPoly fp_gcd(const Fp& F, FpPoly a, FpPoly b) {
    while (!b.empty()) {
        FpPoly r = fp_rem(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(F, a);
}

/// (g, s, t) with s a + t b = g monic.
inline std::tuple<FpPoly, FpPoly, FpPoly> fp_xgcd(const Fp& F, const FpPoly& a, const FpPoly& b) {
    FpPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        auto [q, r] = fp_divmod(F, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        FpPoly s2 = fp_sub(F, s0, fp_mul(F, q, s1));
        FpPoly t2 = fp_sub(F, t0, fp_mul(F, q, t1));
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    std::uint64_t inv = F.inv(r0.back());
    return {fp_scale(F, r0, inv), fp_scale(F, s0, inv), fp_scale(F, t0, inv)};
}

inline FpPoly fp_derivative(const Fp& F, const FpPoly& a) {
    if (a.size() <= 1) return {};
    FpPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], i % F.p);
    fp_trim(r);
    return r;
}

inline FpPoly fp_powmod(const Fp& F, FpPoly base, BigInt e, const FpPoly& m) {
    FpPoly r{1};
    base = fp_rem(F, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp_rem(F, fp_mul(F, r, base), m);
        base = fp_rem(F, fp_mul(F, base, base), m);
        e >>= 1;
    }
    return r;
}

inline bool fp_squarefree(const Fp& F, const FpPoly& a) {
    return fp_deg(fp_gcd(F, a, fp_derivative(F, a))) == 0;
}

/// Complete factorisation of a monic square-free polynomial over F_p, p odd:
/// distinct-degree split, then Cantor-Zassenhaus equal-degree splitting.
inline std::vector<FpPoly> fp_factor_squarefree(const Fp& F, const FpPoly& f, std::uint64_t seed = 0x5eed) {
    std::vector<FpPoly> out;
    std::vector<std::pair<FpPoly, long>> dd;
    FpPoly rest = fp_monic(F, f);
    FpPoly xpow{0, 1};
    const BigInt P(static_cast<unsigned long>(F.p));
    for (long d = 1; 2 * d <= fp_deg(rest); ++d) {
        xpow = fp_powmod(F, xpow, P, rest);
        FpPoly g = fp_gcd(F, rest, fp_sub(F, xpow, FpPoly{0, 1}));
        if (fp_deg(g) > 0) {
            dd.emplace_back(g, d);
            rest = fp_divmod(F, rest, g).first;
            xpow = fp_rem(F, xpow, rest);
        }
    }
    if (fp_deg(rest) > 0) dd.emplace_back(rest, fp_deg(rest));

    std::mt19937_64 rng(seed);
    for (auto& [g, d] : dd) {
        std::vector<FpPoly> todo{g};
        while (!todo.empty()) {
            FpPoly h = todo.back();
            todo.pop_back();
            if (fp_deg(h) == d) {
                out.push_back(fp_monic(F, h));
                continue;
            }
            const BigInt e = (ipow(P, static_cast<unsigned long>(d)) - 1) / 2;
            for (;;) {
                FpPoly a(static_cast<std::size_t>(fp_deg(h)));
                for (auto& c : a) c = rng() % F.p;
                fp_trim(a);
                if (fp_deg(a) < 1) continue;
                FpPoly b = fp_sub(F, fp_powmod(F, a, e, h), FpPoly{1});
                FpPoly s = fp_gcd(F, h, b);
                if (fp_deg(s) > 0 && fp_deg(s) < fp_deg(h)) {
                    todo.push_back(s);
                    todo.push_back(fp_divmod(F, h, s).first);
                    break;
                }
            }
        }
    }
    return out;
}

}  // namespace orbitcancel
