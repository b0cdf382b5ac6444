#pragma once

#include <map>
#include <optional>

#include "orbitcancel/exact/bigint.hpp"

namespace orbitcancel {

namespace detail {

/// Brent's variant of Pollard rho; nullopt when the iteration budget runs out.
inline std::optional<BigInt> pollard_rho(const BigInt& n, unsigned long budget) {
    if (n % 2 == 0) return BigInt(2);
    for (unsigned long c = 1; c < 20; ++c) {
        BigInt y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, spent = 0;
        auto step = [&](const BigInt& v) { return BigInt((v * v + c) % n); };
        while (g == 1 && spent < budget) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = step(y);
            for (unsigned long k = 0; k < r && g == 1; k += 128) {
                ys = y;
                for (unsigned long i = 0; i < std::min(128ul, r - k); ++i) {
                    y = step(y);
                    q = q * BigInt(::abs(BigInt(x - y))) % n;
                }
                g = gcd(q, n);
                spent += 128;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = step(ys);
                g = gcd(BigInt(::abs(BigInt(x - ys))), n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
        if (spent >= budget) return std::nullopt;
    }
    return std::nullopt;
}

inline bool factor_into(const BigInt& n, std::map<BigInt, unsigned>& out, unsigned long budget) {
    if (n == 1) return true;
    if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
        ++out[n];
        return true;
    }
    auto d = pollard_rho(n, budget);
    if (!d) return false;
    return factor_into(*d, out, budget) && factor_into(BigInt(n / *d), out, budget);
}

}  // namespace detail

/// Prime factorisation of |n| (n != 0); nullopt when a cofactor resists the rho budget.
inline std::optional<std::map<BigInt, unsigned>> factor_integer(const BigInt& n, unsigned long budget = 1ul << 22) {
    if (n == 0) throw PreconditionError("factorisation of zero");
    std::map<BigInt, unsigned> out;
    BigInt m = ::abs(n);
    for (unsigned long p = 2; p < 10000 && p * p <= m; p += (p == 2 ? 1 : 2))
        while (m % p == 0) {
            ++out[BigInt(p)];
            m /= p;
        }
    if (!detail::factor_into(m, out, budget)) return std::nullopt;
    return out;
}

/// Hilbert symbol (a, b)_p for an odd prime p and nonzero integers a, b.
inline int hilbert_symbol_odd(const BigInt& a, const BigInt& b, const BigInt& p) {
    long al = 0, be = 0;
    BigInt u = a, v = b;
    while (u % p == 0) { u /= p; ++al; }
    while (v % p == 0) { v /= p; ++be; }
    const BigInt half = (p - 1) / 2;
    int sign = (al * be) % 2 && half % 2 != 0 ? -1 : 1;
    if (be % 2) sign *= mpz_legendre(BigInt(mod(u, p)).get_mpz_t(), p.get_mpz_t());
    if (al % 2) sign *= mpz_legendre(BigInt(mod(v, p)).get_mpz_t(), p.get_mpz_t());
    return sign;
}

/// Whether a X^2 + b Y^2 = Z^2 has a nontrivial rational solution (a, b nonzero integers); nullopt
/// when factoring a b runs out of budget. The place 2 is covered by the product formula.
inline std::optional<bool> legendre_solvable(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) throw PreconditionError("Legendre test needs nonzero coefficients");
    if (a < 0 && b < 0) return false;
    const auto fa = factor_integer(a), fb = factor_integer(b);
    if (!fa || !fb) return std::nullopt;
    std::map<BigInt, unsigned> primes = *fa;
    for (const auto& [q, e] : *fb) primes[q] += e;
    for (const auto& [q, e] : primes) {
        (void)e;
        if (q == 2) continue;
        if (hilbert_symbol_odd(a, b, q) != 1) return false;
    }
    return true;
}

}  // namespace orbitcancel
