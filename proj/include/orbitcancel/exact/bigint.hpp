#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "orbitcancel/errors.hpp"

namespace orbitcancel {

// mpq_class keeps numerator/denominator coprime with a positive denominator
// after every arithmetic operation, which is exactly the BigRat invariant.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw PreconditionError("rational with zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigRat rpow(const BigRat& base, long e) {
    if (e < 0) {
        if (base == 0) throw PreconditionError("zero to a negative power");
        return rpow(BigRat(1) / base, -e);
    }
    BigInt n = ipow(base.get_num(), static_cast<unsigned long>(e));
    BigInt d = ipow(base.get_den(), static_cast<unsigned long>(e));
    return BigRat(n, d);
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
    BigInt l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

/// Floor division remainder in [0, m).
inline BigInt mod(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool divides(const BigInt& d, const BigInt& n) {
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

/// Exponent of p in a nonzero integer.
inline long p_valuation(const BigInt& n, unsigned long p) {
    if (n == 0) throw PreconditionError("valuation of zero");
    BigInt pp(p);
    return static_cast<long>(mpz_remove(BigInt().get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

inline long p_valuation(const BigRat& q, unsigned long p) {
    if (q == 0) throw PreconditionError("valuation of zero");
    return p_valuation(q.get_num(), p) - p_valuation(q.get_den(), p);
}

/// n with every factor of p removed.
inline BigInt strip_p(const BigInt& n, unsigned long p) {
    BigInt r;
    BigInt pp(p);
    mpz_remove(r.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t());
    return r;
}

inline BigInt p_power(unsigned long p, long e) {
    if (e < 0) throw PreconditionError("negative exponent for integer power");
    return ipow(BigInt(p), static_cast<unsigned long>(e));
}

/// Inverse of a modulo m; a must be a unit.
inline BigInt inverse_mod(const BigInt& a, const BigInt& m) {
    BigInt r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw PreconditionError("element is not invertible modulo " + m.get_str());
    return r;
}

/// Natural logarithm of a positive integer without converting through double overflow.
inline double log_abs(const BigInt& n) {
    if (n == 0) throw PreconditionError("log of zero");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline double log_abs(const BigRat& q) {
    return log_abs(q.get_num()) - log_abs(q.get_den());
}

inline std::string to_string(const BigInt& n) { return n.get_str(); }

inline std::string to_string(const BigRat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "a", "a/b", or a finite decimal "-1.25" into an exact rational.
inline BigRat parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '_') s.push_back(c);
    if (s.empty()) throw ConfigError("empty rational literal");
    auto bad = [&] { return ConfigError("malformed rational literal '" + std::string(text) + "'"); };
    auto parse_int = [&](const std::string& t) {
        if (t.empty() || t == "+" || t == "-") throw bad();
        for (std::size_t i = 0; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i])) && !(i == 0 && (t[i] == '-' || t[i] == '+')))
                throw bad();
        return BigInt(t[0] == '+' ? t.substr(1) : t);
    };
    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt n = parse_int(s.substr(0, slash));
        BigInt d = parse_int(s.substr(slash + 1));
        if (d == 0) throw ConfigError("zero denominator in '" + std::string(text) + "'");
        return make_rat(n, d);
    }
    if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        bool neg = !ip.empty() && ip[0] == '-';
        if (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ip = ip.substr(1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        BigInt whole = parse_int(ip + fp);
        BigRat r = make_rat(whole, ipow(BigInt(10), fp.size()));
        return neg ? BigRat(-r) : r;
    }
    return BigRat(parse_int(s));
}

/// Exact rational value of a finite double (binary expansion).
inline BigRat rat_from_double(double x) {
    BigRat r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

inline double to_double(const BigRat& q) { return q.get_d(); }

struct BigIntHash {
    std::size_t operator()(const BigInt& n) const noexcept {
        std::size_t h = std::hash<int>{}(mpz_sgn(n.get_mpz_t()));
        std::size_t limbs = mpz_size(n.get_mpz_t());
        for (std::size_t i = 0; i < limbs; ++i)
            h ^= std::hash<mp_limb_t>{}(mpz_getlimbn(n.get_mpz_t(), i)) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

/// Positive divisors of |n| by trial division; only for small inputs.
inline std::vector<BigInt> small_divisors(const BigInt& n) {
    BigInt m = abs(n);
    std::vector<BigInt> out;
    if (m == 0) return out;
    for (BigInt d = 1; d * d <= m; ++d) {
        if (divides(d, m)) {
            out.push_back(d);
            if (d * d != m) out.push_back(m / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_prime(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline unsigned long next_prime(unsigned long n) {
    unsigned long c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

/// Prime factorisation of a small positive integer as (prime, exponent) pairs.
inline std::vector<std::pair<unsigned long, unsigned>> factor_small(unsigned long n) {
    std::vector<std::pair<unsigned long, unsigned>> out;
    for (unsigned long d = 2; d * d <= n; ++d) {
        unsigned e = 0;
        while (n % d == 0) { n /= d; ++e; }
        if (e) out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1u);
    return out;
}

}  // namespace orbitcancel
