#pragma once

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "orbitcancel/exact/bigint.hpp"

namespace orbitcancel {

/// Dense univariate polynomial, coefficients stored low-to-high.
/// The coefficient vector never has a trailing zero; the zero polynomial is empty.
template <class R>
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<R> c) : c_(c) { trim(); }
    explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }
    static Poly constant(const R& a) { return Poly(std::vector<R>{a}); }
    static Poly monomial(const R& a, std::size_t k) {
        std::vector<R> c(k + 1, R(0));
        c[k] = a;
        return Poly(std::move(c));
    }
    static Poly x() { return monomial(R(1), 1); }

    bool is_zero() const { return c_.empty(); }
    /// -1 for the zero polynomial.
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const R& lead() const { return c_.back(); }
    R coeff(std::size_t i) const { return i < c_.size() ? c_[i] : R(0); }
    const std::vector<R>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }

    void set_coeff(std::size_t i, const R& a) {
        if (i >= c_.size()) c_.resize(i + 1, R(0));
        c_[i] = a;
        trim();
    }

    template <class T>
    T eval(const T& x) const {
        T acc(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = T(acc * x + T(*it));
        return acc;
    }

    Poly derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<R> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = R(c_[i] * R(static_cast<long>(i)));
        return Poly(std::move(d));
    }

    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const R& s) {
        for (auto& a : c_) a *= s;
        trim();
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) {
        for (auto& x : a.c_) x = -x;
        return a;
    }
    friend Poly operator*(Poly a, const R& s) { return a *= s; }
    friend Poly operator*(const R& s, Poly a) { return a *= s; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<R> c(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(c));
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned e) const {
        Poly r = constant(R(1)), b = *this;
        while (e) {
            if (e & 1u) r *= b;
            e >>= 1u;
            if (e) b *= b;
        }
        return r;
    }

    /// this(inner(x)) by Horner's rule.
    Poly compose(const Poly& inner) const {
        Poly acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + constant(*it);
        return acc;
    }

    /// x^n p(1/x) for n = deg p (coefficient reversal).
    Poly reversed() const {
        std::vector<R> c(c_.rbegin(), c_.rend());
        return Poly(std::move(c));
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<R> c_;
};

using ZPoly = Poly<BigInt>;
using QPoly = Poly<BigRat>;

// ---- field (Q) operations ----

inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    if (a.degree() < b.degree()) return {QPoly{}, a};
    std::vector<BigRat> r = a.coeffs();
    std::vector<BigRat> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), BigRat(0));
    const BigRat inv = BigRat(1) / b.lead();
    const std::size_t db = static_cast<std::size_t>(b.degree());
    for (long k = a.degree() - b.degree(); k >= 0; --k) {
        const std::size_t top = static_cast<std::size_t>(k) + db;
        BigRat t = r[top] * inv;
        q[static_cast<std::size_t>(k)] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) r[static_cast<std::size_t>(k) + j] -= t * b.coeff(j);
    }
    r.resize(db);
    return {QPoly(std::move(q)), QPoly(std::move(r))};
}

inline QPoly operator/(const QPoly& a, const QPoly& b) { return divmod(a, b).first; }
inline QPoly operator%(const QPoly& a, const QPoly& b) { return divmod(a, b).second; }

inline QPoly monic(const QPoly& a) {
    if (a.is_zero()) return a;
    return a * (BigRat(1) / a.lead());
}

inline QPoly gcd(QPoly a, QPoly b) {
    while (!b.is_zero()) {
        QPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

/// Bezout: returns (g, s, t) with s a + t b = g monic.
inline std::tuple<QPoly, QPoly, QPoly> xgcd(const QPoly& a, const QPoly& b) {
    QPoly r0 = a, r1 = b, s0 = QPoly::constant(1), s1, t0, t1 = QPoly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        QPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1); s1 = std::move(s2);
        t0 = std::move(t1); t1 = std::move(t2);
    }
    if (r0.is_zero()) return {r0, s0, t0};
    BigRat inv = BigRat(1) / r0.lead();
    return {r0 * inv, s0 * inv, t0 * inv};
}

/// Square-free decomposition (Yun): a = lc * prod f_i^i with f_i monic, square-free, coprime.
/// Entry i-1 of the result holds f_i (possibly 1).
inline std::vector<QPoly> squarefree_decomposition(const QPoly& a) {
    if (a.degree() < 1) return {};
    std::vector<QPoly> out;
    QPoly f = monic(a);
    QPoly b = gcd(f, f.derivative());
    QPoly c = f / b;
    QPoly d = f.derivative() / b - c.derivative();
    while (c.degree() > 0) {
        QPoly g = gcd(c, d);
        out.push_back(g);
        c = c / g;
        d = d / g - c.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    return out;
}

inline QPoly squarefree_part(const QPoly& a) {
    if (a.degree() < 1) return a;
    QPoly f = monic(a);
    return f / gcd(f, f.derivative());
}

// ---- integer content ----

inline BigInt content(const ZPoly& a) {
    BigInt g = 0;
    for (const auto& c : a.coeffs()) g = gcd(g, c);
    return g;
}

/// Primitive integer polynomial with positive leading coefficient.
inline ZPoly primitive_part(const ZPoly& a) {
    if (a.is_zero()) return a;
    BigInt g = content(a);
    if (a.lead() < 0) g = -g;
    std::vector<BigInt> c;
    c.reserve(a.size());
    for (const auto& x : a.coeffs()) c.push_back(BigInt(x / g));
    return ZPoly(std::move(c));
}

/// Clears denominators: primitive integer polynomial with positive lead, same roots.
inline ZPoly to_primitive_z(const QPoly& a) {
    BigInt l = 1;
    for (const auto& c : a.coeffs()) l = lcm(l, c.get_den());
    std::vector<BigInt> z;
    z.reserve(a.size());
    for (const auto& c : a.coeffs()) z.push_back(BigInt(c.get_num() * (l / c.get_den())));
    return primitive_part(ZPoly(std::move(z)));
}

inline QPoly to_q(const ZPoly& a) {
    std::vector<BigRat> c;
    c.reserve(a.size());
    for (const auto& x : a.coeffs()) c.emplace_back(x);
    return QPoly(std::move(c));
}

/// Exact quotient a / b over Z if b divides a, otherwise nullopt.
inline std::optional<ZPoly> divide_exact(const ZPoly& a, const ZPoly& b) {
    if (b.is_zero()) throw PreconditionError("polynomial division by zero");
    if (a.is_zero()) return ZPoly{};
    if (a.degree() < b.degree()) return std::nullopt;
    std::vector<BigInt> r = a.coeffs();
    std::vector<BigInt> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    const std::size_t db = static_cast<std::size_t>(b.degree());
    for (long k = a.degree() - b.degree(); k >= 0; --k) {
        const std::size_t top = static_cast<std::size_t>(k) + db;
        if (!divides(b.lead(), r[top])) return std::nullopt;
        BigInt t = r[top] / b.lead();
        q[static_cast<std::size_t>(k)] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) r[static_cast<std::size_t>(k) + j] -= t * b.coeff(j);
    }
    for (std::size_t j = 0; j < db; ++j)
        if (r[j] != 0) return std::nullopt;
    return ZPoly(std::move(q));
}

template <class R>
std::string to_string(const Poly<R>& p, const std::string& var = "x") {
    if (p.is_zero()) return "0";
    std::string out;
    for (long i = p.degree(); i >= 0; --i) {
        R c = p.coeff(static_cast<std::size_t>(i));
        if (c == 0) continue;
        std::string cs = to_string(BigRat(c));
        bool neg = cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (!out.empty()) out += neg ? "-" : "+";
        else if (neg) out += "-";
        bool unit = cs == "1";
        if (i == 0) out += cs;
        else {
            if (!unit) out += (cs.find('/') != std::string::npos ? "(" + cs + ")" : cs) + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
    }
    return out;
}

}  // namespace orbitcancel
