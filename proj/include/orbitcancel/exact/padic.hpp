#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include "orbitcancel/exact/bigint.hpp"

namespace orbitcancel {

/// Default absolute p-adic precision for converted inputs.
inline constexpr long kDefaultPadicPrecision = 64;
inline constexpr long kExactPrecision = 1L << 40;

/// An exact power p^exp, used for absolute values, norms and radii.
/// A zero absolute value is represented by `zero = true`.
struct PPower {
    unsigned long p = 2;
    BigRat exp = 0;
    bool zero = false;

    static PPower of(unsigned long p, const BigRat& e) { return {p, e, false}; }
    static PPower null(unsigned long p) { return {p, 0, true}; }

    friend bool operator<(const PPower& a, const PPower& b) {
        if (a.zero) return !b.zero;
        if (b.zero) return false;
        return a.exp < b.exp;
    }
    friend bool operator<=(const PPower& a, const PPower& b) { return !(b < a); }
    friend bool operator==(const PPower& a, const PPower& b) {
        return a.zero == b.zero && (a.zero || a.exp == b.exp);
    }
    friend PPower operator*(const PPower& a, const PPower& b) {
        if (a.zero || b.zero) return null(a.p);
        return of(a.p, a.exp + b.exp);
    }
    friend PPower operator/(const PPower& a, const PPower& b) {
        if (b.zero) throw PreconditionError("division by a zero absolute value");
        if (a.zero) return a;
        return of(a.p, a.exp - b.exp);
    }
    PPower pow(const BigRat& e) const { return zero ? *this : of(p, exp * e); }

    std::string str() const {
        if (zero) return "0";
        return std::to_string(p) + "^" + (exp.get_den() == 1 ? to_string(exp) : "(" + to_string(exp) + ")");
    }
    double to_double() const { return zero ? 0.0 : std::pow(static_cast<double>(p), exp.get_d()); }
};

inline PPower max(const PPower& a, const PPower& b) { return a < b ? b : a; }

/// Element of Q_p known modulo p^prec (capped absolute precision).
/// Stored as p^val * unit with unit a residue mod p^(prec - val) coprime to p.
/// An element whose value is 0 modulo p^prec has val == prec and unit == 0.
class Padic {
public:
    Padic() = default;

    static Padic zero(unsigned long p, long prec) {
        Padic z;
        z.p_ = p;
        z.prec_ = prec;
        z.val_ = prec;
        return z;
    }

    /// Zero known to every precision that can arise in practice.
    static Padic exact_zero(unsigned long p) { return zero(p, kExactPrecision); }

    static Padic from_rational(const BigRat& q, unsigned long p, long prec = kDefaultPadicPrecision) {
        if (q == 0) return zero(p, prec);
        long v = p_valuation(q, p);
        if (v >= prec) return zero(p, prec);
        BigInt num = strip_p(q.get_num(), p), den = strip_p(q.get_den(), p);
        Padic r;
        r.p_ = p;
        r.prec_ = prec;
        r.val_ = v;
        BigInt m = p_power(p, prec - v);
        r.unit_ = mod(num * inverse_mod(den, m), m);
        return r;
    }
    static Padic from_int(long n, unsigned long p, long prec = kDefaultPadicPrecision) {
        return from_rational(BigRat(n), p, prec);
    }

    unsigned long prime() const { return p_; }
    long precision() const { return prec_; }
    /// Valuation; equals precision() for a zero-at-precision element.
    long valuation() const { return val_; }
    const BigInt& unit() const { return unit_; }
    bool is_zero() const { return val_ >= prec_; }
    /// Relative precision (number of known p-adic digits).
    long relative_precision() const { return prec_ - val_; }

    /// |x| as an exact power of p; zero-at-precision reports p^{-prec}, an upper bound.
    PPower abs_bound() const { return PPower::of(p_, BigRat(-val_)); }
    /// |x| exactly when nonzero; nullopt when zero at precision.
    std::optional<PPower> abs() const {
        if (is_zero()) return std::nullopt;
        return abs_bound();
    }

    bool is_integral() const { return val_ >= 0; }
    bool is_unit() const { return val_ == 0 && !is_zero(); }

    /// Representative in [0, p^prec) for an integral element.
    BigInt lift() const {
        if (val_ < 0) throw PreconditionError("lift of a non-integral p-adic number");
        if (is_zero()) return 0;
        return unit_ * p_power(p_, val_);
    }

    /// Representative as a rational number (unit times p^val).
    BigRat to_rational_rep() const {
        if (is_zero()) return 0;
        if (val_ >= 0) return BigRat(unit_ * p_power(p_, val_));
        return make_rat(unit_, p_power(p_, -val_));
    }

    /// Reduction mod p of an integral element.
    unsigned long residue() const {
        if (val_ < 0) throw PreconditionError("residue of a non-integral p-adic number");
        if (val_ > 0 || is_zero()) return 0;
        return mod(unit_, BigInt(p_)).get_ui();
    }

    Padic with_precision(long prec) const {
        if (prec >= prec_) return *this;
        if (val_ >= prec) return zero(p_, prec);
        Padic r = *this;
        r.prec_ = prec;
        r.unit_ = mod(unit_, p_power(p_, prec - val_));
        return r;
    }

    friend Padic operator+(const Padic& a, const Padic& b) {
        check_same(a, b);
        const long prec = std::min(a.prec_, b.prec_);
        if (a.is_zero()) return b.with_precision(prec);
        if (b.is_zero()) return a.with_precision(prec);
        const long v = std::min(a.val_, b.val_);
        if (v >= prec) return zero(a.p_, prec);
        BigInt m = p_power(a.p_, prec - v);
        BigInt s = a.unit_ * p_power(a.p_, a.val_ - v) + b.unit_ * p_power(a.p_, b.val_ - v);
        return normalized(a.p_, v, mod(s, m), prec);
    }
    friend Padic operator-(const Padic& a) {
        if (a.is_zero()) return a;
        Padic r = a;
        r.unit_ = mod(BigInt(-a.unit_), p_power(a.p_, a.prec_ - a.val_));
        return r;
    }
    friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }

    friend Padic operator*(const Padic& a, const Padic& b) {
        check_same(a, b);
        const long prec = std::min(a.prec_ + b.val_, b.prec_ + a.val_);
        const long v = a.val_ + b.val_;
        if (a.is_zero() || b.is_zero() || v >= prec) return zero(a.p_, prec);
        BigInt m = p_power(a.p_, prec - v);
        Padic r;
        r.p_ = a.p_;
        r.prec_ = prec;
        r.val_ = v;
        r.unit_ = mod(BigInt(a.unit_ * b.unit_), m);
        return r;
    }

    friend Padic operator/(const Padic& a, const Padic& b) {
        check_same(a, b);
        if (b.is_zero()) throw PreconditionError("p-adic division by an element that is zero at precision");
        const long v = a.val_ - b.val_;
        if (a.is_zero()) return zero(a.p_, a.prec_ - b.val_);
        const long rel = std::min(a.relative_precision(), b.relative_precision());
        BigInt m = p_power(a.p_, rel);
        Padic r;
        r.p_ = a.p_;
        r.val_ = v;
        r.prec_ = v + rel;
        r.unit_ = mod(BigInt(mod(a.unit_, m) * inverse_mod(b.unit_, m)), m);
        return r;
    }

    Padic& operator+=(const Padic& o) { return *this = *this + o; }
    Padic& operator-=(const Padic& o) { return *this = *this - o; }
    Padic& operator*=(const Padic& o) { return *this = *this * o; }

    Padic pow(unsigned long e) const {
        if (e == 0) return from_int(1, p_, prec_);
        std::optional<Padic> r;
        Padic b = *this;
        while (e) {
            if (e & 1u) r = r ? *r * b : b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return *r;
    }

    /// Equal at the common precision.
    bool agrees_with(const Padic& o) const { return (*this - o).is_zero(); }

    /// Smallest-height rational congruent to this element, when one with
    /// |num|, |den| below sqrt(p^relprec / 2) exists.
    std::optional<BigRat> reconstruct_rational() const {
        if (is_zero()) return BigRat(0);
        BigInt m = p_power(p_, relative_precision());
        BigInt bound;
        mpz_sqrt(bound.get_mpz_t(), BigInt(m / 2).get_mpz_t());
        BigInt r0 = m, r1 = unit_, t0 = 0, t1 = 1;
        while (r1 > bound) {
            BigInt q = r0 / r1;
            BigInt r2 = r0 - q * r1, t2 = t0 - q * t1;
            r0 = r1; r1 = r2; t0 = t1; t1 = t2;
        }
        if (t1 == 0 || ::abs(t1) > bound) return std::nullopt;
        BigRat u = make_rat(r1, t1);
        if (val_ >= 0) return u * BigRat(p_power(p_, val_));
        return u / BigRat(p_power(p_, -val_));
    }

    /// Smallest-height rational representative when reconstruction succeeds, else the residue representative.
    BigRat display_value() const {
        if (auto q = reconstruct_rational()) return *q;
        return to_rational_rep();
    }

    std::string str() const {
        if (is_zero()) return "O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
        return to_string(display_value()) + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
    }

private:
    static void check_same(const Padic& a, const Padic& b) {
        if (a.p_ != b.p_) throw PreconditionError("mismatched primes in p-adic arithmetic");
    }
    static Padic normalized(unsigned long p, long v, BigInt u, long prec) {
        if (u == 0) return zero(p, prec);
        long extra = p_valuation(u, p);
        Padic r;
        r.p_ = p;
        r.prec_ = prec;
        r.val_ = v + extra;
        if (r.val_ >= prec) return zero(p, prec);
        r.unit_ = mod(strip_p(u, p), p_power(p, prec - r.val_));
        return r;
    }

    unsigned long p_ = 2;
    long prec_ = 0;
    long val_ = 0;
    BigInt unit_ = 0;
};

}  // namespace orbitcancel
