#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "orbitcancel/exact/padic.hpp"
#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

inline constexpr long kDefaultTruncation = 32;

/// What is known about the coefficients beyond the truncation order.
enum class TailKind {
    zero,      // the series is a polynomial of degree <= T
    integral,  // every omitted coefficient lies in Z_p
    unknown,
};

inline TailKind combine_tails(TailKind a, TailKind b) { return std::max(a, b); }

inline const char* to_string(TailKind t) {
    switch (t) {
        case TailKind::zero: return "zero";
        case TailKind::integral: return "integral";
        default: return "unknown";
    }
}

/// Power series sum_{i<=T} a_i z^i with precision-tracked p-adic coefficients.
class TruncSeries {
public:
    TruncSeries() = default;
    TruncSeries(unsigned long p, long T, long prec = kDefaultPadicPrecision, TailKind tail = TailKind::zero)
        : p_(p), tail_(tail) {
        if (T < 0) throw PreconditionError("negative truncation order");
        c_.assign(static_cast<std::size_t>(T + 1), Padic::zero(p, prec));
    }

    static TruncSeries from_rationals(const std::vector<BigRat>& coeffs, unsigned long p, long T,
                                      long prec = kDefaultPadicPrecision) {
        TruncSeries s(p, T, prec, TailKind::zero);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (static_cast<long>(i) > T) {
                if (coeffs[i] != 0) s.tail_ = TailKind::unknown;
                continue;
            }
            s.c_[i] = Padic::from_rational(coeffs[i], p, prec);
        }
        if (s.tail_ == TailKind::unknown && s.all_integral_exact(coeffs)) s.tail_ = TailKind::integral;
        return s;
    }
    static TruncSeries identity(unsigned long p, long T, long prec = kDefaultPadicPrecision) {
        return from_rationals({0, 1}, p, T, prec);
    }

    unsigned long prime() const { return p_; }
    long order() const { return static_cast<long>(c_.size()) - 1; }
    TailKind tail() const { return tail_; }
    void set_tail(TailKind t) { tail_ = t; }
    const Padic& operator[](std::size_t i) const { return c_[i]; }
    Padic& operator[](std::size_t i) { return c_[i]; }
    const std::vector<Padic>& coeffs() const { return c_; }

    long min_precision() const {
        long m = c_.empty() ? 0 : c_[0].precision();
        for (const auto& a : c_) m = std::min(m, a.precision());
        return m;
    }
    bool is_zero_at_precision() const {
        return std::all_of(c_.begin(), c_.end(), [](const Padic& a) { return a.is_zero(); });
    }
    bool all_integral() const {
        return std::all_of(c_.begin(), c_.end(), [](const Padic& a) { return a.is_integral(); });
    }
    /// Lowest index with a coefficient nonzero at precision, or -1.
    long lowest_nonzero(std::size_t from = 0) const {
        for (std::size_t i = from; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return static_cast<long>(i);
        return -1;
    }

    TruncSeries truncated(long T) const {
        TruncSeries r = *this;
        if (T < order()) {
            for (std::size_t i = static_cast<std::size_t>(T) + 1; i < c_.size(); ++i)
                if (!c_[i].is_zero() && r.tail_ == TailKind::zero) r.tail_ = all_integral() ? TailKind::integral : TailKind::unknown;
            r.c_.resize(static_cast<std::size_t>(T + 1));
        }
        return r;
    }

    friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
        TruncSeries r = a.common_shape(b);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
        r.tail_ = combine_tails(a.tail_, b.tail_);
        return r;
    }
    friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
        TruncSeries r = a.common_shape(b);
        for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
        r.tail_ = combine_tails(a.tail_, b.tail_);
        return r;
    }
    friend TruncSeries operator*(const Padic& s, const TruncSeries& a) {
        TruncSeries r = a;
        for (auto& x : r.c_) x = s * x;
        if (!s.is_integral() && r.tail_ == TailKind::integral) r.tail_ = TailKind::unknown;
        return r;
    }

    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
        TruncSeries r = a.common_shape(b);
        const std::size_t n = r.c_.size();
        for (std::size_t k = 0; k < n; ++k) {
            Padic acc = Padic::exact_zero(a.p_);
            for (std::size_t i = 0; i <= k; ++i) {
                acc += a.c_[i] * b.c_[k - i];
            }
            r.c_[k] = acc;
        }
        r.tail_ = product_tail(a, b);
        return r;
    }

    /// Polynomial-in-series Horner evaluation: sum_i coeffs[i] * s^i, exact mod z^{T+1}.
    /// The constant term of s may be nonzero.
    static TruncSeries eval_poly(const std::vector<Padic>& coeffs, const TruncSeries& s) {
        TruncSeries acc(s.p_, s.order(), kExactPrecision, TailKind::zero);
        bool first = true;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            if (first) {
                acc.c_[0] = *it;
                first = false;
                continue;
            }
            acc = acc * s;
            acc.c_[0] += *it;
        }
        acc.tail_ = combine_tails(acc.tail_, s.tail_);
        return acc;
    }

    /// Multiplicative inverse when the constant term is a unit.
    TruncSeries inverse() const {
        if (c_.empty() || !c_[0].is_unit())
            throw PreconditionError("series inverse needs a unit constant term");
        TruncSeries r(p_, order(), min_precision(), tail_ == TailKind::zero ? TailKind::integral : tail_);
        const Padic inv0 = Padic::from_int(1, p_, c_[0].precision()) / c_[0];
        r.c_[0] = inv0;
        for (std::size_t k = 1; k < c_.size(); ++k) {
            Padic acc = Padic::exact_zero(p_);
            for (std::size_t i = 1; i <= k; ++i) acc += c_[i] * r.c_[k - i];
            r.c_[k] = -(acc * inv0);
        }
        if (!all_integral()) r.tail_ = TailKind::unknown;
        return r;
    }

    TruncSeries pow(unsigned e) const {
        TruncSeries r = from_rationals({1}, p_, order(), min_precision());
        TruncSeries b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            e >>= 1u;
            if (e) b = b * b;
        }
        return r;
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + to_string(c_[i].display_value()) + ")z^" + std::to_string(i);
        }
        return s.empty() ? "0" : s;
    }

private:
    bool all_integral_exact(const std::vector<BigRat>& coeffs) const {
        return std::all_of(coeffs.begin(), coeffs.end(), [&](const BigRat& q) {
            return q == 0 || p_valuation(q, p_) >= 0;
        });
    }
    TruncSeries common_shape(const TruncSeries& b) const {
        if (p_ != b.p_) throw PreconditionError("mismatched primes in series arithmetic");
        TruncSeries r;
        r.p_ = p_;
        r.c_.resize(std::min(c_.size(), b.c_.size()));
        return r;
    }
    static TailKind product_tail(const TruncSeries& a, const TruncSeries& b) {
        TailKind t = combine_tails(a.tail_, b.tail_);
        if (t == TailKind::zero) {
            long da = a.c_.size() - 1, db = b.c_.size() - 1;
            while (da >= 0 && a.c_[da].is_zero()) --da;
            while (db >= 0 && b.c_[db].is_zero()) --db;
            if (da + db <= static_cast<long>(std::min(a.c_.size(), b.c_.size())) - 1) return TailKind::zero;
            t = TailKind::integral;
        }
        if (t == TailKind::integral && !(a.all_integral() && b.all_integral())) return TailKind::unknown;
        return t;
    }

    unsigned long p_ = 2;
    std::vector<Padic> c_;
    TailKind tail_ = TailKind::zero;
};

/// outer(inner(z)) mod z^{T+1}; inner must vanish at 0 at stated precision.
inline TruncSeries series_compose(const TruncSeries& outer, const TruncSeries& inner) {
    if (outer.prime() != inner.prime()) throw PreconditionError("mismatched primes in series composition");
    if (!inner[0].is_zero()) throw PreconditionError("inner series has a nonzero constant term");
    const long T = std::min(outer.order(), inner.order());
    std::vector<Padic> cs(outer.coeffs().begin(), outer.coeffs().begin() + T + 1);
    TruncSeries r = TruncSeries::eval_poly(cs, inner.truncated(T));
    TailKind t = combine_tails(outer.tail(), inner.tail());
    if (t == TailKind::zero) {
        auto top = [](const TruncSeries& s) {
            long d = s.order();
            while (d >= 0 && s[static_cast<std::size_t>(d)].is_zero()) --d;
            return d;
        };
        if (top(outer) * top(inner) > T) t = TailKind::integral;
    }
    if (t == TailKind::integral && !(outer.all_integral() && inner.all_integral())) t = TailKind::unknown;
    r.set_tail(t);
    return r;
}

struct GaussNorm {
    PPower value;
    /// True when the omitted tail could exceed the stored maximum.
    bool tail_may_dominate = false;
};

/// max_i |a_i| r^i over stored coefficients. Coefficients zero at precision
/// contribute their precision bound p^{-prec}.
inline GaussNorm series_gauss_norm(const TruncSeries& f, const PPower& r) {
    if (f.is_zero_at_precision()) throw PreconditionError("Gauss norm undetermined: series is zero at precision");
    std::optional<PPower> best;
    for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
        PPower term = f[i].abs_bound() * r.pow(BigRat(static_cast<long>(i)));
        if (!best || *best < term) best = term;
    }
    GaussNorm g{*best, false};
    switch (f.tail()) {
        case TailKind::zero: break;
        case TailKind::integral: {
            // Tail terms are bounded by sup_{i>T} r^i, which is r^{T+1} when r <= 1.
            const PPower one = PPower::of(f.prime(), 0);
            g.tail_may_dominate = !(r <= one && r.pow(BigRat(f.order() + 1)) <= g.value);
            break;
        }
        case TailKind::unknown: g.tail_may_dominate = true; break;
    }
    return g;
}

}  // namespace orbitcancel
