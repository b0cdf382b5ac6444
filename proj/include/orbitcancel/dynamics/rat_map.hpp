#pragma once

#include <array>
#include <string>
#include <vector>

#include "orbitcancel/exact/factor.hpp"
#include "orbitcancel/exact/poly.hpp"
#include "orbitcancel/exact/resultant.hpp"

namespace orbitcancel {

/// A point (a:b) of P^1(Q) with gcd(a,b) = 1 and either b > 0 or (a,b) = (1,0).
class PointP1 {
public:
    PointP1() : a_(0), b_(1) {}
    PointP1(BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)) { normalize(); }
    static PointP1 from_rational(const BigRat& q) { return {q.get_num(), q.get_den()}; }
    static PointP1 infinity() { return {1, 0}; }

    /// "a/b", "a" or "inf".
    static PointP1 parse(const std::string& s) {
        std::string t;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
        if (t == "inf" || t == "infinity" || t == "oo") return infinity();
        return from_rational(parse_rational(t));
    }

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    bool is_infinity() const { return b_ == 0; }
    BigRat value() const {
        if (is_infinity()) throw PreconditionError("the point at infinity has no affine value");
        return make_rat(a_, b_);
    }
    std::string str() const { return is_infinity() ? "inf" : to_string(value()); }

    friend bool operator==(const PointP1& x, const PointP1& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const PointP1& x, const PointP1& y) { return !(x == y); }
    friend bool operator<(const PointP1& x, const PointP1& y) {
        // Affine points in increasing order, then infinity.
        if (x.is_infinity() || y.is_infinity()) return !x.is_infinity() && y.is_infinity();
        return x.value() < y.value();
    }

private:
    void normalize() {
        if (a_ == 0 && b_ == 0) throw PreconditionError("(0:0) is not a point of P^1");
        BigInt g = gcd(a_, b_);
        a_ /= g;
        b_ /= g;
        if (b_ < 0 || (b_ == 0 && a_ < 0)) {
            a_ = -a_;
            b_ = -b_;
        }
    }
    BigInt a_, b_;
};

struct PointP1Hash {
    std::size_t operator()(const PointP1& x) const noexcept {
        BigIntHash h;
        return h(x.a()) * 1000003u ^ h(x.b());
    }
};

using Mat2 = std::array<BigInt, 4>;  // row-major [[m0, m1], [m2, m3]]

/// Degree-d self-map (X:Z) -> (F(X,Z) : G(X,Z)) of P^1 over Q with coprime integer forms.
/// Coefficient lists are indexed by the power of X: F = sum F[i] X^i Z^{d-i}.
class RatMapP1 {
public:
    RatMapP1(std::vector<BigInt> F, std::vector<BigInt> G) : F_(std::move(F)), G_(std::move(G)) {
        if (F_.size() != G_.size() || F_.size() < 2)
            throw PreconditionError("map forms must have equal positive degree");
        BigInt g = 0;
        for (const auto& c : F_) g = gcd(g, c);
        for (const auto& c : G_) g = gcd(g, c);
        if (g == 0) throw PreconditionError("zero map");
        std::size_t top = G_.size();
        while (top > 0 && G_[top - 1] == 0) --top;
        if (top > 0 && G_[top - 1] < 0) g = -g;
        for (auto& c : F_) c /= g;
        for (auto& c : G_) c /= g;
        res_ = binary_resultant(F_, G_);
        if (res_ == 0) throw PreconditionError("forms share a common zero; not a morphism of this degree");
    }

    /// From a dehomogenised rational function num(x)/den(x); common factors are cancelled.
    static RatMapP1 from_rational_function(const QPoly& num, const QPoly& den) {
        if (den.is_zero()) throw PreconditionError("zero denominator");
        if (num.is_zero()) throw PreconditionError("constant map has degree 0");
        QPoly g = gcd(num, den);
        QPoly n = num / g, m = den / g;
        long d = std::max(n.degree(), m.degree());
        if (d < 1) throw PreconditionError("constant map has degree 0");
        BigInt l = 1;
        for (const auto& c : n.coeffs()) l = lcm(l, c.get_den());
        for (const auto& c : m.coeffs()) l = lcm(l, c.get_den());
        std::vector<BigInt> F(static_cast<std::size_t>(d + 1)), G(static_cast<std::size_t>(d + 1));
        for (long i = 0; i <= d; ++i) {
            F[static_cast<std::size_t>(i)] = BigRat(n.coeff(static_cast<std::size_t>(i)) * l).get_num();
            G[static_cast<std::size_t>(i)] = BigRat(m.coeff(static_cast<std::size_t>(i)) * l).get_num();
        }
        return {F, G};
    }
    static RatMapP1 from_polynomial(const QPoly& p) { return from_rational_function(p, QPoly::constant(1)); }

    long degree() const { return static_cast<long>(F_.size()) - 1; }
    const std::vector<BigInt>& F() const { return F_; }
    const std::vector<BigInt>& G() const { return G_; }
    const BigInt& resultant() const { return res_; }

    QPoly numerator() const { return to_q(ZPoly(F_)); }
    QPoly denominator() const { return to_q(ZPoly(G_)); }

    bool is_polynomial() const {
        for (std::size_t i = 1; i < G_.size(); ++i)
            if (G_[i] != 0) return false;
        return true;
    }
    /// The map as a polynomial over Q (requires is_polynomial()).
    QPoly as_polynomial() const {
        if (!is_polynomial()) throw PreconditionError("map is not a polynomial");
        return numerator() * (BigRat(1) / BigRat(G_[0]));
    }

    static BigInt eval_form(const std::vector<BigInt>& H, const BigInt& a, const BigInt& b) {
        BigInt acc = 0, bp = 1;
        // Horner in a with b powers: sum H[i] a^i b^{d-i}
        const std::size_t d = H.size() - 1;
        std::vector<BigInt> bpow(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            bpow[i] = bp;
            bp *= b;
        }
        BigInt ap = 1;
        for (std::size_t i = 0; i <= d; ++i) {
            acc += H[i] * ap * bpow[d - i];
            ap *= a;
        }
        return acc;
    }

    PointP1 operator()(const PointP1& x) const {
        return {eval_form(F_, x.a(), x.b()), eval_form(G_, x.a(), x.b())};
    }

    /// this o other.
    RatMapP1 compose(const RatMapP1& other) const {
        // Work with bivariate forms encoded as polynomials in X with Z = 1, keeping degrees.
        const std::size_t d = F_.size() - 1, e = other.F_.size() - 1;
        auto polyOf = [](const std::vector<BigInt>& v) { return ZPoly(v); };
        ZPoly P = polyOf(other.F_), Q = polyOf(other.G_);
        // H(P, Q) = sum H[i] P^i Q^{d-i}; degree d*e in X with Z = 1 (homogeneous of that degree).
        auto apply = [&](const std::vector<BigInt>& H) {
            ZPoly acc;
            for (std::size_t i = 0; i <= d; ++i) acc += P.pow(static_cast<unsigned>(i)) * Q.pow(static_cast<unsigned>(d - i)) * H[i];
            std::vector<BigInt> c(d * e + 1, BigInt(0));
            for (std::size_t i = 0; i < acc.size(); ++i) c[i] = acc.coeff(i);
            return c;
        };
        return {apply(F_), apply(G_)};
    }

    RatMapP1 iterate(unsigned n) const {
        if (n == 0) return {{0, 1}, {1, 0}};
        RatMapP1 r = *this;
        for (unsigned i = 1; i < n; ++i) r = compose(r);
        return r;
    }

    /// Conjugate A o f o B where A, B are integer 2x2 matrices acting on (X, Z).
    RatMapP1 conjugate(const Mat2& A, const Mat2& B) const {
        const std::size_t d = F_.size() - 1;
        ZPoly X{B[1], B[0]}, Z{B[3], B[2]};  // B (x, 1) = (B0 x + B1, B2 x + B3)
        auto apply = [&](const std::vector<BigInt>& H) {
            ZPoly acc;
            for (std::size_t i = 0; i <= d; ++i) acc += X.pow(static_cast<unsigned>(i)) * Z.pow(static_cast<unsigned>(d - i)) * H[i];
            return acc;
        };
        ZPoly f = apply(F_), g = apply(G_);
        ZPoly nf = f * A[0] + g * A[1], ng = f * A[2] + g * A[3];
        std::vector<BigInt> Fc(d + 1), Gc(d + 1);
        for (std::size_t i = 0; i <= d; ++i) {
            Fc[i] = nf.coeff(i);
            Gc[i] = ng.coeff(i);
        }
        return {Fc, Gc};
    }

    std::string str() const {
        std::string n = to_string(numerator()), m = to_string(denominator());
        if (m == "1") return n;
        return "(" + n + ")/(" + m + ")";
    }

    friend bool operator==(const RatMapP1& a, const RatMapP1& b) { return a.F_ == b.F_ && a.G_ == b.G_; }

private:
    std::vector<BigInt> F_, G_;
    BigInt res_;
};

inline PointP1 iterate_point(const RatMapP1& f, PointP1 x, unsigned long n) {
    for (unsigned long i = 0; i < n; ++i) x = f(x);
    return x;
}

/// All x in P^1(Q) with f(x) = y.
inline std::vector<PointP1> rational_preimages(const RatMapP1& f, const PointP1& y) {
    const std::size_t d = static_cast<std::size_t>(f.degree());
    std::vector<BigRat> h(d + 1);
    for (std::size_t i = 0; i <= d; ++i) h[i] = BigRat(y.b() * f.F()[i] - y.a() * f.G()[i]);
    std::vector<PointP1> out;
    QPoly H(h);
    if (H.is_zero()) throw PreconditionError("degenerate fibre");
    for (const auto& r : poly_rational_roots(H)) out.push_back(PointP1::from_rational(r));
    if (h[d] == 0) out.push_back(PointP1::infinity());
    return out;
}

}  // namespace orbitcancel
