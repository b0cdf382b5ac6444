#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitcancel/exact/factor.hpp"
#include "orbitcancel/exact/linalg.hpp"
#include "orbitcancel/exact/poly.hpp"

namespace orbitcancel {

/// Dense bivariate polynomial over Q: c[i][j] is the coefficient of x^i y^j.
/// Trimmed so that deg_x and deg_y are the actual partial degrees.
class BiPoly {
public:
    BiPoly() = default;
    explicit BiPoly(Matrix<BigRat> c) : c_(std::move(c)) { trim(); }

    static BiPoly from_x_poly(const QPoly& p) {
        Matrix<BigRat> c;
        for (const auto& a : p.coeffs()) c.push_back({a});
        return BiPoly(std::move(c));
    }
    static BiPoly from_y_poly(const QPoly& p) { return BiPoly(Matrix<BigRat>{p.coeffs()}); }
    static BiPoly constant(const BigRat& a) { return BiPoly(Matrix<BigRat>{{a}}); }
    static BiPoly x() { return BiPoly(Matrix<BigRat>{{0}, {1}}); }
    static BiPoly y() { return BiPoly(Matrix<BigRat>{{0, 1}}); }

    bool is_zero() const { return c_.empty(); }
    long deg_x() const { return static_cast<long>(c_.size()) - 1; }
    long deg_y() const {
        long d = -1;
        for (const auto& row : c_) d = std::max(d, static_cast<long>(row.size()) - 1);
        return d;
    }
    long total_degree() const {
        long d = -1;
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < c_[i].size(); ++j)
                if (c_[i][j] != 0) d = std::max(d, static_cast<long>(i + j));
        return d;
    }
    BigRat coeff(std::size_t i, std::size_t j) const {
        if (i >= c_.size() || j >= c_[i].size()) return 0;
        return c_[i][j];
    }
    const Matrix<BigRat>& rows() const { return c_; }

    /// Coefficient of x^i as a polynomial in y.
    QPoly x_coeff(std::size_t i) const { return i < c_.size() ? QPoly(c_[i]) : QPoly{}; }
    /// Coefficient of y^j as a polynomial in x.
    QPoly y_coeff(std::size_t j) const {
        std::vector<BigRat> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = coeff(i, j);
        return QPoly(std::move(v));
    }
    static BiPoly from_x_coeffs(const std::vector<QPoly>& cs) {
        Matrix<BigRat> c;
        for (const auto& p : cs) c.push_back(p.coeffs());
        return BiPoly(std::move(c));
    }

    BiPoly swapped() const {
        Matrix<BigRat> s(static_cast<std::size_t>(std::max(deg_y() + 1, 0L)));
        for (std::size_t i = 0; i < c_.size(); ++i)
            for (std::size_t j = 0; j < c_[i].size(); ++j) {
                if (s[j].size() <= i) s[j].resize(i + 1, BigRat(0));
                s[j][i] = c_[i][j];
            }
        return BiPoly(std::move(s));
    }

    QPoly eval_y(const BigRat& y0) const {
        std::vector<BigRat> v(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) v[i] = QPoly(c_[i]).eval(y0);
        return QPoly(std::move(v));
    }
    QPoly eval_x(const BigRat& x0) const { return swapped().eval_y(x0); }
    BigRat eval(const BigRat& x0, const BigRat& y0) const { return eval_y(y0).eval(x0); }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        Matrix<BigRat> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) {
            std::size_t n = std::max(i < a.c_.size() ? a.c_[i].size() : 0, i < b.c_.size() ? b.c_[i].size() : 0);
            c[i].assign(n, BigRat(0));
            for (std::size_t j = 0; j < n; ++j) c[i][j] = a.coeff(i, j) + b.coeff(i, j);
        }
        return BiPoly(std::move(c));
    }
    friend BiPoly operator-(const BiPoly& a) {
        BiPoly r = a;
        for (auto& row : r.c_)
            for (auto& x : row) x = -x;
        return r;
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + (-b); }
    friend BiPoly operator*(const BigRat& s, const BiPoly& a) {
        BiPoly r = a;
        for (auto& row : r.c_)
            for (auto& x : row) x *= s;
        r.trim();
        return r;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        const std::size_t dy = static_cast<std::size_t>(a.deg_y() + b.deg_y() + 1);
        Matrix<BigRat> c(a.c_.size() + b.c_.size() - 1, std::vector<BigRat>(dy, BigRat(0)));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < a.c_[i].size(); ++j) {
                if (a.c_[i][j] == 0) continue;
                for (std::size_t k = 0; k < b.c_.size(); ++k)
                    for (std::size_t l = 0; l < b.c_[k].size(); ++l)
                        if (b.c_[k][l] != 0) c[i + k][j + l] += a.c_[i][j] * b.c_[k][l];
            }
        return BiPoly(std::move(c));
    }
    BiPoly pow(unsigned e) const {
        BiPoly r = constant(1);
        for (unsigned i = 0; i < e; ++i) r = r * *this;
        return r;
    }
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly partial_x() const {
        Matrix<BigRat> c;
        for (std::size_t i = 1; i < c_.size(); ++i) {
            c.push_back(c_[i]);
            for (auto& x : c.back()) x *= BigRat(static_cast<long>(i));
        }
        return BiPoly(std::move(c));
    }

    /// F(px(x), py(y)) for univariate substitutions.
    BiPoly substitute(const QPoly& px, const QPoly& py) const {
        BiPoly X = from_x_poly(px), Y = from_y_poly(py);
        std::vector<BiPoly> ypow{constant(1)};
        for (long j = 1; j <= deg_y(); ++j) ypow.push_back(ypow.back() * Y);
        BiPoly acc;
        for (std::size_t i = c_.size(); i-- > 0;) {
            BiPoly row;
            for (std::size_t j = 0; j < c_[i].size(); ++j)
                if (c_[i][j] != 0) row = row + c_[i][j] * ypow[j];
            acc = acc * X + row;
        }
        return acc;
    }

    /// F(x, y + y0).
    BiPoly shift_y(const BigRat& y0) const {
        Matrix<BigRat> c;
        QPoly sh{y0, BigRat(1)};
        for (const auto& row : c_) c.push_back(QPoly(row).compose(sh).coeffs());
        return BiPoly(std::move(c));
    }

    /// Primitive integer multiple with a canonical sign: the coefficient of the
    /// lexicographically largest monomial (x-exponent first) is positive.
    BiPoly normalized() const {
        if (is_zero()) return *this;
        BigInt l = 1, g = 0;
        for (const auto& row : c_)
            for (const auto& x : row) l = lcm(l, x.get_den());
        for (const auto& row : c_)
            for (const auto& x : row) g = gcd(g, BigInt(x.get_num() * (l / x.get_den())));
        BigRat s = BigRat(l) / BigRat(g);
        const auto& top = c_.back();
        std::size_t j = top.size();
        while (j > 0 && top[j - 1] == 0) --j;
        if (top[j - 1] < 0) s = -s;
        return s * *this;
    }

    std::string str(const std::string& xv = "x", const std::string& yv = "y") const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;)
            for (std::size_t j = c_[i].size(); j-- > 0;) {
                const BigRat& a = c_[i][j];
                if (a == 0) continue;
                std::string cs = to_string(a);
                bool neg = cs[0] == '-';
                if (neg) cs.erase(0, 1);
                out += out.empty() ? (neg ? "-" : "") : (neg ? "-" : "+");
                std::string mono;
                if (i) mono += xv + (i > 1 ? "^" + std::to_string(i) : "");
                if (j) mono += (mono.empty() ? "" : "*") + yv + (j > 1 ? "^" + std::to_string(j) : "");
                if (mono.empty()) out += cs;
                else out += (cs == "1" ? "" : cs + "*") + mono;
            }
        return out;
    }

private:
    void trim() {
        for (auto& row : c_)
            while (!row.empty() && row.back() == 0) row.pop_back();
        while (!c_.empty() && c_.back().empty()) c_.pop_back();
    }
    Matrix<BigRat> c_;
};

// ---- division and gcd in Q[y][x] ----

inline std::optional<BiPoly> bi_divide_exact(const BiPoly& a, const BiPoly& b) {
    if (b.is_zero()) throw PreconditionError("bivariate division by zero");
    if (a.is_zero()) return BiPoly{};
    const long db = b.deg_x();
    if (a.deg_x() < db) return std::nullopt;
    std::vector<QPoly> r, bx, q(static_cast<std::size_t>(a.deg_x() - db + 1));
    for (long i = 0; i <= a.deg_x(); ++i) r.push_back(a.x_coeff(static_cast<std::size_t>(i)));
    for (long i = 0; i <= db; ++i) bx.push_back(b.x_coeff(static_cast<std::size_t>(i)));
    const QPoly& lb = bx.back();
    for (long k = a.deg_x() - db; k >= 0; --k) {
        const QPoly& top = r[static_cast<std::size_t>(k + db)];
        if (top.is_zero()) continue;
        auto [qq, rr] = divmod(top, lb);
        if (!rr.is_zero()) return std::nullopt;
        q[static_cast<std::size_t>(k)] = qq;
        for (long j = 0; j <= db; ++j) r[static_cast<std::size_t>(k + j)] -= qq * bx[static_cast<std::size_t>(j)];
    }
    for (const auto& x : r)
        if (!x.is_zero()) return std::nullopt;
    return BiPoly::from_x_coeffs(q);
}

/// gcd over Q[y] of the x-coefficients (the pure-y content), monic.
inline QPoly content_y(const BiPoly& f) {
    QPoly g;
    for (long i = 0; i <= f.deg_x(); ++i) g = gcd(g, f.x_coeff(static_cast<std::size_t>(i)));
    return g;
}

inline BiPoly primitive_in_x(const BiPoly& f) {
    if (f.is_zero()) return f;
    QPoly c = content_y(f);
    if (c.degree() <= 0) return f;
    return *bi_divide_exact(f, BiPoly::from_y_poly(c));
}

/// gcd in Q[x, y] up to a constant, by the primitive remainder sequence in x.
inline BiPoly bi_gcd(BiPoly a, BiPoly b) {
    if (a.is_zero()) return b.normalized();
    if (b.is_zero()) return a.normalized();
    QPoly cg = gcd(content_y(a), content_y(b));
    a = primitive_in_x(a);
    b = primitive_in_x(b);
    if (a.deg_x() < b.deg_x()) std::swap(a, b);
    while (!b.is_zero() && b.deg_x() > 0) {
        // pseudo-remainder of a by b
        std::vector<QPoly> r, bx;
        for (long i = 0; i <= a.deg_x(); ++i) r.push_back(a.x_coeff(static_cast<std::size_t>(i)));
        for (long i = 0; i <= b.deg_x(); ++i) bx.push_back(b.x_coeff(static_cast<std::size_t>(i)));
        const QPoly lb = bx.back();
        const long db = b.deg_x();
        while (static_cast<long>(r.size()) - 1 >= db) {
            QPoly lr = r.back();
            const long shift = static_cast<long>(r.size()) - 1 - db;
            for (auto& x : r) x = x * lb;
            for (long j = 0; j <= db; ++j) r[static_cast<std::size_t>(j + shift)] -= lr * bx[static_cast<std::size_t>(j)];
            r.pop_back();
            while (!r.empty() && r.back().is_zero()) r.pop_back();
        }
        a = std::move(b);
        b = primitive_in_x(BiPoly::from_x_coeffs(r));
    }
    BiPoly g = b.is_zero() ? a : BiPoly::constant(1);
    return (BiPoly::from_y_poly(cg) * primitive_in_x(g)).normalized();
}

namespace detail {

using TSeries = std::vector<QPoly>;  // coefficient of t^k is a polynomial in x

inline TSeries tmul(const TSeries& a, const TSeries& b, std::size_t K) {
    TSeries r(K);
    for (std::size_t i = 0; i < a.size() && i < K; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < K; ++j) r[i + j] += a[i] * b[j];
    return r;
}

inline TSeries to_tseries(const BiPoly& f) {
    TSeries r;
    for (long j = 0; j <= f.deg_y(); ++j) r.push_back(f.y_coeff(static_cast<std::size_t>(j)));
    return r;
}

inline BiPoly from_tseries(const TSeries& s) {
    Matrix<BigRat> c;
    for (std::size_t k = 0; k < s.size(); ++k)
        for (long i = 0; i <= s[k].degree(); ++i) {
            if (c.size() <= static_cast<std::size_t>(i)) c.resize(static_cast<std::size_t>(i + 1));
            auto& row = c[static_cast<std::size_t>(i)];
            if (row.size() <= k) row.resize(k + 1, BigRat(0));
            row[k] = s[k].coeff(static_cast<std::size_t>(i));
        }
    return BiPoly(std::move(c));
}

inline std::vector<BigRat> specialization_points(std::size_t n) {
    std::vector<BigRat> pts{0};
    for (long k = 1; pts.size() < n; ++k) {
        pts.emplace_back(k);
        pts.emplace_back(-k);
    }
    return pts;
}

/// Factors a square-free polynomial, primitive in both directions, with deg_x >= 1.
inline std::vector<BiPoly> factor_squarefree_bivariate(const BiPoly& S) {
    const long n = S.deg_x(), m = S.deg_y();
    if (m == 0 || n == 1) return {S.normalized()};

    std::optional<BigRat> y0;
    for (const auto& c : specialization_points(4 * (n + m) + 20)) {
        if (S.x_coeff(static_cast<std::size_t>(n)).eval(c) == 0) continue;
        QPoly sp = S.eval_y(c);
        if (gcd(sp, sp.derivative()).degree() > 0) continue;
        y0 = c;
        break;
    }
    if (!y0) throw ResourceError("no square-free specialisation found for bivariate factorisation");

    auto uni = factor_q(S.eval_y(*y0));
    if (uni.factors.size() <= 1) return {S.normalized()};

    const std::size_t K = static_cast<std::size_t>(m + 1);
    BiPoly sh = S.shift_y(*y0);
    TSeries Ss = to_tseries(sh);
    Ss.resize(K);
    // lc(t) and its inverse mod t^K
    std::vector<BigRat> lc(K, BigRat(0)), lcinv(K, BigRat(0));
    for (std::size_t k = 0; k < K; ++k) lc[k] = Ss[k].coeff(static_cast<std::size_t>(n));
    lcinv[0] = 1 / lc[0];
    for (std::size_t k = 1; k < K; ++k) {
        BigRat acc = 0;
        for (std::size_t j = 1; j <= k; ++j) acc += lc[j] * lcinv[k - j];
        lcinv[k] = -acc * lcinv[0];
    }
    TSeries U(K);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j <= k; ++j) U[k] += Ss[k - j] * lcinv[j];

    std::vector<QPoly> g0;
    for (const auto& [f, mult] : uni.factors) g0.push_back(monic(to_q(f)));
    const std::size_t r = g0.size();
    std::vector<QPoly> sInv(r);
    for (std::size_t i = 0; i < r; ++i) {
        QPoly Qi = QPoly::constant(1);
        for (std::size_t j = 0; j < r; ++j)
            if (j != i) Qi *= g0[j];
        auto [g, s, t] = xgcd(Qi, g0[i]);
        if (g.degree() != 0) throw PreconditionError("non-coprime modular factors in bivariate lifting");
        sInv[i] = s;
    }
    std::vector<TSeries> gs(r);
    for (std::size_t i = 0; i < r; ++i) gs[i] = {g0[i]};
    for (std::size_t k = 1; k < K; ++k) {
        TSeries P{QPoly::constant(1)};
        for (const auto& g : gs) P = tmul(P, g, k + 1);
        QPoly e = U[k] - P[k];
        for (std::size_t i = 0; i < r; ++i) {
            gs[i].resize(k + 1);
            gs[i][k] = e.is_zero() ? QPoly{} : (sInv[i] * e) % g0[i];
        }
    }

    // Recombination.
    std::vector<BiPoly> out;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    BiPoly cur = S;
    std::size_t s = 1;
    while (2 * s <= idx.size()) {
        bool found = false;
        std::vector<bool> pick(idx.size(), false);
        std::fill(pick.begin(), pick.begin() + static_cast<long>(s), true);
        TSeries lcCur;
        {
            QPoly l = cur.x_coeff(static_cast<std::size_t>(cur.deg_x())).compose(QPoly{*y0, BigRat(1)});
            for (long k = 0; k <= l.degree(); ++k) lcCur.push_back(QPoly::constant(l.coeff(static_cast<std::size_t>(k))));
        }
        do {
            TSeries cand = lcCur;
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (pick[i]) cand = tmul(cand, gs[idx[i]], K);
            BiPoly h = from_tseries(cand).shift_y(-*y0);
            h = primitive_in_x(h);
            if (h.deg_x() < 1) continue;
            if (auto q = bi_divide_exact(cur, h)) {
                out.push_back(h.normalized());
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
    if (cur.deg_x() >= 1) out.push_back(cur.normalized());
    return out;
}

}  // namespace detail

struct BiFactor {
    BiPoly factor;  // normalized, irreducible over Q
    unsigned multiplicity = 1;
};

/// Factorisation over Q into irreducible factors with multiplicities (constants dropped).
/// Throws ResourceError when the total degree exceeds `degreeCap`.
inline std::vector<BiFactor> factor_bivariate(const BiPoly& F, long degreeCap = 12) {
    if (F.is_zero()) throw PreconditionError("factorisation of the zero polynomial");
    if (F.total_degree() > degreeCap)
        throw ResourceError("bivariate factorisation degree cap " + std::to_string(degreeCap) + " exceeded (total degree " +
                            std::to_string(F.total_degree()) + ")");
    std::vector<BiFactor> out;
    auto addUni = [&](const QPoly& c, bool inY) {
        if (c.degree() < 1) return;
        for (const auto& [g, mult] : factor_q(c).factors) {
            BiPoly b = inY ? BiPoly::from_y_poly(to_q(g)) : BiPoly::from_x_poly(to_q(g));
            out.push_back({b.normalized(), mult});
        }
    };
    QPoly cy = content_y(F);
    addUni(cy, true);
    BiPoly F1 = primitive_in_x(F);
    BiPoly sw = F1.swapped();
    QPoly cx = content_y(sw);
    addUni(cx, false);
    BiPoly F2 = primitive_in_x(sw).swapped();
    if (F2.deg_x() >= 1) {
        // a square factor of positive x-degree survives every specialisation that keeps the x-degree
        bool squarefree = false;
        for (const auto& c : detail::specialization_points(8)) {
            const QPoly sp = F2.eval_y(c);
            if (sp.degree() == F2.deg_x() && gcd(sp, sp.derivative()).degree() == 0) {
                squarefree = true;
                break;
            }
        }
        BiPoly g = squarefree ? BiPoly::constant(1) : bi_gcd(F2, F2.partial_x());
        BiPoly S = g.total_degree() > 0 ? *bi_divide_exact(F2, g) : F2;
        for (auto& h : detail::factor_squarefree_bivariate(S)) {
            unsigned mult = 0;
            BiPoly rest = F2;
            while (auto q = bi_divide_exact(rest, h)) {
                rest = *q;
                ++mult;
            }
            out.push_back({h, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const BiFactor& a, const BiFactor& b) {
        if (a.factor.total_degree() != b.factor.total_degree()) return a.factor.total_degree() < b.factor.total_degree();
        return a.factor.rows() < b.factor.rows();
    });
    return out;
}

inline bool is_irreducible_bivariate(const BiPoly& F, long degreeCap = 12) {
    auto f = factor_bivariate(F, degreeCap);
    return f.size() == 1 && f[0].multiplicity == 1;
}

// ---- absolute irreducibility ----

namespace detail {

inline QPoly interpolate(const std::vector<BigRat>& xs, const std::vector<BigRat>& ys) {
    const std::size_t n = xs.size();
    std::vector<BigRat> dd = ys;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    QPoly acc = QPoly::constant(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) acc = acc * QPoly{-xs[i], BigRat(1)} + QPoly::constant(dd[i]);
    return acc;
}

inline Matrix<BigRat> mat_identity(std::size_t k, const BigRat& s = 1) {
    Matrix<BigRat> m(k, std::vector<BigRat>(k, BigRat(0)));
    for (std::size_t i = 0; i < k; ++i) m[i][i] = s;
    return m;
}

inline Matrix<BigRat> mat_mul(const Matrix<BigRat>& a, const Matrix<BigRat>& b) {
    const std::size_t k = a.size();
    Matrix<BigRat> r(k, std::vector<BigRat>(k, BigRat(0)));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < k; ++j) r[i][j] += a[i][l] * b[l][j];
        }
    return r;
}

inline BigRat det_q(Matrix<BigRat> a) {
    const std::size_t n = a.size();
    BigRat d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a[i][c] == 0) continue;
            BigRat f = a[i][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
    }
    return d;
}

/// Norm from Q(alpha)[x,y] to Q[x,y] of F(x - s*alpha, y), alpha a root of the monic g,
/// computed by evaluation and interpolation of det F(x0 I - s M, y0 I).
inline BiPoly trager_norm(const BiPoly& F, const QPoly& gMonic, long s) {
    const std::size_t k = static_cast<std::size_t>(gMonic.degree());
    Matrix<BigRat> M(k, std::vector<BigRat>(k, BigRat(0)));  // companion matrix
    for (std::size_t i = 1; i < k; ++i) M[i][i - 1] = 1;
    for (std::size_t i = 0; i < k; ++i) M[i][k - 1] = -gMonic.coeff(i);
    const long dx = static_cast<long>(k) * F.deg_x(), dy = static_cast<long>(k) * F.deg_y();
    std::vector<BigRat> xs, ys;
    for (long i = 0; i <= dx; ++i) xs.emplace_back(i);
    for (long j = 0; j <= dy; ++j) ys.emplace_back(j);
    // rows: for each y value, the polynomial in x
    std::vector<QPoly> byY;
    for (const auto& yv : ys) {
        QPoly fx = F.eval_y(yv);
        std::vector<BigRat> vals;
        for (const auto& xv : xs) {
            Matrix<BigRat> A = mat_identity(k, xv);
            for (std::size_t i = 0; i < k; ++i)
                for (std::size_t j = 0; j < k; ++j) A[i][j] -= BigRat(s) * M[i][j];
            Matrix<BigRat> acc = mat_identity(k, 0);
            for (long e = fx.degree(); e >= 0; --e) {
                acc = mat_mul(acc, A);
                for (std::size_t i = 0; i < k; ++i) acc[i][i] += fx.coeff(static_cast<std::size_t>(e));
            }
            vals.push_back(det_q(acc));
        }
        byY.push_back(interpolate(xs, vals));
    }
    std::vector<QPoly> xcoeffs;
    for (long i = 0; i <= dx; ++i) {
        std::vector<BigRat> vals;
        for (const auto& p : byY) vals.push_back(p.coeff(static_cast<std::size_t>(i)));
        xcoeffs.push_back(interpolate(ys, vals));
    }
    return BiPoly::from_x_coeffs(xcoeffs);
}

inline bool squarefree_full_degree(const QPoly& p, long deg) {
    return p.degree() == deg && gcd(p, p.derivative()).degree() == 0;
}

inline bool bi_squarefree(const BiPoly& N) {
    bool xs = false, ys = false;
    for (const auto& c : specialization_points(4 * (N.deg_x() + N.deg_y()) + 20)) {
        if (!xs && squarefree_full_degree(N.eval_y(c), N.deg_x())) xs = true;
        if (!ys && squarefree_full_degree(N.eval_x(c), N.deg_y())) ys = true;
        if (xs && ys) return true;
    }
    return false;
}

}  // namespace detail

/// Whether a Q-irreducible F stays irreducible over an algebraic closure of Q.
inline bool is_absolutely_irreducible(const BiPoly& F) {
    if (F.deg_x() <= 1 || F.deg_y() <= 1) return true;
    for (const BiPoly& G : {F, F.swapped()}) {
        if (G.deg_y() != 2) continue;
        // Quadratic in y: reducible over the closure iff the discriminant is c * square.
        QPoly A = G.y_coeff(2), B = G.y_coeff(1), C = G.y_coeff(0);
        QPoly disc = B * B - QPoly::constant(4) * A * C;
        if (disc.degree() <= 0) return false;
        for (const auto& [f, mult] : factor_q(disc).factors)
            if (mult % 2) return true;
        return false;
    }
    // Trager: F is absolutely irreducible iff it is irreducible over Q(alpha),
    // where (alpha, c) is a smooth point; choose the smallest such field.
    std::optional<QPoly> best;
    bool swap = false;
    for (int orient = 0; orient < 2; ++orient) {
        BiPoly G = orient ? F.swapped() : F;
        for (const auto& c : detail::specialization_points(12)) {
            QPoly sp = G.eval_y(c);
            if (!detail::squarefree_full_degree(sp, G.deg_x())) continue;
            for (const auto& [f, mult] : factor_q(sp).factors) {
                if (f.degree() == 1) return true;  // smooth rational point
                if (!best || f.degree() < best->degree()) {
                    best = monic(to_q(f));
                    swap = orient == 1;
                }
            }
        }
    }
    if (!best) throw ResourceError("no smooth specialisation for the absolute irreducibility test");
    BiPoly G = swap ? F.swapped() : F;
    for (long s : {1L, -1L, 2L, -2L, 3L, -3L, 5L, 7L}) {
        BiPoly N = detail::trager_norm(G, *best, s);
        if (!detail::bi_squarefree(N)) continue;
        return is_irreducible_bivariate(N, N.total_degree());
    }
    throw ResourceError("no square-free Trager norm found");
}

}  // namespace orbitcancel
