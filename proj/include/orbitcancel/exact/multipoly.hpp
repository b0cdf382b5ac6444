#pragma once

#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "orbitcancel/exact/bigint.hpp"

namespace orbitcancel {

using Exponent = std::vector<unsigned>;

/// Sparse multivariate polynomial over Q. Terms are keyed by exponent vector
/// (lexicographic order), and zero coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(std::size_t arity = 0) : n_(arity) {}

    static MultiPoly constant(std::size_t arity, const BigRat& c) {
        MultiPoly m(arity);
        m.add_term(Exponent(arity, 0), c);
        return m;
    }
    static MultiPoly variable(std::size_t arity, std::size_t i) {
        if (i >= arity) throw PreconditionError("variable index out of range");
        Exponent e(arity, 0);
        e[i] = 1;
        MultiPoly m(arity);
        m.add_term(e, 1);
        return m;
    }

    std::size_t arity() const { return n_; }
    std::size_t term_count() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exponent, BigRat>& terms() const { return terms_; }

    void add_term(const Exponent& e, const BigRat& c) {
        if (e.size() != n_) throw PreconditionError("exponent arity mismatch");
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace(e, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    BigRat coeff(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? BigRat(0) : it->second;
    }

    unsigned total_degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
        return d;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(const BigRat& s, const MultiPoly& a) {
        MultiPoly r(a.n_);
        if (s == 0) return r;
        for (const auto& [e, c] : a.terms_) r.terms_.emplace(e, s * c);
        return r;
    }

    /// Product; when maxDegree is set, terms of total degree above it are dropped
    /// (a ring homomorphism onto the truncated jet ring).
    static MultiPoly multiply(const MultiPoly& a, const MultiPoly& b, std::optional<unsigned> maxDegree = std::nullopt,
                              std::size_t termBudget = 0) {
        a.check(b);
        MultiPoly r(a.n_);
        Exponent e(a.n_);
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                unsigned deg = 0;
                for (std::size_t i = 0; i < a.n_; ++i) {
                    e[i] = ea[i] + eb[i];
                    deg += e[i];
                }
                if (maxDegree && deg > *maxDegree) continue;
                r.add_term(e, ca * cb);
                if (termBudget && r.terms_.size() > termBudget)
                    throw ResourceError("polynomial term budget of " + std::to_string(termBudget) + " exceeded");
            }
        }
        return r;
    }
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) { return multiply(a, b); }

    MultiPoly truncated(unsigned maxDegree) const {
        MultiPoly r(n_);
        for (const auto& [e, c] : terms_)
            if (std::accumulate(e.begin(), e.end(), 0u) <= maxDegree) r.terms_.emplace(e, c);
        return r;
    }

    MultiPoly partial(std::size_t i) const {
        MultiPoly r(n_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponent f = e;
            --f[i];
            r.add_term(f, c * BigRat(e[i]));
        }
        return r;
    }

    BigRat eval(const std::vector<BigRat>& x) const {
        if (x.size() != n_) throw PreconditionError("evaluation point arity mismatch");
        BigRat acc = 0;
        for (const auto& [e, c] : terms_) {
            BigRat t = c;
            for (std::size_t i = 0; i < n_; ++i)
                if (e[i]) t *= rpow(x[i], e[i]);
            acc += t;
        }
        return acc;
    }

    /// Re-embeds into `arity` variables, sending variable i to variable map[i].
    MultiPoly embed(std::size_t arity, const std::vector<std::size_t>& map) const {
        if (map.size() != n_) throw PreconditionError("embedding map arity mismatch");
        MultiPoly r(arity);
        for (const auto& [e, c] : terms_) {
            Exponent f(arity, 0);
            for (std::size_t i = 0; i < n_; ++i) f[map[i]] += e[i];
            r.add_term(f, c);
        }
        return r;
    }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.n_ == b.n_ && a.terms_ == b.terms_; }

    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [e, c] = *it;
            std::string cs = to_string(c);
            bool neg = cs[0] == '-';
            if (neg) cs.erase(0, 1);
            s += s.empty() ? (neg ? "-" : "") : (neg ? " - " : " + ");
            std::string mono;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!e[i]) continue;
                if (!mono.empty()) mono += "*";
                mono += names.at(i);
                if (e[i] > 1) mono += "^" + std::to_string(e[i]);
            }
            if (mono.empty()) s += cs;
            else s += (cs == "1" ? "" : cs + "*") + mono;
        }
        return s;
    }

private:
    void check(const MultiPoly& o) const {
        if (o.n_ != n_) throw PreconditionError("polynomial arity mismatch");
    }
    std::size_t n_;
    std::map<Exponent, BigRat> terms_;
};

}  // namespace orbitcancel
