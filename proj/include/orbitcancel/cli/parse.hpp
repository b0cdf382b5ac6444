#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "orbitcancel/dynamics/rat_map.hpp"

namespace orbitcancel {

namespace detail {

/// num / den over Q, used while parsing.
struct RatFn {
    QPoly num = QPoly::constant(1), den = QPoly::constant(1);

    static RatFn of(QPoly n) { return {std::move(n), QPoly::constant(1)}; }
    RatFn reduced() const {
        if (num.is_zero()) return {QPoly{}, QPoly::constant(1)};
        const QPoly g = gcd(num, den);
        QPoly n = num / g, d = den / g;
        const BigRat l = d.lead();
        return {n * (BigRat(1) / l), d * (BigRat(1) / l)};
    }
    friend RatFn operator+(const RatFn& a, const RatFn& b) { return RatFn{a.num * b.den + b.num * a.den, a.den * b.den}.reduced(); }
    friend RatFn operator-(const RatFn& a, const RatFn& b) { return RatFn{a.num * b.den - b.num * a.den, a.den * b.den}.reduced(); }
    friend RatFn operator*(const RatFn& a, const RatFn& b) { return RatFn{a.num * b.num, a.den * b.den}.reduced(); }
};

/// Recursive descent over + - * / ^, parentheses, rational literals and the variable x.
/// Juxtaposition multiplies, so "2x^2" reads as 2*(x^2).
class MapParser {
public:
    explicit MapParser(std::string_view text) : s_(text) {}

    RatFn parse() {
        RatFn r = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return r;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("map parse error at position " + std::to_string(i_ + 1) + ": " + what);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    bool at_factor_start() {
        skip();
        if (i_ >= s_.size()) return false;
        const char c = s_[i_];
        return c == '(' || c == 'x' || c == 'X' || std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }

    RatFn expr() {
        RatFn acc = term();
        for (;;) {
            if (eat('+')) acc = acc + term();
            else if (eat('-')) acc = acc - term();
            else return acc;
        }
    }
    RatFn term() {
        RatFn acc = unary();
        for (;;) {
            skip();
            if (i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == '*') return acc;  // handled by power()
            if (eat('*')) acc = acc * unary();
            else if (eat('/')) {
                const std::size_t at = i_;
                RatFn d = unary();
                if (d.num.is_zero()) {
                    i_ = at;
                    fail("division by zero");
                }
                acc = acc * RatFn{d.den, d.num}.reduced();
            } else if (at_factor_start()) acc = acc * power();
            else return acc;
        }
    }
    RatFn unary() {
        if (eat('-')) {
            RatFn r = unary();
            return {-r.num, r.den};
        }
        if (eat('+')) return unary();
        return power();
    }
    RatFn power() {
        RatFn base = atom();
        skip();
        bool caret = eat('^');
        if (!caret && i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == '*') {
            i_ += 2;
            caret = true;
        }
        if (!caret) return base;
        skip();
        bool negative = eat('-');
        skip();
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected an integer exponent");
        if (i_ - start > 4) fail("exponent too large");
        const unsigned e = static_cast<unsigned>(std::stoul(std::string(s_.substr(start, i_ - start))));
        if (negative) {
            if (base.num.is_zero()) fail("zero raised to a negative power");
            base = RatFn{base.den, base.num}.reduced();
        }
        return RatFn{base.num.pow(e), base.den.pow(e)}.reduced();
    }
    RatFn atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[i_];
        if (c == '(') {
            ++i_;
            RatFn r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == 'x' || c == 'X') {
            ++i_;
            return RatFn::of(QPoly::x());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::size_t start = i_;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
            try {
                return RatFn::of(QPoly::constant(parse_rational(s_.substr(start, i_ - start))));
            } catch (const Error&) {
                i_ = start;
                fail("malformed number");
            }
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

inline std::vector<BigInt> json_integers(const nlohmann::json& a, const char* key) {
    if (!a.contains(key) || !a[key].is_array()) throw ConfigError(std::string("map JSON needs an integer array \"") + key + "\"");
    std::vector<BigInt> out;
    for (const auto& v : a[key]) {
        if (v.is_number_integer()) out.emplace_back(std::to_string(v.get<long long>()));
        else if (v.is_string()) {
            BigInt z;
            if (z.set_str(v.get<std::string>(), 10) != 0) throw ConfigError("map JSON coefficient is not an integer: " + v.get<std::string>());
            out.push_back(z);
        } else {
            throw ConfigError(std::string("map JSON coefficients of \"") + key + "\" must be integers or integer strings");
        }
    }
    return out;
}

}  // namespace detail

/// A univariate rational expression in x such as "(2x^2+1)/(x-3)", or the JSON form
/// {"F": [...], "G": [...]} giving the homogeneous forms by power of X.
inline RatMapP1 parse_map(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(std::string("map JSON: ") + e.what());
        }
        auto F = detail::json_integers(j, "F"), G = detail::json_integers(j, "G");
        try {
            return RatMapP1(F, G);
        } catch (const PreconditionError& e) {
            throw ConfigError(std::string("invalid map: ") + e.what());
        }
    }
    const detail::RatFn r = detail::MapParser(text).parse();
    if (std::max(r.num.degree(), r.den.degree()) < 1) throw ConfigError("invalid map \"" + text + "\": degree 0");
    try {
        return RatMapP1::from_rational_function(r.num, r.den);
    } catch (const PreconditionError& e) {
        throw ConfigError("invalid map \"" + text + "\": " + e.what());
    }
}

/// A rational point of P^1: "a/b", "a", or "inf".
inline PointP1 parse_point(const std::string& text) {
    try {
        return PointP1::parse(text);
    } catch (const Error& e) {
        throw ConfigError("invalid point \"" + text + "\": " + e.what());
    }
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

}  // namespace orbitcancel
