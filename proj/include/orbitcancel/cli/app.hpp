#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>
#include <toml.hpp>

#include "orbitcancel/cli/parse.hpp"
#include "orbitcancel/counterexamples/counterexamples.hpp"
#include "orbitcancel/curves/sigma.hpp"
#include "orbitcancel/tower/tower.hpp"
#include "orbitcancel/uniform/cancellation.hpp"

namespace orbitcancel {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "orbit-cancel/1";

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"cancel-bound", "cancel-verify", "koenigs", "boettcher", "tower",
                                                "heights",      "sigma",         "genus-bound", "counterexample"};
    return names;
}

struct RunConfig {
    std::string command;
    std::string variant;  // counterexample: fib | p2
    std::vector<std::string> maps;
    std::string prime = "auto";
    long truncation = kDefaultTruncation;
    long precision = kDefaultPadicPrecision;
    long height_bound = 100;
    long max_depth = 8;
    std::optional<long> N;
    std::string Y;
    long smax = 8;
    std::string series;
    std::string points;
    double tol = 1e-6;
    std::optional<std::string> C;
    std::string h_delta = "0";
    long level = 6;
    long degree_cap = kDefaultFactorCap;
    long search_bound = 20;
    long n = 0;
    long g_D = 0;
    long d = 2;
    bool branched = false;
    long workers = std::max(1u, std::thread::hardware_concurrency());
    std::string output;

    void validate() const {
        const auto positive = [](long v, const char* name) {
            if (v < 1) throw ConfigError(std::string(name) + " must be positive");
        };
        positive(truncation, "truncation");
        positive(precision, "precision");
        positive(height_bound, "height-bound");
        positive(max_depth, "max-depth");
        positive(smax, "smax");
        positive(level, "level");
        positive(degree_cap, "degree-cap");
        positive(search_bound, "search-bound");
        positive(workers, "workers");
        positive(d, "d");
        if (N) positive(*N, "N");
        if (g_D < 0) throw ConfigError("g-D must be nonnegative");
        if (!(tol > 0)) throw ConfigError("tol must be positive");
        if (prime != "auto") {
            const auto p = prime_value();
            if (!p || !is_prime(*p)) throw ConfigError("prime must be \"auto\" or a prime, got \"" + prime + "\"");
        }
    }
    std::optional<unsigned long> prime_value() const {
        if (prime == "auto") return std::nullopt;
        try {
            std::size_t used = 0;
            const unsigned long p = std::stoul(prime, &used);
            if (used != prime.size()) return std::nullopt;
            return p;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    }
};

namespace detail {

template <class T>
T toml_get(const toml::node& node, const std::string& key) {
    if constexpr (std::is_same_v<T, std::string>) {
        if (auto v = node.value<std::string>()) return *v;
        if (auto v = node.value<int64_t>()) return std::to_string(*v);
    } else if constexpr (std::is_same_v<T, bool>) {
        if (auto v = node.value<bool>()) return *v;
    } else if constexpr (std::is_same_v<T, double>) {
        if (auto v = node.value<double>()) return *v;
    } else {
        if (node.is_integer()) return static_cast<T>(*node.value<int64_t>());
    }
    const auto& src = node.source();
    throw ConfigError("config key \"" + key + "\" has the wrong type (line " + std::to_string(src.begin.line) + ")");
}

}  // namespace detail

/// Applies a TOML table to the config. Keys use the flag spellings; `locked` names keys already
/// given on the command line, which win. Unknown keys are rejected.
inline void apply_toml(RunConfig& cfg, const toml::table& table, const std::function<bool(const std::string&)>& locked = {}) {
    for (const auto& [k, node] : table) {
        const std::string key(k.str());
        if (locked && locked(key)) continue;
        using detail::toml_get;
        if (key == "command") cfg.command = toml_get<std::string>(node, key);
        else if (key == "variant") cfg.variant = toml_get<std::string>(node, key);
        else if (key == "map") {
            cfg.maps.clear();
            if (const auto* arr = node.as_array()) {
                for (const auto& m : *arr) cfg.maps.push_back(toml_get<std::string>(m, key));
            } else {
                cfg.maps.push_back(toml_get<std::string>(node, key));
            }
        } else if (key == "prime") cfg.prime = toml_get<std::string>(node, key);
        else if (key == "truncation") cfg.truncation = toml_get<long>(node, key);
        else if (key == "precision") cfg.precision = toml_get<long>(node, key);
        else if (key == "height-bound") cfg.height_bound = toml_get<long>(node, key);
        else if (key == "max-depth") cfg.max_depth = toml_get<long>(node, key);
        else if (key == "N") cfg.N = toml_get<long>(node, key);
        else if (key == "Y") cfg.Y = toml_get<std::string>(node, key);
        else if (key == "smax") cfg.smax = toml_get<long>(node, key);
        else if (key == "series") cfg.series = toml_get<std::string>(node, key);
        else if (key == "points") cfg.points = toml_get<std::string>(node, key);
        else if (key == "tol") cfg.tol = toml_get<double>(node, key);
        else if (key == "C") cfg.C = toml_get<std::string>(node, key);
        else if (key == "h-delta") cfg.h_delta = toml_get<std::string>(node, key);
        else if (key == "level") cfg.level = toml_get<long>(node, key);
        else if (key == "degree-cap") cfg.degree_cap = toml_get<long>(node, key);
        else if (key == "search-bound") cfg.search_bound = toml_get<long>(node, key);
        else if (key == "n") cfg.n = toml_get<long>(node, key);
        else if (key == "g-D") cfg.g_D = toml_get<long>(node, key);
        else if (key == "d") cfg.d = toml_get<long>(node, key);
        else if (key == "branched") cfg.branched = toml_get<bool>(node, key);
        else if (key == "workers") cfg.workers = toml_get<long>(node, key);
        else if (key == "output") cfg.output = toml_get<std::string>(node, key);
        else {
            const auto& src = node.source();
            throw ConfigError("unknown config key \"" + key + "\" (line " + std::to_string(src.begin.line) + ")");
        }
    }
}

inline void apply_toml_file(RunConfig& cfg, const std::string& path, const std::function<bool(const std::string&)>& locked = {}) {
    toml::table t;
    try {
        t = toml::parse_file(path);
    } catch (const toml::parse_error& e) {
        const auto& src = e.source();
        throw ConfigError("config " + path + ":" + std::to_string(src.begin.line) + ":" + std::to_string(src.begin.column) + ": " +
                          std::string(e.description()));
    }
    apply_toml(cfg, t, locked);
}

namespace detail {

inline std::string str(const BigRat& q) { return to_string(q); }
inline std::string str(const BigInt& z) { return z.get_str(); }

inline Json points_json(const std::vector<PointP1>& pts) {
    Json a = Json::array();
    for (const auto& x : pts) a.push_back(x.str());
    return a;
}

inline Json point_set_json(const PointSet& pts) { return points_json({pts.begin(), pts.end()}); }

inline Json log_json(const LogValue& v) { return Json{{"log_of", str(v.argument)}, {"value", v.value()}}; }

inline Json map_json(const RatMapP1& f) {
    Json F = Json::array(), G = Json::array();
    for (const auto& c : f.F()) F.push_back(str(c));
    for (const auto& c : f.G()) G.push_back(str(c));
    return Json{{"text", f.str()}, {"degree", f.degree()}, {"F", F}, {"G", G}};
}

inline std::vector<RatMapP1> parse_maps(const RunConfig& cfg, std::size_t atLeast = 1) {
    if (cfg.maps.size() < atLeast) throw ConfigError(cfg.command + " needs --map");
    std::vector<RatMapP1> out;
    for (const auto& m : cfg.maps) out.push_back(parse_map(m));
    return out;
}

inline unsigned long choose_prime(const RunConfig& cfg, const RatMapP1& f) {
    if (auto p = cfg.prime_value()) {
        if (!has_good_reduction(f, *p)) throw PreconditionError(f.str() + " has bad reduction at " + std::to_string(*p));
        return *p;
    }
    return auto_prime(f);
}

inline Json uniformization_json(const UniformizationResult& u) {
    Json coeffs = Json::array();
    for (const auto& c : u.u.coeffs()) coeffs.push_back(c.str());
    Json j{{"kind", to_string(u.kind)},
           {"multiplier", u.multiplier.str()},
           {"degree", u.degree},
           {"extension_degree", u.extension_degree},
           {"scale", u.scale ? Json(u.scale->str()) : Json(nullptr)},
           {"determined_order", u.determined_order},
           {"radius", Json{{"r", u.radius.r.str()}, {"rigorous", u.radius.rigorous}}},
           {"rho", u.rho.str()},
           {"rho_rigorous", u.rho_rigorous},
           {"residual_vanishes", u.residual_vanishes},
           {"residual_precision", u.residual_precision},
           {"u", coeffs}};
    return j;
}

inline void flag_uniformization(const UniformizationResult& u, const std::string& where, std::vector<std::string>& flags) {
    if (!u.residual_vanishes) flags.push_back(where + ": functional-equation residual not verified at stored precision");
    if (!u.rho_rigorous) flags.push_back(where + ": injectivity radius relies on coefficients of negative valuation");
    if (!u.radius.rigorous) flags.push_back(where + ": radius r(G) may shrink beyond the truncation");
}

struct Outcome {
    Json inputs = Json::object();
    Json results = Json::object();
    std::vector<std::string> flags;
};

inline Outcome run_cancel_bound(const RunConfig& cfg) {
    const RatMapP1 f = parse_maps(cfg).front();
    const unsigned long p = choose_prime(cfg, f);
    Outcome o;
    o.inputs = Json{{"map", map_json(f)}, {"prime", p}, {"prime_policy", cfg.prime}, {"truncation", cfg.truncation}, {"precision", cfg.precision}};
    const CancellationCertificate c = cancellation_bound(f, p, cfg.truncation, cfg.precision, static_cast<unsigned>(cfg.workers));
    Json disks = Json::array();
    for (const auto& d : c.disks) {
        disks.push_back(Json{{"residue", residue_label(d.xi, p)},
                             {"kind", to_string(d.kind)},
                             {"fixed_point", d.z0 ? Json(d.z0->str()) : Json(nullptr)},
                             {"multiplier", d.multiplier.str()},
                             {"local_degree", d.local_degree},
                             {"extension_degree", d.extension_degree},
                             {"l", d.l},
                             {"l_prime", d.lprime},
                             {"rho", d.rho.str()},
                             {"rigorous", d.rigorous}});
        if (!d.rigorous) o.flags.push_back("cancel-bound: disk " + residue_label(d.xi, p) + " certificate is not rigorous");
    }
    o.results = Json{{"certificate", Json{{"p", c.p}, {"N0", c.N0}, {"N", c.N}, {"rigorous", c.rigorous}, {"disks", disks}}}};
    return o;
}

inline Json collision_json(const CollisionEvent& e) {
    return Json{{"depth", e.depth}, {"a", e.a.str()}, {"b", e.b.str()}, {"pairs", str(e.pairs)}};
}

inline Outcome run_cancel_verify(const RunConfig& cfg) {
    const RatMapP1 f = parse_maps(cfg).front();
    Outcome o;
    unsigned long N = 0;
    Json source;
    if (cfg.N) {
        N = static_cast<unsigned long>(*cfg.N);
        source = "given";
    } else {
        const unsigned long p = choose_prime(cfg, f);
        const CancellationCertificate c = cancellation_bound(f, p, cfg.truncation, cfg.precision, static_cast<unsigned>(cfg.workers));
        N = c.N;
        source = Json{{"certificate_prime", p}, {"rigorous", c.rigorous}};
        if (!c.rigorous) o.flags.push_back("cancel-verify: certificate supplying N is not rigorous");
    }
    o.inputs = Json{{"map", map_json(f)}, {"N", N}, {"N_source", source}, {"height_bound", cfg.height_bound}, {"max_depth", cfg.max_depth}};
    const VerificationReport r = verify_cancellation(f, N, cfg.height_bound, static_cast<unsigned>(cfg.max_depth),
                                                     static_cast<unsigned>(cfg.workers));
    Json byDepth = Json::object();
    for (const auto& [depth, count] : r.pairs_by_depth) byDepth[std::to_string(depth)] = str(count);
    Json violations = Json::array(), deepest = Json::array();
    for (const auto& e : r.violation_witnesses) violations.push_back(collision_json(e));
    for (const auto& e : r.deepest_witnesses) deepest.push_back(collision_json(e));
    o.results = Json{{"points", r.points},          {"colliding_pairs", str(r.colliding_pairs)},
                     {"violations", str(r.violations)}, {"passed", r.violations == 0},
                     {"deepest_collision", r.deepest}, {"pairs_by_depth", byDepth},
                     {"violation_witnesses", violations}, {"deepest_witnesses", deepest}};
    o.flags.push_back("cancel-verify: evidence from a bounded search, not a proof");
    return o;
}

inline std::vector<BigRat> parse_rationals(const std::string& text, const char* what) {
    std::vector<BigRat> out;
    for (const auto& t : split_list(text)) out.push_back(parse_rational(t));
    if (out.empty()) throw ConfigError(std::string(what) + " is empty");
    return out;
}

inline Outcome run_uniformize(const RunConfig& cfg, bool superattracting) {
    const std::string name = superattracting ? "boettcher" : "koenigs";
    Outcome o;
    Json entries = Json::array();
    if (!cfg.series.empty()) {
        if (!cfg.maps.empty()) throw ConfigError(name + " takes either --series or --map, not both");
        const auto p = cfg.prime_value();
        if (!p) throw ConfigError(name + " --series needs an explicit --prime");
        const auto coeffs = parse_rationals(cfg.series, "series");
        Json shown = Json::array();
        for (const auto& c : coeffs) shown.push_back(str(c));
        o.inputs = Json{{"series", shown}, {"prime", *p}, {"truncation", cfg.truncation}, {"precision", cfg.precision}};
        const TruncSeries G = TruncSeries::from_rationals(coeffs, *p, cfg.truncation, cfg.precision);
        const UniformizationResult u = superattracting ? boettcher(G) : koenigs(G);
        flag_uniformization(u, name, o.flags);
        entries.push_back(uniformization_json(u));
        o.results = Json{{"coordinates", entries}};
        return o;
    }
    const RatMapP1 f = parse_maps(cfg).front();
    const unsigned long p = choose_prime(cfg, f);
    o.inputs = Json{{"map", map_json(f)}, {"prime", p}, {"truncation", cfg.truncation}, {"precision", cfg.precision}};
    const FpMapTable table = reduce_mod_p(f, p);
    for (std::size_t xi : table.period_fixed_points()) {
        const GermAtResidueDisk base = germ_at_residue_fixed_point(f, p, xi, table.N0, cfg.truncation, cfg.precision);
        if (base.series[1].is_unit()) continue;
        const Padic z0 = germ_fixed_point(base);
        const GermAtResidueDisk g = germ_at_residue_fixed_point(f, p, xi, table.N0, cfg.truncation, cfg.precision, z0);
        if (!g.series[0].is_zero()) throw ResourceError("precision exhausted while recentring at the fixed point; raise precision");
        if (g.series[1].is_zero() != superattracting) continue;
        const UniformizationResult u = superattracting ? boettcher(g.series) : koenigs(g.series);
        const std::string where = name + " at residue " + residue_label(xi, p);
        flag_uniformization(u, where, o.flags);
        Json e{{"residue", residue_label(xi, p)}, {"iterations", g.iterations}, {"fixed_point", z0.str()}};
        const Json uj = uniformization_json(u);
        for (const auto& [k, v] : uj.items()) e[k] = v;
        entries.push_back(e);
    }
    o.results = Json{{"N0", table.N0}, {"coordinates", entries}};
    return o;
}

inline Outcome run_tower(const RunConfig& cfg) {
    const RatMapP1 f = parse_maps(cfg).front();
    if (cfg.Y.empty()) throw ConfigError("tower needs --Y");
    PointSet Y;
    for (const auto& t : split_list(cfg.Y)) Y.insert(parse_point(t));
    Outcome o;
    o.inputs = Json{{"map", map_json(f)}, {"Y", point_set_json(Y)}, {"smax", cfg.smax}};
    const TowerState st = tower_compute(f, Y, static_cast<unsigned>(cfg.smax), static_cast<unsigned>(cfg.workers));
    Json levels = Json::array();
    for (const auto& L : st.levels) levels.push_back(point_set_json(L));
    const unsigned long p = choose_prime(cfg, f);
    const SeparationReport sep = reduction_separation_bound(f, Y, p, st.levels);
    Json classes = Json::array();
    for (auto c : sep.classes_per_level) classes.push_back(c);
    o.results = Json{{"levels", levels},
                     {"s0", st.s0 ? Json(*st.s0) : Json(nullptr)},
                     {"stable_for_range", st.stable_for_range},
                     {"consistent", tower_is_consistent(st)},
                     {"separation", Json{{"p", sep.p}, {"t", sep.t}, {"Y_separated", sep.Y_separated}, {"classes_per_level", classes}, {"within_bound", sep.within_bound}}}};
    return o;
}

inline Json constants_json(const SemigroupConstants& s) {
    Json j{{"C", str(s.C)}, {"h_delta", str(s.hDelta)}, {"M", str(s.M)}, {"a_M", str(s.aM)}, {"B", str(s.B)}, {"a_M^2_B", str(s.a2B)}, {"valid", s.valid}};
    if (s.B0) j["B0"] = *s.B0;
    if (s.B1) j["B1"] = *s.B1;
    if (s.threshold) j["threshold"] = *s.threshold;
    return j;
}

inline Outcome run_heights(const RunConfig& cfg) {
    const auto maps = parse_maps(cfg);
    Outcome o;
    Json mj = Json::array();
    for (const auto& f : maps) mj.push_back(map_json(f));
    std::vector<PointP1> pts;
    if (!cfg.points.empty())
        for (const auto& t : split_list(cfg.points)) pts.push_back(parse_point(t));
    o.inputs = Json{{"maps", mj}, {"points", points_json(pts)}, {"tol", cfg.tol}};

    Json per = Json::array();
    for (const auto& f : maps) {
        const HeightComparison hc = height_comparison_constants(f);
        Json rows = Json::array();
        for (const auto& x : pts) {
            const CanonicalHeightValue v = canonical_height(f, x, cfg.tol, hc);
            rows.push_back(Json{{"point", x.str()},
                                {"weil_height", log_json(weil_height(x))},
                                {"canonical_height", v.value},
                                {"error_bound", v.error},
                                {"iterations", v.iterations},
                                {"preperiodic", is_preperiodic(f, x, 64)}});
        }
        per.push_back(Json{{"map", f.str()},
                           {"C1", log_json(hc.C1)},
                           {"C2", log_json(hc.C2)},
                           {"B0", hc.B0()},
                           {"points", rows}});
    }
    if (!pts.empty()) o.flags.push_back("heights: canonical heights are floating-point values with the stated error bounds");

    const BigRat C = cfg.C ? parse_rational(*cfg.C) : surrogate_C(maps);
    if (!cfg.C) o.flags.push_back("heights: curve constant C replaced by the point-level surrogate max B0");
    SemigroupConstants s = semigroup_constants(maps, C, parse_rational(cfg.h_delta));
    o.results = Json{{"maps", per}, {"semigroup_constants", constants_json(s)}};
    return o;
}

inline Json curve_json(const CurveOnP1xP1& c) {
    Json j{{"curve", c.str()}, {"bidegree", Json::array({c.deg_x(), c.deg_y()})}, {"infinite_points", to_string(c.infinite_points)}};
    if (!c.verdict_reason.empty()) j["reason"] = c.verdict_reason;
    return j;
}

inline Outcome run_sigma(const RunConfig& cfg) {
    const auto fs = parse_maps(cfg);
    std::vector<QPoly> maps;
    Json mj = Json::array();
    for (const auto& f : fs) {
        if (!f.is_polynomial()) throw PreconditionError("sigma recursion needs polynomial maps; got " + f.str());
        maps.push_back(f.as_polynomial());
        mj.push_back(f.str());
    }
    Outcome o;
    o.inputs = Json{{"maps", mj}, {"level", cfg.level}, {"degree_cap", cfg.degree_cap}, {"search_bound", cfg.search_bound}, {"tol", cfg.tol}};
    SigmaOptions opt;
    opt.degree_cap = cfg.degree_cap;
    opt.search_bound = cfg.search_bound;
    opt.workers = static_cast<unsigned>(cfg.workers);
    const SigmaLedger L = sigma_recursion(maps, static_cast<std::size_t>(cfg.level), opt);

    Json levels = Json::array();
    for (const auto& level : L.levels) {
        Json a = Json::array();
        for (const auto& c : level) a.push_back(curve_json(c));
        levels.push_back(a);
    }
    Json generated = Json::array();
    for (const auto& g : L.generated) {
        generated.push_back(Json{{"curve", g.curve.str()},
                                 {"level", g.level},
                                 {"parent", g.parent},
                                 {"map", g.map},
                                 {"multiplicity", g.multiplicity},
                                 {"etale_x", to_string(g.etale_x.status)},
                                 {"etale_y", to_string(g.etale_y.status)},
                                 {"in_omega", g.in_omega}});
        if (!g.etale_x.etale() || !g.etale_y.etale())
            o.flags.push_back("sigma: component " + g.curve.str() + " not verified etale over infinity");
    }
    Json finite = Json::array();
    for (const auto& c : L.finite_components) finite.push_back(curve_json(c));
    Json T = Json::array();
    for (const auto& [a, b] : L.T) T.push_back(Json::array({a.str(), b.str()}));
    Json unknown = Json::array();
    for (const auto& u : L.unknown_log) {
        unknown.push_back(u);
        o.flags.push_back("sigma: undecided rational-point verdict: " + u);
    }
    if (L.incomplete) o.flags.push_back("sigma: recursion incomplete: " + L.incomplete_reason);
    if (!L.terminated && !L.incomplete) o.flags.push_back("sigma: no termination within " + std::to_string(cfg.level) + " levels");
    if (L.T_search_bounded) o.flags.push_back("sigma: T includes points from a bounded search (height <= " + std::to_string(L.search_bound) + ")");

    Json results{{"levels", levels},
                 {"terminated", L.terminated},
                 {"termination_level", L.termination_level ? Json(*L.termination_level) : Json(nullptr)},
                 {"incomplete", L.incomplete},
                 {"generated", generated},
                 {"finite_components", finite},
                 {"T", T},
                 {"T_search_bounded", L.T_search_bounded},
                 {"unknown", unknown}};
    if (!L.incomplete) {
        const BigRat C = cfg.C ? parse_rational(*cfg.C) : surrogate_C(fs);
        if (!cfg.C) o.flags.push_back("sigma: curve constant C replaced by the point-level surrogate max B0");
        SemigroupConstants s = semigroup_constants(fs, C, parse_rational(cfg.h_delta));
        attach_ledger_bounds(s, L, cfg.tol);
        const ExceptionalSet Z = exceptional_set(L, s);
        results["constants"] = constants_json(s);
        results["exceptional_set"] = Json{{"Z0", Json(L.omega().size())}, {"T", Json(Z.T.size())}, {"threshold", Z.threshold}, {"height_bound", str(Z.height_bound)}};
    }
    o.results = std::move(results);
    return o;
}

inline Outcome run_genus_bound(const RunConfig& cfg) {
    Outcome o;
    o.inputs = Json{{"n", cfg.n}, {"g_D", cfg.g_D}, {"d", cfg.d}, {"branched", cfg.branched}};
    const GenusBound g = genus_lower_bound(cfg.n, cfg.g_D, cfg.d, cfg.branched);
    o.results = Json{{"euler_bound", g.euler_bound}, {"min_genus", g.min_genus()}};
    return o;
}

inline Json matrix_json(const Jacobian2x4& m) {
    Json a = Json::array();
    for (const auto& row : m) {
        Json r = Json::array();
        for (const auto& x : row) r.push_back(str(x));
        a.push_back(r);
    }
    return a;
}

inline Outcome run_counterexample(const RunConfig& cfg) {
    Outcome o;
    if (cfg.variant == "fib") {
        const long n = cfg.n ? cfg.n : 25;
        if (n < 1) throw ConfigError("n must be positive");
        o.inputs = Json{{"variant", "fib"}, {"n", n}};
        const FibonacciReport rep = fibonacci_verify(static_cast<unsigned>(n));
        Json rows = Json::array();
        for (const auto& r : rep.rows)
            rows.push_back(Json{{"n", r.n},
                                {"a_n", Json::array({str(r.point.first), str(r.point.second)})},
                                {"F_n", str(r.F)},
                                {"scale", r.scale ? Json(str(*r.scale)) : Json(nullptr)},
                                {"killed", r.killed},
                                {"alive_before", r.alive_before},
                                {"ok", r.ok()}});
        Json signs = Json::array();
        for (int s : rep.scale_signs) signs.push_back(s);
        o.results = Json{{"base_case_ok", rep.base_case_ok}, {"all_ok", rep.all_ok()}, {"rows", rows}, {"scale_signs", signs}};
        return o;
    }
    if (cfg.variant == "p2") {
        const long n = cfg.n ? cfg.n : 12;
        if (n < 1) throw ConfigError("n must be positive");
        o.inputs = Json{{"variant", "p2"}, {"n", n}};
        Json rows = Json::array();
        bool all = true;
        for (long k = 1; k <= n; ++k) {
            const SmoothnessReport r = p2_smoothness_check(static_cast<unsigned>(k));
            all = all && r.matches_expected && r.rank == 2;
            rows.push_back(Json{{"n", k}, {"jacobian", matrix_json(r.jacobian)}, {"rank", r.rank}, {"matches_expected", r.matches_expected}});
        }
        Json full = Json::array();
        for (const auto& st : p2_iterate_symbolic(static_cast<unsigned>(std::min<long>(n, 3))))
            full.push_back(Json{{"n", st.level}, {"P", st.P.str({"x", "y"})}, {"Q", st.Q.str({"x", "y"})}});
        o.results = Json{{"all_ok", all}, {"expected", matrix_json(expected_smooth_jacobian())}, {"levels", rows}, {"polynomials", full}};
        return o;
    }
    throw ConfigError("counterexample variant must be fib or p2, got \"" + cfg.variant + "\"");
}

[[noreturn]] inline void rethrow_with_context(const std::string& context, const Error& e) {
    const std::string msg = context + ": " + e.what();
    switch (e.kind()) {
        case ErrorKind::config: throw ConfigError(msg);
        case ErrorKind::precondition: throw PreconditionError(msg);
        default: throw ResourceError(msg);
    }
}

}  // namespace detail

/// Runs one subcommand and returns its report. Module errors are rethrown with the
/// subcommand name prepended, keeping their kind.
inline Json dispatch(const RunConfig& cfg) {
    if (std::find(subcommands().begin(), subcommands().end(), cfg.command) == subcommands().end())
        throw ConfigError("unknown subcommand \"" + cfg.command + "\"");
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    detail::Outcome o;
    try {
        if (cfg.command == "cancel-bound") o = detail::run_cancel_bound(cfg);
        else if (cfg.command == "cancel-verify") o = detail::run_cancel_verify(cfg);
        else if (cfg.command == "koenigs") o = detail::run_uniformize(cfg, false);
        else if (cfg.command == "boettcher") o = detail::run_uniformize(cfg, true);
        else if (cfg.command == "tower") o = detail::run_tower(cfg);
        else if (cfg.command == "heights") o = detail::run_heights(cfg);
        else if (cfg.command == "sigma") o = detail::run_sigma(cfg);
        else if (cfg.command == "genus-bound") o = detail::run_genus_bound(cfg);
        else o = detail::run_counterexample(cfg);
    } catch (const Error& e) {
        detail::rethrow_with_context(cfg.command, e);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    Json flags = Json::array();
    for (const auto& f : o.flags) flags.push_back(f);
    return Json{{"schema", kReportSchema},
                {"command", cfg.variant.empty() ? cfg.command : cfg.command + " " + cfg.variant},
                {"inputs", o.inputs},
                {"results", o.results},
                {"rigor", Json{{"rigorous", o.flags.empty()}, {"heuristic_flags", flags}}},
                {"timing", Json{{"seconds", seconds}}}};
}

}  // namespace orbitcancel
