#include <gtest/gtest.h>

#include <random>

#include "orbitcancel/cli/app.hpp"

using namespace orbitcancel;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> v) {
    std::vector<BigInt> out;
    for (long x : v) out.emplace_back(x);
    return out;
}

RunConfig config(const std::string& command, std::vector<std::string> maps = {}) {
    RunConfig c;
    c.command = command;
    c.maps = std::move(maps);
    c.workers = 2;
    return c;
}

Json without_timing(Json j) {
    j.erase("timing");
    return j;
}

}  // namespace

TEST(ParseMap, Examples) {
    const RatMapP1 sq = parse_map("x^2");
    EXPECT_EQ(sq.F(), ints({0, 0, 1}));
    EXPECT_EQ(sq.G(), ints({1, 0, 0}));
    const RatMapP1 c = parse_map("x^2-1");
    EXPECT_EQ(c.F(), ints({-1, 0, 1}));
    EXPECT_EQ(c.G(), ints({1, 0, 0}));
    // (2X^2 + Z^2, XZ - 3Z^2)
    const RatMapP1 r = parse_map("(2x^2+1)/(x-3)");
    EXPECT_EQ(r.F(), ints({1, 0, 2}));
    EXPECT_EQ(r.G(), ints({-3, 1, 0}));
}

TEST(ParseMap, SyntaxVariants) {
    EXPECT_EQ(parse_map("2x^2 - 3x + 1/2"), parse_map("2*x**2-3*x+0.5"));
    EXPECT_EQ(parse_map("x^-2"), parse_map("1/x^2"));
    EXPECT_EQ(parse_map("(x+1)^2/(x+1)"), parse_map("x+1"));
    EXPECT_EQ(parse_map("-x^2"), parse_map("0-(x*x)"));
    EXPECT_EQ(parse_map("{\"F\": [\"-1\", 0, 1], \"G\": [1, 0, 0]}"), parse_map("x^2-1"));
}

TEST(ParseMap, Errors) {
    for (const char* bad : {"", "x^", "x+", "(x", "x)", "x/0", "y^2", "1.2.3", "x^2^"}) {
        try {
            parse_map(bad);
            ADD_FAILURE() << bad;
        } catch (const ConfigError& e) {
            EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << bad << ": " << e.what();
        }
    }
    EXPECT_THROW(parse_map("3"), ConfigError);
    EXPECT_THROW(parse_map("x/x"), ConfigError);
    EXPECT_THROW(parse_map("{\"F\": [1, 2]}"), ConfigError);
    EXPECT_THROW(parse_map("{\"F\": [0, 1], \"G\": [0, 1]}"), ConfigError);
}

TEST(ParseMap, RoundTripOnRandomMaps) {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> coef(-9, 9), den(1, 5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BigRat> num, dn;
        const int dn_deg = trial % 3, n_deg = 1 + trial % 4;
        for (int i = 0; i <= n_deg; ++i) num.push_back(make_rat(coef(rng), den(rng)));
        for (int i = 0; i <= dn_deg; ++i) dn.push_back(make_rat(coef(rng), den(rng)));
        const QPoly n(num), d(dn);
        if (d.is_zero() || n.is_zero()) continue;
        RatMapP1 f = RatMapP1({0, 1}, {1, 0});
        try {
            f = RatMapP1::from_rational_function(n, d);
        } catch (const PreconditionError&) {
            continue;
        }
        EXPECT_EQ(parse_map(f.str()), f) << f.str();
    }
}

TEST(Config, TomlKeysAndPrecedence) {
    RunConfig c = config("tower");
    c.smax = 3;
    const toml::table t = toml::parse("map = \"x^2-2\"\nY = \"2,inf\"\nsmax = 6\nprime = 7\ntol = 1e-3\n");
    apply_toml(c, t, [](const std::string& k) { return k == "smax"; });
    EXPECT_EQ(c.maps, std::vector<std::string>{"x^2-2"});
    EXPECT_EQ(c.Y, "2,inf");
    EXPECT_EQ(c.smax, 3);  // locked by a flag
    EXPECT_EQ(c.prime, "7");
    EXPECT_DOUBLE_EQ(c.tol, 1e-3);

    RunConfig d = config("sigma");
    apply_toml(d, toml::parse("map = [\"x^2\", \"x^3\"]\nlevel = 4\n"));
    EXPECT_EQ(d.maps.size(), 2u);
    EXPECT_EQ(d.level, 4);

    EXPECT_THROW(apply_toml(d, toml::parse("bogus = 1\n")), ConfigError);
    EXPECT_THROW(apply_toml(d, toml::parse("level = \"four\"\n")), ConfigError);
}

TEST(Config, Validation) {
    RunConfig c = config("tower", {"x^2"});
    c.smax = 0;
    EXPECT_THROW(dispatch(c), ConfigError);
    RunConfig p = config("cancel-bound", {"x^2"});
    p.prime = "9";
    EXPECT_THROW(dispatch(p), ConfigError);
    EXPECT_THROW(dispatch(config("frobnicate")), ConfigError);
    EXPECT_THROW(dispatch(config("cancel-bound")), ConfigError);
}

TEST(Dispatch, CancelBound) {
    const Json r = dispatch(config("cancel-bound", {"x^2-1"}));
    EXPECT_EQ(r["schema"], "orbit-cancel/1");
    EXPECT_EQ(r["results"]["certificate"]["p"], 5);
    EXPECT_EQ(r["results"]["certificate"]["N0"], 2);
    RunConfig bad = config("cancel-bound", {"x^2/3"});
    bad.prime = "3";
    EXPECT_THROW(dispatch(bad), PreconditionError);
}

TEST(Dispatch, Tower) {
    RunConfig c = config("tower", {"x^2-2"});
    c.Y = "2,inf";
    c.smax = 6;
    const Json r = dispatch(c);
    EXPECT_EQ(r["results"]["s0"], 2);
    EXPECT_EQ(r["results"]["stable_for_range"], true);
    EXPECT_EQ(r["results"]["levels"][2], Json::array({"-2", "0", "2", "inf"}));
}

TEST(Dispatch, Counterexamples) {
    RunConfig f = config("counterexample");
    f.variant = "fib";
    f.n = 5;
    const Json r = dispatch(f);
    EXPECT_EQ(r["results"]["rows"].size(), 5u);
    EXPECT_EQ(r["results"]["all_ok"], true);
    EXPECT_EQ(r["command"], "counterexample fib");

    RunConfig p = config("counterexample");
    p.variant = "p2";
    p.n = 4;
    EXPECT_EQ(dispatch(p)["results"]["all_ok"], true);
    p.variant = "p3";
    EXPECT_THROW(dispatch(p), ConfigError);
}

TEST(Dispatch, RationalsAreStrings) {
    RunConfig c = config("heights", {"x^2"});
    c.C = "1";
    const Json r = dispatch(c);
    EXPECT_EQ(r["results"]["semigroup_constants"]["M"], "16");
    EXPECT_EQ(r["results"]["semigroup_constants"]["a_M^2_B"], "48/49");
    EXPECT_EQ(r["rigor"]["rigorous"], true);
}

TEST(Dispatch, HeuristicFlagsSurface) {
    RunConfig c = config("heights", {"x^2-1"});
    c.points = "0,1/2";
    const Json r = dispatch(c);
    EXPECT_EQ(r["rigor"]["rigorous"], false);
    EXPECT_FALSE(r["rigor"]["heuristic_flags"].empty());
    EXPECT_EQ(r["results"]["maps"][0]["points"][0]["preperiodic"], true);
    EXPECT_EQ(r["results"]["maps"][0]["points"][1]["preperiodic"], false);
}

TEST(Dispatch, Deterministic) {
    RunConfig c = config("sigma", {"x^2", "x^3"});
    c.level = 4;
    c.workers = 3;
    const std::string a = without_timing(dispatch(c)).dump();
    c.workers = 1;
    const std::string b = without_timing(dispatch(c)).dump();
    EXPECT_EQ(a, b);
    RunConfig v = config("cancel-verify", {"x^2-1"});
    v.height_bound = 15;
    v.max_depth = 4;
    EXPECT_EQ(without_timing(dispatch(v)).dump(), without_timing(dispatch(v)).dump());
}

TEST(Dispatch, UniformizeRoutes) {
    RunConfig k = config("koenigs");
    k.series = "0,5,1";
    k.prime = "5";
    const Json r = dispatch(k);
    EXPECT_EQ(r["results"]["coordinates"][0]["kind"], "koenigs");
    EXPECT_EQ(r["results"]["coordinates"][0]["residual_vanishes"], true);
    k.prime = "auto";
    EXPECT_THROW(dispatch(k), ConfigError);

    RunConfig b = config("boettcher", {"x^2"});
    b.prime = "3";
    const Json s = dispatch(b);
    ASSERT_EQ(s["results"]["coordinates"].size(), 2u);  // residues 0 and inf
    for (const auto& e : s["results"]["coordinates"]) EXPECT_EQ(e["degree"], 2);
}

TEST(Dispatch, GenusBound) {
    RunConfig g = config("genus-bound");
    g.n = 2;
    g.g_D = 0;
    g.d = 3;
    const Json r = dispatch(g);
    EXPECT_EQ(r["results"]["euler_bound"], genus_lower_bound(2, 0, 3).euler_bound);
}
