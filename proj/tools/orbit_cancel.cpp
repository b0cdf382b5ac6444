#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "orbitcancel/cli/app.hpp"

using namespace orbitcancel;

int main(int argc, char** argv) {
    RunConfig cfg;
    std::string configPath;
    std::optional<long> N;
    std::optional<std::string> C;

    CLI::App app{"Exact and p-adic tools for orbit cancellation of rational maps of P^1 over Q"};
    app.require_subcommand(1);
    app.add_option("--config", configPath, "TOML file with defaults; flags win")->check(CLI::ExistingFile);
    app.add_option("--map", cfg.maps, "map as a rational expression in x, or JSON {\"F\":[..],\"G\":[..]} (repeatable)");
    app.add_option("--prime", cfg.prime, "\"auto\" or a prime of good reduction");
    app.add_option("--T,--truncation", cfg.truncation, "series truncation order");
    app.add_option("--M,--precision", cfg.precision, "p-adic precision");
    app.add_option("--height-bound", cfg.height_bound, "height bound for the cancellation search");
    app.add_option("--max-depth", cfg.max_depth, "iteration depth for the cancellation search");
    app.add_option("--N", N, "cancellation bound to verify (default: computed)");
    app.add_option("--Y", cfg.Y, "invariant set, comma separated, e.g. \"2,inf\"");
    app.add_option("--smax", cfg.smax, "number of tower levels");
    app.add_option("--series", cfg.series, "germ coefficients a0,a1,... as rationals");
    app.add_option("--points", cfg.points, "points of P^1, comma separated");
    app.add_option("--tol", cfg.tol, "canonical height tolerance");
    app.add_option("--C", C, "height constant C for the semigroup constants");
    app.add_option("--h-delta", cfg.h_delta, "height of the diagonal");
    app.add_option("--level", cfg.level, "maximum Sigma level");
    app.add_option("--degree-cap", cfg.degree_cap, "factorization degree cap");
    app.add_option("--search-bound", cfg.search_bound, "height bound for rational point searches");
    app.add_option("--n", cfg.n, "counterexample level, or cover degree for genus-bound");
    app.add_option("--g-D", cfg.g_D, "genus of the base curve");
    app.add_option("--d", cfg.d, "branch contribution for genus-bound");
    app.add_flag("--branched", cfg.branched, "use the branched variant of the genus bound");
    app.add_option("--workers", cfg.workers, "worker threads");
    app.add_option("--output,-o", cfg.output, "write the report here instead of stdout");

    const std::map<std::string, std::string> blurbs{
        {"cancel-bound", "certified cancellation bound N for a map"},
        {"cancel-verify", "search small-height pairs for cancellation beyond N"},
        {"koenigs", "Koenigs coordinate of an attracting germ or map"},
        {"boettcher", "Boettcher coordinate of a superattracting germ or map"},
        {"tower", "rational preimage tower of a finite invariant set"},
        {"heights", "Weil and canonical heights, comparison constants"},
        {"sigma", "curve recursion and exceptional set for a semigroup of polynomials"},
        {"genus-bound", "genus lower bound for a cover"},
        {"counterexample", "verify the fib or p2 counterexample"},
    };
    for (const auto& name : subcommands()) {
        CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
        sub->fallthrough();
        if (name == "counterexample") sub->add_option("variant", cfg.variant, "fib or p2")->required()->check(CLI::IsMember({"fib", "p2"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ErrorKind::config);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (N) cfg.N = *N;
    if (C) cfg.C = *C;

    try {
        if (!configPath.empty()) {
            apply_toml_file(cfg, configPath, [&](const std::string& key) {
                if (key == "command" || key == "variant") return true;
                const std::string flag = "--" + key;
                try {
                    return app.get_option(flag)->count() > 0;
                } catch (const CLI::OptionNotFound&) {
                    return false;
                }
            });
        }
        const Json report = dispatch(cfg);
        const std::string text = report.dump(2) + "\n";
        if (cfg.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(cfg.output);
            if (!out) throw ConfigError("cannot write " + cfg.output);
            out << text;
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "orbit-cancel: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "orbit-cancel: internal error: " << e.what() << "\n";
        return 1;
    }
}
