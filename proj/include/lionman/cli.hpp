#pragma once

#include <cstdint>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bound.hpp"
#include "game.hpp"
#include "serialize.hpp"
#include "verify.hpp"

namespace lionman {

enum class OutputFormat { csv, json_fmt };

/// Everything a subcommand invocation carries. Round-trips through
/// to_args() -> parse_args().
struct CliConfig {
    std::string subcommand;          // simulate | bound | verify
    std::string space_spec = "euclidean:2";
    std::string domain_spec;         // simulate / verify; empty = default per space
    std::string family_spec;         // bound / verify; empty = derived from the space
    double jump = 0.1;               // -D
    double diameter = 0.0;           // -b (bound subcommand)
    double alpha = 0.01;
    std::string strategy = "stationary";
    std::uint64_t seed = 0;
    std::uint64_t max_steps = 1000000;
    std::uint64_t samples = 100000;
    double phi_scale = 1.0;          // verify: deliberate modulus corruption factor
    std::string checks = "all";
    std::string out_path;            // empty: stdout (bound/verify) or trace.csv (simulate)
    OutputFormat format = OutputFormat::csv;

    bool operator==(const CliConfig&) const = default;

    std::vector<std::string> to_args() const {
        std::vector<std::string> v{subcommand, "--space", space_spec};
        auto num = [](double x) { return format_double(x); };
        if (subcommand == "simulate") {
            v.insert(v.end(), {"--domain", domain_spec, "-D", num(jump), "--alpha", num(alpha),
                               "--strategy", strategy, "--seed", std::to_string(seed),
                               "--max-steps", std::to_string(max_steps)});
            if (!out_path.empty()) v.insert(v.end(), {"--out", out_path});
            v.insert(v.end(), {"--format", format == OutputFormat::csv ? "csv" : "json"});
        } else if (subcommand == "bound") {
            v.insert(v.end(), {"-D", num(jump), "-b", num(diameter), "--alpha", num(alpha)});
            if (!family_spec.empty()) v.insert(v.end(), {"--family", family_spec});
            if (!out_path.empty()) v.insert(v.end(), {"--out", out_path});
        } else if (subcommand == "verify") {
            v.insert(v.end(), {"--samples", std::to_string(samples), "--seed",
                               std::to_string(seed), "--checks", checks, "--phi-scale",
                               num(phi_scale)});
            if (!domain_spec.empty()) v.insert(v.end(), {"--domain", domain_spec});
            if (!out_path.empty()) v.insert(v.end(), {"--out", out_path});
        }
        return v;
    }
};

/// Raised for malformed command lines; carries the text already shown.
struct UsageError : Error {
    using Error::Error;
};

/// Raised by --help after the help text has been printed.
struct HelpRequested : Error {
    using Error::Error;
};

inline CliConfig parse_args(const std::vector<std::string>& args) {
    CliConfig cfg;
    CLI::App app{"Pursuit games, convexity moduli and capture bounds on geodesic spaces"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "Run one pursuit game and write its trace");
    sim->add_option("--space", cfg.space_spec, "Space spec: euclidean:<dim> | lp:<dim>:<p> | sphere2")
        ->required();
    sim->add_option("--domain", cfg.domain_spec,
                    "Domain spec: ball:<center>:<radius> | box:<lo>:<hi> | cap:<pole>:<angle>")
        ->required();
    sim->add_option("-D,--jump", cfg.jump, "Per-step travel bound D")->required();
    sim->add_option("--alpha", cfg.alpha, "Capture tolerance")->capture_default_str();
    sim->add_option("--strategy", cfg.strategy,
                    "Adversary: stationary | random-walk | flee | boundary-orbit | scripted")
        ->capture_default_str();
    sim->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sim->add_option("--max-steps", cfg.max_steps, "Step limit")->capture_default_str();
    sim->add_option("--out", cfg.out_path, "Trace file (default trace.csv)");
    std::string fmt = "csv";
    sim->add_option("--format", fmt, "Trace format: csv | json")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));

    auto* bnd = app.add_subcommand("bound", "Evaluate the guaranteed capture-step bound");
    bnd->add_option("--space", cfg.space_spec, "Space spec (selects the moduli family)");
    bnd->add_option("--family", cfg.family_spec,
                    "Family spec: lp:<p> | puniform:<p>:<c> | cat:<kappa>:<diam>:<slack>");
    bnd->add_option("-D,--jump", cfg.jump, "Per-step travel bound D")->required();
    bnd->add_option("-b,--diameter", cfg.diameter, "Domain diameter bound b")->required();
    bnd->add_option("--alpha", cfg.alpha, "Capture tolerance")->capture_default_str();
    bnd->add_option("--out", cfg.out_path, "Write the JSON result here instead of stdout");

    auto* ver = app.add_subcommand("verify", "Run the sampled definitional checks");
    ver->add_option("--space", cfg.space_spec, "Space spec")->capture_default_str();
    ver->add_option("--domain", cfg.domain_spec, "Sampling domain (default: unit ball / pi/8 cap)");
    ver->add_option("--samples", cfg.samples, "Samples per check")->capture_default_str();
    ver->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    ver->add_option("--checks", cfg.checks,
                    "Comma-separated subset of uc,puc,uu,shadow,ubtw,btw,octant,goebel,metastable "
                    "or 'all'")
        ->capture_default_str();
    ver->add_option("--phi-scale", cfg.phi_scale,
                    "Scale factor applied to the uniqueness modulus (sabotage hook)")
        ->capture_default_str();
    ver->add_option("--out", cfg.out_path, "Write the JSON reports here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e);
        throw HelpRequested("help");
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        throw UsageError(e.what());
    }

    if (sim->parsed()) {
        cfg.subcommand = "simulate";
        cfg.format = fmt == "json" ? OutputFormat::json_fmt : OutputFormat::csv;
    } else if (bnd->parsed()) {
        cfg.subcommand = "bound";
    } else {
        cfg.subcommand = "verify";
    }
    return cfg;
}

namespace detail {

inline ModuliBundle bundle_for(const CliConfig& cfg, const Space& space, double b) {
    if (!cfg.family_spec.empty()) return ModuliBundle::parse(cfg.family_spec, b);
    switch (space.kind()) {
        case SpaceKind::euclidean: return ModuliBundle(ConvexityModulus::lp_family(2.0), b);
        case SpaceKind::lp: return ModuliBundle(ConvexityModulus::lp_family(space.p()), b);
        case SpaceKind::sphere2: {
            // unit-curvature comparison parameter for a domain of diameter b
            double slack = std::numbers::pi / 2.0 - b;
            return ModuliBundle(ConvexityModulus::p_uniform(2.0, cat_kappa_parameter(1.0, b, slack)),
                                b);
        }
    }
    throw InvalidInput("unknown space kind");
}

inline Domain default_verify_domain(const Space& space) {
    if (space.is_normed()) {
        Point c(std::vector<double>(space.dim(), 0.0));
        return Domain::ball(space, c, 1.0);
    }
    return Domain::spherical_cap(space, Point{0.0, 0.0, 1.0}, std::numbers::pi / 8.0);
}

inline bool check_selected(const std::string& checks, const std::string& name) {
    if (checks == "all") return true;
    std::string token;
    for (char ch : checks + ",") {
        if (ch == ',') {
            if (token == name) return true;
            token.clear();
        } else {
            token.push_back(ch);
        }
    }
    return false;
}

} // namespace detail

inline int run_simulate(const CliConfig& cfg, std::ostream& out) {
    Space space = parse_space_spec(cfg.space_spec);
    Domain dom = parse_domain_spec(space, cfg.domain_spec);
    Rng pos_rng(cfg.seed);
    GameConfig gc{space, dom, cfg.jump, dom.sample(pos_rng), dom.sample(pos_rng),
                  cfg.alpha, cfg.max_steps, cfg.seed};
    ManStrategy strategy = ManStrategy::parse(cfg.strategy);
    if (strategy.kind == StrategyKind::scripted && strategy.script.empty()) {
        // default script: a seeded tour of the domain
        Rng sr = Rng(cfg.seed).fork(0x5c17);
        for (int i = 0; i < 32; ++i) strategy.script.push_back(dom.sample(sr));
    }
    GameTrace trace = run_game(gc, strategy);

    std::string path = cfg.out_path.empty() ? "trace.csv" : cfg.out_path;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidInput("cannot open output file '" + path + "'");
    if (cfg.format == OutputFormat::csv)
        write_trace_csv(f, trace);
    else
        f << to_json(trace).dump(2) << '\n';

    if (trace.capture_step)
        out << "capture at step " << *trace.capture_step << "\n";
    else
        out << "no capture within " << cfg.max_steps << " steps\n";
    out << "trace written to " << path << "\n";
    return 0;
}

inline int run_bound(const CliConfig& cfg, std::ostream& out) {
    ModuliBundle bundle = detail::bundle_for(cfg, parse_space_spec(cfg.space_spec), cfg.diameter);
    RateResult r = compute_omega(bundle, cfg.jump, cfg.diameter, cfg.alpha);
    std::string text = to_json(r).dump(2) + "\n";
    if (cfg.out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw InvalidInput("cannot open output file '" + cfg.out_path + "'");
        f << text;
    }
    return 0;
}

inline int run_verify(const CliConfig& cfg, std::ostream& out) {
    Space space = parse_space_spec(cfg.space_spec);
    Domain dom = cfg.domain_spec.empty() ? detail::default_verify_domain(space)
                                         : parse_domain_spec(space, cfg.domain_spec);
    double full_b = dom.diameter_bound();
    double half_b = 0.5 * full_b;
    ModuliBundle bundle = detail::bundle_for(cfg, space, full_b);
    double scale = cfg.phi_scale;
    PhiFn phi = [bundle, scale](double e, double b) { return scale * bundle.phi(e, b); };
    ThetaFn theta = [phi](double e, double a, double b) { return theta_from_phi(phi, e, a, b); };
    std::uint64_t n = cfg.samples;
    std::uint64_t seed = cfg.seed;

    std::vector<std::future<SampleReport>> jobs;
    auto want = [&](const char* name) { return detail::check_selected(cfg.checks, name); };
    if (space.is_normed() && want("uc"))
        jobs.push_back(std::async(std::launch::async, [=] {
            return check_uniform_convexity(space, dom,
                                           ConvexityModulus::lp_family(space.p()), n, seed);
        }));
    if (want("puc")) {
        if (space.kind() == SpaceKind::euclidean)
            jobs.push_back(std::async(std::launch::async, [=] {
                return check_p_uniform_convexity(space, dom, 2.0, 2.0, n, seed, true);
            }));
        if (space.kind() == SpaceKind::sphere2)
            jobs.push_back(std::async(std::launch::async, [=] {
                double c = cat_kappa_parameter(1.0, dom.diameter_bound(),
                                               std::numbers::pi / 2.0 - dom.diameter_bound());
                return check_p_uniform_convexity(space, dom, 2.0, c, n, seed, false);
            }));
    }
    if (want("uu"))
        jobs.push_back(std::async(std::launch::async, [=] {
            return check_uniform_uniqueness(space, dom, phi, half_b, n, seed);
        }));
    if (want("shadow"))
        jobs.push_back(std::async(std::launch::async, [=] {
            return check_lemma_segment_shadow(space, dom, phi, full_b, n, seed);
        }));
    if (want("ubtw"))
        jobs.push_back(std::async(std::launch::async, [=] {
            return check_uniform_betweenness(space, dom, theta, full_b, n, seed);
        }));
    if (want("btw"))
        jobs.push_back(std::async(std::launch::async, [=] {
            return check_betweenness_exact(space, dom, n, seed);
        }));
    if (space.is_normed() && space.dim() == 2 && want("goebel"))
        jobs.push_back(std::async(std::launch::async, [=] {
            std::vector<double> grid;
            for (int i = 1; i <= 19; ++i) grid.push_back(0.1 * i);
            auto dhat = [=](double e) { return empirical_convexity_modulus(space, e); };
            return check_goebel_kirk(dhat, grid);
        }));
    if (want("metastable"))
        jobs.push_back(std::async(std::launch::async, [=] {
            // property sweep over random nonincreasing sequences
            SampleReport rep;
            rep.check_name = "metastable_index";
            rep.seed = seed;
            rep.samples_requested = 100;
            Rng master(seed);
            for (int i = 0; i < 100; ++i) {
                Rng r = master.fork(static_cast<std::uint64_t>(i));
                std::vector<double> a;
                double v = 1.0;
                for (int j = 0; j < 4000; ++j) {
                    a.push_back(v);
                    v = std::max(0.0, v - r.uniform(0.0, 0.01));
                }
                double tau = r.uniform(0.02, 0.2);
                std::uint64_t gk = 1 + r.below(10);
                auto g = [gk](std::uint64_t) { return gk; };
                std::uint64_t idx = metastable_index(a, 1.0, tau, g);
                double mx = a[idx], mn = a[idx];
                for (std::uint64_t j = idx; j <= idx + gk; ++j) {
                    mx = std::max(mx, a[j]);
                    mn = std::min(mn, a[j]);
                }
                double bound_steps = std::ceil(1.0 / tau);
                bool within = idx <= static_cast<std::uint64_t>(bound_steps) * gk;
                rep.admit(within ? tau - (mx - mn) : -1.0, [&] {
                    return json{{"i", i}, {"tau", tau}, {"g", gk}, {"index", idx}};
                });
            }
            rep.finalize();
            return rep;
        }));

    json reports = json::array();
    std::uint64_t total_violations = 0;
    for (auto& job : jobs) {
        SampleReport rep = job.get();
        total_violations += rep.violations;
        reports.push_back(rep.to_json());
    }
    if (space.kind() == SpaceKind::sphere2 && want("octant")) {
        OctantReport oct = octant_counterexample();
        reports.push_back(oct.to_json());
        if (!oct.strict_convexity_fails) total_violations += 1;
    }

    std::string text = reports.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out_path, std::ios::binary);
        if (!f) throw InvalidInput("cannot open output file '" + cfg.out_path + "'");
        f << text;
        out << "reports written to " << cfg.out_path << "\n";
    }
    out << "total violations: " << total_violations << "\n";
    return total_violations == 0 ? 0 : 2;
}

/// Dispatch. Exit codes: 0 success, 1 usage error, 2 verification
/// violations, 3 numeric failure.
inline int run(const CliConfig& cfg, std::ostream& out = std::cout) {
    if (cfg.subcommand == "simulate") return run_simulate(cfg, out);
    if (cfg.subcommand == "bound") return run_bound(cfg, out);
    if (cfg.subcommand == "verify") return run_verify(cfg, out);
    throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
}

inline int cli_main(const std::vector<std::string>& args) {
    try {
        return run(parse_args(args));
    } catch (const HelpRequested&) {
        return 0;
    } catch (const UsageError&) {
        return 1;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace lionman
