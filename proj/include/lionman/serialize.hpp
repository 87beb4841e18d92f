#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bound.hpp"
#include "domain.hpp"
#include "game.hpp"
#include "moduli.hpp"

namespace lionman {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON: points are plain arrays, spaces/domains/bundles are tagged objects.

inline json to_json(const Point& p) { return json(p.coords); }

inline Point point_from_json(const json& j) {
    if (!j.is_array()) throw InvalidInput("point JSON must be an array of numbers");
    return Point(j.get<std::vector<double>>());
}

inline json to_json(const Space& s) {
    switch (s.kind()) {
        case SpaceKind::euclidean: return json{{"kind", "euclidean"}, {"dim", s.dim()}};
        case SpaceKind::lp: return json{{"kind", "lp"}, {"dim", s.dim()}, {"p", s.p()}};
        case SpaceKind::sphere2: return json{{"kind", "sphere2"}};
    }
    throw InvalidInput("unknown space kind");
}

inline Space space_from_json(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "euclidean") return Space::euclidean(j.at("dim").get<std::size_t>());
    if (kind == "lp") return Space::lp(j.at("dim").get<std::size_t>(), j.at("p").get<double>());
    if (kind == "sphere2") return Space::sphere2();
    throw InvalidInput("unknown space kind '" + kind + "'");
}

inline json to_json(const Domain& d) {
    switch (d.shape()) {
        case DomainShape::ball:
            return json{{"shape", "ball"}, {"center", to_json(d.center())}, {"radius", d.radius()}};
        case DomainShape::box:
            return json{{"shape", "box"}, {"lo", to_json(d.lo())}, {"hi", to_json(d.hi())}};
        case DomainShape::spherical_cap:
            return json{{"shape", "cap"},
                        {"pole", to_json(d.pole())},
                        {"angular_radius", d.angular_radius()}};
        case DomainShape::octant:
            return json{{"shape", "octant"}};
    }
    throw InvalidInput("unknown domain shape");
}

inline Domain domain_from_json(const Space& s, const json& j) {
    std::string shape = j.at("shape").get<std::string>();
    if (shape == "ball")
        return Domain::ball(s, point_from_json(j.at("center")), j.at("radius").get<double>());
    if (shape == "box")
        return Domain::box(s, point_from_json(j.at("lo")), point_from_json(j.at("hi")));
    if (shape == "cap")
        return Domain::spherical_cap(s, point_from_json(j.at("pole")),
                                     j.at("angular_radius").get<double>());
    if (shape == "octant") return Domain::octant(s);
    throw InvalidInput("unknown domain shape '" + shape + "'");
}

inline json to_json(const ModuliBundle& m) {
    json j{{"p", m.modulus.p()}, {"b", m.b}};
    if (m.modulus.family() == ModulusFamily::lp) {
        j["family"] = "lp";
    } else {
        j["family"] = "puniform";
        j["c"] = m.modulus.c();
    }
    return j;
}

inline ModuliBundle bundle_from_json(const json& j) {
    std::string family = j.at("family").get<std::string>();
    double b = j.at("b").get<double>();
    if (family == "lp")
        return ModuliBundle(ConvexityModulus::lp_family(j.at("p").get<double>()), b);
    if (family == "puniform")
        return ModuliBundle(
            ConvexityModulus::p_uniform(j.at("p").get<double>(), j.at("c").get<double>()), b);
    throw InvalidInput("unknown bundle family '" + family + "'");
}

inline json to_json(const RateResult& r) {
    json j{{"N", r.N},
           {"eps", r.eps},
           {"log10_gamma", r.log10_gamma},
           {"log10_omega", r.log10_omega},
           {"ceiling_approximated", r.ceiling_approximated}};
    if (r.exact_omega)
        j["exact_omega"] = *r.exact_omega;
    else
        j["exact_omega"] = nullptr;
    return j;
}

inline json to_json(const GameTrace& t) {
    const GameConfig& c = t.config;
    json cfg{{"space", to_json(c.space)},
             {"domain", to_json(c.domain)},
             {"D", c.jump},
             {"alpha", c.alpha},
             {"max_steps", c.max_steps},
             {"seed", c.seed},
             {"lion0", to_json(c.lion0)},
             {"man0", to_json(c.man0)}};
    json steps = json::array();
    for (const auto& s : t.steps)
        steps.push_back(json{{"n", s.n},
                             {"lion", to_json(s.lion)},
                             {"man", to_json(s.man)},
                             {"D_n", s.dist},
                             {"gap", s.gap}});
    json j{{"config", cfg},
           {"strategy", t.strategy.name()},
           {"steps", steps},
           {"terminated_by", t.terminated_by == Termination::capture ? "capture" : "max_steps"}};
    if (t.capture_step)
        j["capture_step"] = *t.capture_step;
    else
        j["capture_step"] = nullptr;
    if (t.strategy.kind == StrategyKind::scripted) {
        json script = json::array();
        for (const auto& p : t.strategy.script) script.push_back(to_json(p));
        j["script"] = script;
    }
    return j;
}

inline GameTrace trace_from_json(const json& j) {
    const json& cfg = j.at("config");
    Space space = space_from_json(cfg.at("space"));
    GameConfig config{space,
                      domain_from_json(space, cfg.at("domain")),
                      cfg.at("D").get<double>(),
                      point_from_json(cfg.at("lion0")),
                      point_from_json(cfg.at("man0")),
                      cfg.at("alpha").get<double>(),
                      cfg.at("max_steps").get<std::uint64_t>(),
                      cfg.at("seed").get<std::uint64_t>()};
    ManStrategy strategy = ManStrategy::parse(j.at("strategy").get<std::string>());
    if (j.contains("script"))
        for (const auto& p : j.at("script")) strategy.script.push_back(point_from_json(p));
    GameTrace t{config, strategy, {}, std::nullopt, Termination::step_limit};
    for (const auto& js : j.at("steps"))
        t.steps.push_back(StepRecord{js.at("n").get<std::uint64_t>(),
                                     point_from_json(js.at("lion")),
                                     point_from_json(js.at("man")),
                                     js.at("D_n").get<double>(),
                                     js.at("gap").get<double>()});
    if (!j.at("capture_step").is_null())
        t.capture_step = j.at("capture_step").get<std::uint64_t>();
    t.terminated_by = j.at("terminated_by").get<std::string>() == "capture"
                          ? Termination::capture
                          : Termination::step_limit;
    return t;
}

// ---------------------------------------------------------------------------
// CSV traces: n, L0..L{d-1}, M0..M{d-1}, D_n, gap_n. Numbers are written with
// 17 significant digits so a re-parse reproduces the exact doubles.

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trace_csv(std::ostream& os, const GameTrace& t) {
    std::size_t d = t.config.space.dim();
    os << "n";
    for (std::size_t i = 0; i < d; ++i) os << ",L" << i;
    for (std::size_t i = 0; i < d; ++i) os << ",M" << i;
    os << ",D_n,gap_n\n";
    for (const auto& s : t.steps) {
        os << s.n;
        for (std::size_t i = 0; i < d; ++i) os << ',' << format_double(s.lion[i]);
        for (std::size_t i = 0; i < d; ++i) os << ',' << format_double(s.man[i]);
        os << ',' << format_double(s.dist) << ',' << format_double(s.gap) << '\n';
    }
}

inline std::vector<StepRecord> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidInput("trace CSV: missing header");
    std::size_t cols = 1 + static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
    if (cols < 5 || (cols - 3) % 2 != 0) throw InvalidInput("trace CSV: malformed header");
    std::size_t d = (cols - 3) / 2;
    std::vector<StepRecord> steps;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != cols) throw InvalidInput("trace CSV: bad row width");
        StepRecord r;
        r.n = std::stoull(cells[0]);
        r.lion.coords.resize(d);
        r.man.coords.resize(d);
        for (std::size_t i = 0; i < d; ++i) r.lion[i] = std::stod(cells[1 + i]);
        for (std::size_t i = 0; i < d; ++i) r.man[i] = std::stod(cells[1 + d + i]);
        r.dist = std::stod(cells[1 + 2 * d]);
        r.gap = std::stod(cells[2 + 2 * d]);
        steps.push_back(std::move(r));
    }
    return steps;
}

// ---------------------------------------------------------------------------
// Flat spec strings used by the command line.
//   space:  euclidean:<dim> | lp:<dim>:<p> | sphere2
//   domain: ball:<center-coords>:<radius> | box:<lo>:<hi> |
//           cap:<pole-coords>:<angle> | octant   (coordinates comma-separated)

inline std::vector<double> parse_coords(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ','))
        v.push_back(detail::parse_real(cell, "coordinate"));
    if (v.empty()) throw InvalidInput("empty coordinate list");
    return v;
}

inline Space parse_space_spec(const std::string& spec) {
    auto parts = detail::split_spec(spec);
    const std::string& name = parts[0];
    if (name == "euclidean") {
        if (parts.size() != 2) throw InvalidInput("space spec: expected euclidean:<dim>");
        double d = detail::parse_real(parts[1], "dim");
        if (d < 1 || d != std::floor(d)) throw InvalidInput("space spec: dim must be a positive integer");
        return Space::euclidean(static_cast<std::size_t>(d));
    }
    if (name == "lp") {
        if (parts.size() != 3) throw InvalidInput("space spec: expected lp:<dim>:<p>");
        double d = detail::parse_real(parts[1], "dim");
        if (d < 1 || d != std::floor(d)) throw InvalidInput("space spec: dim must be a positive integer");
        double p = detail::parse_real(parts[2], "p");
        if (!(p > 1.0)) throw InvalidInput("space spec: p must exceed 1");
        return Space::lp(static_cast<std::size_t>(d), p);
    }
    if (name == "sphere2") {
        if (parts.size() != 1) throw InvalidInput("space spec: sphere2 takes no parameters");
        return Space::sphere2();
    }
    throw InvalidInput("unknown space '" + name + "' (euclidean, lp or sphere2)");
}

inline Domain parse_domain_spec(const Space& s, const std::string& spec) {
    auto parts = detail::split_spec(spec);
    const std::string& name = parts[0];
    if (name == "ball") {
        if (parts.size() != 3) throw InvalidInput("domain spec: expected ball:<center>:<radius>");
        return Domain::ball(s, Point(parse_coords(parts[1])),
                            detail::parse_real(parts[2], "radius"));
    }
    if (name == "box") {
        if (parts.size() != 3) throw InvalidInput("domain spec: expected box:<lo>:<hi>");
        return Domain::box(s, Point(parse_coords(parts[1])), Point(parse_coords(parts[2])));
    }
    if (name == "cap") {
        if (parts.size() != 3) throw InvalidInput("domain spec: expected cap:<pole>:<angle>");
        return Domain::spherical_cap(s, Point(parse_coords(parts[1])),
                                     detail::parse_real(parts[2], "angle"));
    }
    if (name == "octant") {
        if (parts.size() != 1) throw InvalidInput("domain spec: octant takes no parameters");
        return Domain::octant(s);
    }
    throw InvalidInput("unknown domain '" + name + "' (ball, box, cap or octant)");
}

} // namespace lionman
