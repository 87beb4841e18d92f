#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "rng.hpp"

namespace lionman {

enum class StrategyKind { stationary, random_walk, flee, boundary_orbit, scripted };

/// Adversary policy. The rules only require each move to stay inside the
/// domain within jump distance D; the built-ins span passive, random,
/// greedy-evasive, boundary-cycling and externally scripted behaviour.
/// Every proposal is repaired through clamp_move, so the two rule
/// constraints hold whatever the policy suggests.
struct ManStrategy {
    StrategyKind kind = StrategyKind::stationary;
    std::vector<Point> script;

    static ManStrategy stationary() { return {StrategyKind::stationary, {}}; }
    static ManStrategy random_walk() { return {StrategyKind::random_walk, {}}; }
    static ManStrategy flee() { return {StrategyKind::flee, {}}; }
    static ManStrategy boundary_orbit() { return {StrategyKind::boundary_orbit, {}}; }
    static ManStrategy scripted(std::vector<Point> targets) {
        return {StrategyKind::scripted, std::move(targets)};
    }

    static ManStrategy parse(const std::string& name) {
        if (name == "stationary") return stationary();
        if (name == "random-walk") return random_walk();
        if (name == "flee") return flee();
        if (name == "boundary-orbit") return boundary_orbit();
        if (name == "scripted") return scripted({});
        throw InvalidInput("unknown strategy '" + name +
                           "' (stationary, random-walk, flee, boundary-orbit, scripted)");
    }

    std::string name() const {
        switch (kind) {
            case StrategyKind::stationary: return "stationary";
            case StrategyKind::random_walk: return "random-walk";
            case StrategyKind::flee: return "flee";
            case StrategyKind::boundary_orbit: return "boundary-orbit";
            case StrategyKind::scripted: return "scripted";
        }
        return "stationary";
    }

    bool operator==(const ManStrategy&) const = default;
};

struct GameConfig {
    Space space;
    Domain domain;
    double jump;             // D, the per-step travel bound for both players
    Point lion0, man0;
    double alpha;            // capture tolerance on the gap d(L_{n+1}, M_n)
    std::uint64_t max_steps = 1000000;
    std::uint64_t seed = 0;

    bool operator==(const GameConfig&) const = default;
};

struct StepRecord {
    std::uint64_t n = 0;
    Point lion, man;    // L_n, M_n
    double dist = 0.0;  // D_n = d(L_n, M_n)
    double gap = 0.0;   // d(L_{n+1}, M_n)

    bool operator==(const StepRecord&) const = default;
};

enum class Termination { capture, step_limit };

struct GameTrace {
    GameConfig config;
    ManStrategy strategy;
    std::vector<StepRecord> steps;
    std::optional<std::uint64_t> capture_step;
    Termination terminated_by = Termination::step_limit;
};

/// One pursuit move: along the geodesic toward the man, by min{D, d(L, M)}.
inline Point lion_step(const Space& s, const Point& lion, const Point& man, double D) {
    if (!(D > 0.0)) throw InvalidInput("lion_step: D must be positive");
    double d = s.distance(lion, man);
    if (d == 0.0) return lion;
    return s.interpolate(lion, man, std::min(D, d) / d);
}

/// Per-game runtime state of a strategy: its substream of randomness, the
/// orbit phase, and the script cursor.
class ManState {
public:
    ManState(ManStrategy strategy, const GameConfig& cfg)
        : strategy_(std::move(strategy)),
          space_(cfg.space),
          domain_(cfg.domain),
          rng_(Rng(cfg.seed).fork(0x6d616e)) {
        if (strategy_.kind == StrategyKind::boundary_orbit) init_orbit(cfg.man0);
    }

    /// The man's move: observes the lion's new position, proposes a target,
    /// and lands wherever clamp_move allows. Throws StrategyExhausted when a
    /// scripted policy runs out; the engine then holds position.
    Point step(const Point& lion_new, const Point& man, double D) {
        switch (strategy_.kind) {
            case StrategyKind::stationary:
                return man;
            case StrategyKind::random_walk: {
                auto dir = rng_.gaussian_vector(space_.dim());
                Point target = space_.offset(man, dir, D);
                return domain_.clamp_move(man, target, D);
            }
            case StrategyKind::flee: {
                if (space_.distance(lion_new, man) <= space_.tol()) return man;
                Point target = space_.extend_past(lion_new, man, D);
                return domain_.clamp_move(man, target, D);
            }
            case StrategyKind::boundary_orbit: {
                orbit_u_ += orbit_du(D);
                return domain_.clamp_move(man, orbit_target(orbit_u_), D);
            }
            case StrategyKind::scripted: {
                if (script_pos_ >= strategy_.script.size())
                    throw StrategyExhausted("scripted adversary consumed its move list");
                return domain_.clamp_move(man, strategy_.script[script_pos_++], D);
            }
        }
        return man;
    }

private:
    // Orbit geometry: a ring just inside the boundary, walked at metric
    // speed ~D. Supported on balls (dim >= 2), boxes (dim >= 2) and caps.
    void init_orbit(const Point& start) {
        switch (domain_.shape()) {
            case DomainShape::ball: {
                if (space_.dim() < 2)
                    throw InvalidInput("boundary orbit needs dimension >= 2");
                double dx = start[0] - domain_.center()[0];
                double dy = start[1] - domain_.center()[1];
                orbit_u_ = (dx * dx + dy * dy > 0.0) ? std::atan2(dy, dx) : 0.0;
                return;
            }
            case DomainShape::box: {
                if (space_.dim() < 2)
                    throw InvalidInput("boundary orbit needs dimension >= 2");
                orbit_u_ = 0.0;
                return;
            }
            case DomainShape::spherical_cap: {
                cap_basis();
                double h1 = 0.0, h2 = 0.0;
                for (int i = 0; i < 3; ++i) {
                    h1 += start[i] * e1_[i];
                    h2 += start[i] * e2_[i];
                }
                orbit_u_ = (h1 * h1 + h2 * h2 > 0.0) ? std::atan2(h2, h1) : 0.0;
                return;
            }
            case DomainShape::octant:
                throw InvalidInput("the octant is not a playing domain");
        }
    }

    double orbit_du(double D) const {
        switch (domain_.shape()) {
            case DomainShape::ball:
                return D / (kInset * domain_.radius());
            case DomainShape::box:
                return D;  // u is arclength along the perimeter
            case DomainShape::spherical_cap:
                return D / std::sin(kInset * domain_.angular_radius());
            default:
                return D;
        }
    }

    Point orbit_target(double u) const {
        switch (domain_.shape()) {
            case DomainShape::ball: {
                std::vector<double> dir(space_.dim(), 0.0);
                dir[0] = std::cos(u);
                dir[1] = std::sin(u);
                return space_.offset(domain_.center(), dir, kInset * domain_.radius());
            }
            case DomainShape::box: {
                const Point& lo = domain_.lo();
                const Point& hi = domain_.hi();
                double w = hi[0] - lo[0], h = hi[1] - lo[1];
                double ix = 0.01 * w, iy = 0.01 * h;
                double x0 = lo[0] + ix, x1 = hi[0] - ix;
                double y0 = lo[1] + iy, y1 = hi[1] - iy;
                double ww = x1 - x0, hh = y1 - y0;
                double per = 2.0 * (ww + hh);
                double s = std::fmod(u, per);
                if (s < 0.0) s += per;
                Point p = lo;
                for (std::size_t i = 0; i < p.dim(); ++i) p[i] = 0.5 * (lo[i] + hi[i]);
                if (s < ww) {
                    p[0] = x0 + s; p[1] = y0;
                } else if (s < ww + hh) {
                    p[0] = x1; p[1] = y0 + (s - ww);
                } else if (s < 2.0 * ww + hh) {
                    p[0] = x1 - (s - ww - hh); p[1] = y1;
                } else {
                    p[0] = x0; p[1] = y1 - (s - 2.0 * ww - hh);
                }
                return p;
            }
            case DomainShape::spherical_cap: {
                double rho = kInset * domain_.angular_radius();
                const Point& n = domain_.pole();
                Point r{{0.0, 0.0, 0.0}};
                for (int i = 0; i < 3; ++i)
                    r[i] = std::cos(rho) * n[i] +
                           std::sin(rho) * (std::cos(u) * e1_[i] + std::sin(u) * e2_[i]);
                double nn = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
                for (int i = 0; i < 3; ++i) r[i] /= nn;
                return r;
            }
            default:
                return domain_.center();
        }
    }

    void cap_basis() {
        const Point& n = domain_.pole();
        std::vector<double> aux = std::abs(n[0]) < 0.9 ? std::vector<double>{1.0, 0.0, 0.0}
                                                       : std::vector<double>{0.0, 1.0, 0.0};
        e1_ = {n[1] * aux[2] - n[2] * aux[1],
               n[2] * aux[0] - n[0] * aux[2],
               n[0] * aux[1] - n[1] * aux[0]};
        double l = std::sqrt(e1_[0] * e1_[0] + e1_[1] * e1_[1] + e1_[2] * e1_[2]);
        for (auto& c : e1_) c /= l;
        e2_ = {n[1] * e1_[2] - n[2] * e1_[1],
               n[2] * e1_[0] - n[0] * e1_[2],
               n[0] * e1_[1] - n[1] * e1_[0]};
    }

    static constexpr double kInset = 0.98;

    ManStrategy strategy_;
    Space space_;
    Domain domain_;
    Rng rng_;
    double orbit_u_ = 0.0;
    std::vector<double> e1_, e2_;
    std::size_t script_pos_ = 0;
};

inline Point man_step(ManState& state, const Point& lion_new, const Point& man, double D) {
    return state.step(lion_new, man, D);
}

/// Runs the pursuit: within step n+1 the lion moves first using (L_n, M_n),
/// then the man observes L_{n+1} and moves. Records one StepRecord per step
/// and stops at the first gap below alpha or at the step limit. Fully
/// deterministic given the config seed.
inline GameTrace run_game(const GameConfig& cfg, const ManStrategy& strategy) {
    if (cfg.max_steps == 0) throw InvalidInput("run_game: max_steps must be positive");
    if (cfg.domain.shape() == DomainShape::octant)
        throw InvalidInput("run_game: the octant is counterexample geometry, not a playing domain");
    if (!(cfg.alpha > 0.0)) throw InvalidInput("run_game: alpha must be positive");
    if (!(cfg.jump > 0.0) || cfg.jump > cfg.domain.diameter_bound() + cfg.space.tol())
        throw InvalidInput("run_game: need 0 < D <= domain diameter bound");
    if (!cfg.domain.contains(cfg.lion0) || !cfg.domain.contains(cfg.man0))
        throw InvalidInput("run_game: start positions must lie in the domain");

    GameTrace trace{cfg, strategy, {}, std::nullopt, Termination::step_limit};
    ManState man_state(strategy, cfg);
    Point lion = cfg.lion0;
    Point man = cfg.man0;
    bool hold = false;
    for (std::uint64_t n = 0; n < cfg.max_steps; ++n) {
        double dist = cfg.space.distance(lion, man);
        Point lion_next = lion_step(cfg.space, lion, man, cfg.jump);
        double gap = cfg.space.distance(lion_next, man);
        trace.steps.push_back({n, lion, man, dist, gap});
        if (gap < cfg.alpha) {
            trace.capture_step = n;
            trace.terminated_by = Termination::capture;
            break;
        }
        Point man_next = man;
        if (!hold) {
            try {
                man_next = man_state.step(lion_next, man, cfg.jump);
            } catch (const StrategyExhausted&) {
                hold = true;  // the engine holds position from here on
            }
        }
        lion = lion_next;
        man = man_next;
    }
    return trace;
}

/// First step whose recorded gap drops below alpha; absent when none does.
inline std::optional<std::uint64_t> capture_time(const GameTrace& trace, double alpha) {
    if (!(alpha > 0.0)) throw InvalidInput("capture_time: alpha must be positive");
    for (const auto& s : trace.steps)
        if (s.gap < alpha) return s.n;
    return std::nullopt;
}

} // namespace lionman
