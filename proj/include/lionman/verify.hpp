#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "domain.hpp"
#include "moduli.hpp"
#include "serialize.hpp"

namespace lionman {

/// Outcome of one sampled definitional check. worst_slack is the most
/// negative margin by which a conclusion held (or failed); a passing report
/// never hides a near-miss below -1e-9. Deterministic given the seed.
struct SampleReport {
    std::string check_name;
    std::uint64_t seed = 0;
    std::uint64_t samples_requested = 0;
    std::uint64_t samples_admissible = 0;
    std::uint64_t violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();
    bool starved = false;  // admissibility fell below 1%: suite is near-vacuous
    std::vector<json> violation_dumps;

    bool passed() const { return violations == 0; }

    void admit(double margin, const std::function<json()>& dump, double tol = 1e-9) {
        ++samples_admissible;
        worst_slack = std::min(worst_slack, margin);
        if (margin < -tol) {
            ++violations;
            violation_dumps.push_back(dump());
        }
    }

    void finalize() {
        starved = samples_requested > 0 &&
                  static_cast<double>(samples_admissible) <
                      0.01 * static_cast<double>(samples_requested);
    }

    json to_json() const {
        json j{{"check", check_name},
               {"seed", seed},
               {"samples_requested", samples_requested},
               {"samples_admissible", samples_admissible},
               {"violations", violations},
               {"starved", starved},
               {"violation_dumps", violation_dumps}};
        if (std::isfinite(worst_slack))
            j["worst_slack"] = worst_slack;
        else
            j["worst_slack"] = nullptr;
        return j;
    }
};

namespace detail {

inline json dump_points(std::initializer_list<std::pair<const char*, const Point*>> pts) {
    json j;
    for (auto& [name, p] : pts) j[name] = to_json(*p);
    return j;
}

// near-diameter pair through the middle of the domain; concentrates sampling
// mass where uniqueness-modulus violations can live at all
inline std::pair<Point, Point> far_pair(const Space& s, const Domain& dom, Rng& rng) {
    double f = rng.uniform(0.6, 0.995);
    if (dom.shape() == DomainShape::ball) {
        auto g = rng.gaussian_vector(s.dim());
        double n = s.norm_p(g);
        Point x = dom.center(), y = dom.center();
        for (std::size_t i = 0; i < s.dim(); ++i) {
            double step = f * dom.radius() * g[i] / n;
            x[i] -= step;
            y[i] += step;
        }
        return {x, y};
    }
    if (dom.shape() == DomainShape::spherical_cap) {
        auto g = rng.gaussian_vector(3);
        double rho = f * dom.angular_radius();
        Point x = s.offset(dom.pole(), g, rho);
        for (auto& c : g) c = -c;
        Point y = s.offset(dom.pole(), g, rho);
        return {x, y};
    }
    return {dom.sample(rng), dom.sample(rng)};
}

} // namespace detail

/// Uniform convexity: z within radius r of both x and y whose separation is
/// at least eps*r forces the midpoint inside (1 - eta(eps, r)) r. The radius
/// is derived sharply (r = max of the two distances), so every admissible
/// sample probes the modulus at its boundary.
inline SampleReport check_uniform_convexity(const Space& s, const Domain& dom,
                                            const ConvexityModulus& eta,
                                            std::uint64_t n_samples, std::uint64_t seed) {
    if (!s.is_normed())
        throw InvalidInput("check_uniform_convexity: normed spaces only");
    SampleReport rep;
    rep.check_name = "uniform_convexity";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        Point x = dom.sample(r), y = dom.sample(r), z = dom.sample(r);
        double rad = std::max(s.distance(z, x), s.distance(z, y));
        if (rad < 1e-9) continue;
        double eps = std::min(2.0, s.distance(x, y) / rad * (1.0 - 1e-12));
        if (eps < 1e-4) continue;  // degenerate pair: separation premise unmet
        Point m = s.midpoint(x, y);
        double margin = (1.0 - eta.eta(eps, rad)) * rad - s.distance(z, m);
        rep.admit(margin, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}});
            j["r"] = rad;
            j["eps"] = eps;
            j["d_z_mid"] = s.distance(z, m);
            return j;
        });
    }
    rep.finalize();
    return rep;
}

/// The power-type convexity inequality with parameter c along geodesics;
/// an identity in Euclidean space with (p, c) = (2, 2), where equality is
/// asserted within tolerance instead.
inline SampleReport check_p_uniform_convexity(const Space& s, const Domain& dom, double p,
                                              double c, std::uint64_t n_samples,
                                              std::uint64_t seed, bool expect_equality = false) {
    SampleReport rep;
    rep.check_name = expect_equality ? "p_uniform_convexity_equality" : "p_uniform_convexity";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        Point x = dom.sample(r), y = dom.sample(r), z = dom.sample(r);
        double t = r.uniform01();
        Point gt = s.interpolate(x, y, t);
        double lhs = std::pow(s.distance(z, gt), p);
        double rhs = (1.0 - t) * std::pow(s.distance(z, x), p) +
                     t * std::pow(s.distance(z, y), p) -
                     0.5 * c * t * (1.0 - t) * std::pow(s.distance(x, y), p);
        double margin = expect_equality ? 1e-9 - std::abs(rhs - lhs) : rhs - lhs;
        rep.admit(margin, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}});
            j["t"] = t;
            j["lhs"] = lhs;
            j["rhs"] = rhs;
            return j;
        }, expect_equality ? 0.0 : 1e-9);
    }
    rep.finalize();
    return rep;
}

/// Uniform uniqueness: a near-degenerate triangle (excess of the triangle
/// inequality below Phi(eps, b)) forces z within eps of the segment [x, y].
/// The sampler alternates independent pairs with near-diameter pairs and
/// places z off a segment point by a distance of order eps, so an inflated
/// Phi admits genuinely violating configurations.
inline SampleReport check_uniform_uniqueness(const Space& s, const Domain& dom,
                                             const PhiFn& phi, double b,
                                             std::uint64_t n_samples, std::uint64_t seed) {
    if (!(b > 0.0)) throw InvalidInput("check_uniform_uniqueness: b must be positive");
    SampleReport rep;
    rep.check_name = "uniform_uniqueness";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        bool far_mode = (i % 2) == 1;
        auto pair = far_mode ? detail::far_pair(s, dom, r)
                             : std::pair<Point, Point>{dom.sample(r), dom.sample(r)};
        const Point& x = pair.first;
        const Point& y = pair.second;
        double dxy = s.distance(x, y);
        if (dxy < 1e-9) continue;
        double t = far_mode ? r.uniform(0.42, 0.58) : r.uniform(0.1, 0.9);
        Point on = s.interpolate(x, y, t);
        double eps = r.log_uniform(1e-3 * b, 2.0 * b);
        double rho = eps * r.log_uniform(1e-3, 2.0);
        if (!s.is_normed()) rho = std::min(rho, 1.0);
        Point z = s.offset(on, r.gaussian_vector(s.dim()), rho);
        double r1 = s.distance(z, x);
        double r2 = dxy - r1;
        if (!(r1 > 0.0) || !(r2 > 0.0) || r1 > b || r2 > b) continue;
        double phi_v = phi(eps, b);
        // premise shrunk so rounding cannot flip admissibility at the boundary
        if (!(s.distance(z, y) <= r2 + phi_v - 1e-12 * std::max(1.0, r2))) continue;
        double dist = s.dist_to_segment(z, x, y);
        rep.admit(eps - dist, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}});
            j["t"] = t;
            j["eps"] = eps;
            j["rho"] = rho;
            j["r1"] = r1;
            j["r2"] = r2;
            j["phi"] = phi_v;
            j["dist_to_segment"] = dist;
            return j;
        });
    }
    rep.finalize();
    return rep;
}

/// Segment-shadow property: if y and z sit within Phi(eps, b)/2 of each other
/// (both within b of x), the whole geodesic [x, y] stays within eps of [x, z]
/// and vice versa, uniformly in the parameter.
inline SampleReport check_lemma_segment_shadow(const Space& s, const Domain& dom,
                                               const PhiFn& phi, double b,
                                               std::uint64_t n_samples, std::uint64_t seed) {
    if (!(b > 0.0)) throw InvalidInput("check_lemma_segment_shadow: b must be positive");
    SampleReport rep;
    rep.check_name = "segment_shadow";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        Point x = dom.sample(r), y = dom.sample(r);
        double eps = r.log_uniform(1e-3 * b, 2.0 * b);
        double phi_v = phi(eps, b);
        double rho = r.uniform(0.0, 0.9) * 0.5 * phi_v;
        Point z = rho > 1e-300 ? s.offset(y, r.gaussian_vector(s.dim()), rho) : y;
        if (s.distance(x, y) > b || s.distance(x, z) > b) continue;
        if (!(s.distance(y, z) <= 0.5 * phi_v)) continue;
        double t = r.uniform01();
        Point yt = s.interpolate(x, y, t);
        Point zt = s.interpolate(x, z, t);
        double worst = std::max(s.dist_to_segment(yt, x, z), s.dist_to_segment(zt, x, y));
        rep.admit(eps - worst, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}});
            j["t"] = t;
            j["eps"] = eps;
            j["phi"] = phi_v;
            j["worst_shadow"] = worst;
            return j;
        });
    }
    rep.finalize();
    return rep;
}

/// Uniform betweenness: a chain y near [x, z], z near [y, w] (within
/// Theta(eps, a, b), separation >= a, diameter <= b) places both y and z
/// within eps of [x, w]. Theta is usually far below double resolution
/// relative to the coordinates, so exactly-collinear quadruples (premise
/// distances mathematically zero) are admitted by construction; a perturbed
/// mode with numerically verified premises runs whenever Theta is
/// representable.
inline SampleReport check_uniform_betweenness(const Space& s, const Domain& dom,
                                              const ThetaFn& theta, double b,
                                              std::uint64_t n_samples, std::uint64_t seed) {
    if (!(b > 0.0)) throw InvalidInput("check_uniform_betweenness: b must be positive");
    SampleReport rep;
    rep.check_name = "uniform_betweenness";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        Point x = dom.sample(r), w = dom.sample(r);
        double dxw = s.distance(x, w);
        if (dxw < 0.2 * b) continue;
        double t1 = r.uniform(0.15, 0.4), t2 = r.uniform(0.6, 0.85);
        Point y = s.interpolate(x, w, t1);
        Point z = s.interpolate(x, w, t2);
        const Point* q[4] = {&x, &y, &z, &w};
        double sep = std::numeric_limits<double>::infinity();
        for (int u = 0; u < 4; ++u)
            for (int v = u + 1; v < 4; ++v)
                sep = std::min(sep, s.distance(*q[u], *q[v]));
        if (sep < 1e-6) continue;
        double a = sep * 0.995;
        double eps = r.log_uniform(1e-3 * b, 2.0 * b);
        double th = theta(eps, a, b);
        bool perturbed = (i % 2) == 1 && th >= 1e-12;
        if (perturbed) {
            double rho = std::min(0.4 * th, 1e-3 * sep);
            y = s.offset(y, r.gaussian_vector(s.dim()), rho);
            z = s.offset(z, r.gaussian_vector(s.dim()), rho);
            // all four premises re-checked numerically in this mode
            double sep2 = std::numeric_limits<double>::infinity();
            double diam2 = 0.0;
            for (int u = 0; u < 4; ++u)
                for (int v = u + 1; v < 4; ++v) {
                    double duv = s.distance(*q[u], *q[v]);
                    sep2 = std::min(sep2, duv);
                    diam2 = std::max(diam2, duv);
                }
            if (sep2 < a || diam2 > b) continue;
            if (!(s.dist_to_segment(y, x, z) < th && s.dist_to_segment(z, y, w) < th)) continue;
        }
        double worst = std::max(s.dist_to_segment(y, x, w), s.dist_to_segment(z, x, w));
        rep.admit(eps - worst, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}, {"w", &w}});
            j["a"] = a;
            j["eps"] = eps;
            j["theta"] = th;
            j["perturbed"] = perturbed;
            j["worst_dist"] = worst;
            return j;
        });
    }
    rep.finalize();
    return rep;
}

/// Exact betweenness: y in [x, z] and z in [y, w] imply y, z in [x, w], with
/// every membership recomputed from scratch through the additivity
/// characterization d(u, m) + d(m, v) = d(u, v).
inline SampleReport check_betweenness_exact(const Space& s, const Domain& dom,
                                            std::uint64_t n_samples, std::uint64_t seed) {
    SampleReport rep;
    rep.check_name = "betweenness_exact";
    rep.seed = seed;
    rep.samples_requested = n_samples;
    Rng master(seed);
    auto defect = [&](const Point& u, const Point& m, const Point& v) {
        return std::abs(s.distance(u, m) + s.distance(m, v) - s.distance(u, v));
    };
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        Rng r = master.fork(i);
        Point x = dom.sample(r), w = dom.sample(r);
        if (s.distance(x, w) < 1e-3) continue;
        double t1 = r.uniform(0.1, 0.45), t2 = r.uniform(0.55, 0.9);
        Point y = s.interpolate(x, w, t1);
        Point z = s.interpolate(x, w, t2);
        if ((i % 5) == 4) {
            // deliberately broken premise: must land inadmissible
            y = s.offset(y, r.gaussian_vector(s.dim()), 1e-3);
        }
        const Point* q[4] = {&x, &y, &z, &w};
        double sep = std::numeric_limits<double>::infinity();
        for (int u = 0; u < 4; ++u)
            for (int v = u + 1; v < 4; ++v)
                sep = std::min(sep, s.distance(*q[u], *q[v]));
        if (sep < 1e-6) continue;  // points must be pairwise distinct
        if (defect(x, y, z) > 1e-9 || defect(y, z, w) > 1e-9) continue;  // premise fails
        double worst = std::max(defect(x, y, w), defect(x, z, w));
        rep.admit(1e-9 - worst, [&] {
            json j = detail::dump_points({{"x", &x}, {"y", &y}, {"z", &z}, {"w", &w}});
            j["membership_defect"] = worst;
            return j;
        }, 0.0);
    }
    rep.finalize();
    return rep;
}

/// The fixed spherical-octant configuration witnessing a uniquely geodesic
/// space that is not strictly convex: the three octant corners give
/// d(z, m(x,y)) = d(z, x) = d(z, y) = pi/2, so the strict midpoint
/// inequality fails.
struct OctantReport {
    Point x, y, z, midpoint;
    double d_zx = 0.0, d_zy = 0.0, d_zm = 0.0;
    bool strict_convexity_fails = false;

    json to_json() const {
        return json{{"check", "octant_counterexample"},
                    {"x", lionman::to_json(x)},
                    {"y", lionman::to_json(y)},
                    {"z", lionman::to_json(z)},
                    {"midpoint", lionman::to_json(midpoint)},
                    {"d_zx", d_zx},
                    {"d_zy", d_zy},
                    {"d_zm", d_zm},
                    {"strict_convexity_fails", strict_convexity_fails}};
    }
};

inline OctantReport octant_counterexample() {
    Space s = Space::sphere2();
    OctantReport r;
    r.x = Point{1.0, 0.0, 0.0};
    r.y = Point{0.0, 1.0, 0.0};
    r.z = Point{0.0, 0.0, 1.0};
    r.midpoint = s.midpoint(r.x, r.y);
    r.d_zx = s.distance(r.z, r.x);
    r.d_zy = s.distance(r.z, r.y);
    r.d_zm = s.distance(r.z, r.midpoint);
    r.strict_convexity_fails = r.d_zm >= std::max(r.d_zx, r.d_zy) - 1e-12;
    return r;
}

/// Empirical modulus of convexity of a 2-dimensional normed instance:
/// the infimum of 1 - |(x+y)/2| over unit vectors with |x - y| >= eps,
/// located on an angular grid and sharpened by golden-section refinement.
/// For fixed x the constraint is activated at equality by bisection along
/// the unit circle. Two different grid resolutions must land on the same
/// value, which the tests use as the estimator's self-check.
inline double empirical_convexity_modulus(const Space& s, double eps, int grid = 10000) {
    if (!s.is_normed() || s.dim() != 2)
        throw InvalidInput("empirical_convexity_modulus: 2-dimensional normed instances only");
    if (!(eps > 0.0) || !(eps <= 2.0))
        throw InvalidInput("empirical_convexity_modulus: eps must lie in (0, 2]");
    if (grid < 16) throw InvalidInput("empirical_convexity_modulus: grid too coarse");

    auto unit = [&](double phi) {
        std::vector<double> v{std::cos(phi), std::sin(phi)};
        double n = s.norm_p(v);
        return Point{v[0] / n, v[1] / n};
    };
    auto gap = [&](const Point& a, const Point& b) {
        std::vector<double> d{a[0] - b[0], a[1] - b[1]};
        return s.norm_p(d);
    };
    // 1 - |mid| with the partner solved so that |x - y| = eps exactly
    auto value_at = [&](double phi1) {
        Point a = unit(phi1);
        double lo = 0.0, hi = std::numbers::pi;
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (gap(a, unit(phi1 + mid)) < eps) lo = mid; else hi = mid;
        }
        Point bpt = unit(phi1 + 0.5 * (lo + hi));
        std::vector<double> m{0.5 * (a[0] + bpt[0]), 0.5 * (a[1] + bpt[1])};
        return 1.0 - s.norm_p(m);
    };

    double best = std::numeric_limits<double>::infinity();
    double best_phi = 0.0;
    for (int i = 0; i < grid; ++i) {
        double phi = 2.0 * std::numbers::pi * i / grid;
        double v = value_at(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    // golden-section refinement around the grid minimizer
    const double inv_phi = 0.61803398874989484820458683436564;
    double lo = best_phi - 2.0 * std::numbers::pi / grid;
    double hi = best_phi + 2.0 * std::numbers::pi / grid;
    double c = hi - inv_phi * (hi - lo), d = lo + inv_phi * (hi - lo);
    double fc = value_at(c), fd = value_at(d);
    for (int it = 0; it < 80; ++it) {
        if (fc < fd) {
            hi = d; d = c; fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = value_at(c);
        } else {
            lo = c; c = d; fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = value_at(d);
        }
    }
    best = std::min({best, fc, fd});
    return std::clamp(best, 0.0, 1.0);
}

/// Composition inequality of the empirical modulus on a grid:
/// delta(2 (1 - delta(eps))) <= 1 - eps/2 up to the discretization slack.
inline SampleReport check_goebel_kirk(const std::function<double(double)>& delta_hat,
                                      const std::vector<double>& eps_grid) {
    SampleReport rep;
    rep.check_name = "goebel_kirk";
    rep.samples_requested = eps_grid.size();
    for (double eps : eps_grid) {
        if (!(eps > 0.0) || !(eps <= 2.0)) throw InvalidInput("check_goebel_kirk: grid eps out of (0, 2]");
        double inner = 2.0 * (1.0 - delta_hat(eps));
        double lhs = inner < 1e-12 ? 0.0 : delta_hat(std::min(inner, 2.0));
        double margin = (1.0 - 0.5 * eps + 1e-4) - lhs;
        rep.admit(margin, [&] {
            return json{{"eps", eps}, {"inner", inner}, {"lhs", lhs}};
        }, 0.0);
    }
    rep.finalize();
    return rep;
}

/// First index I on the orbit 0, g~(0), g~^2(0), ... (g~ = Id + g) whose
/// window [I, I + g(I)] oscillates by at most tau; for a nonincreasing
/// sequence in [0, b] such an I exists within ceil(b / tau) orbit steps.
inline std::uint64_t metastable_index(const std::vector<double>& a, double b, double tau,
                                      const std::function<std::uint64_t(std::uint64_t)>& g) {
    if (!(b > 0.0) || !(tau > 0.0))
        throw InvalidInput("metastable_index: b and tau must be positive");
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < -1e-12 || a[i] > b + 1e-12)
            throw InvalidInput("metastable_index: sequence leaves [0, b]");
        if (i + 1 < a.size() && a[i + 1] > a[i] + 1e-12)
            throw InvalidInput("metastable_index: sequence is not nonincreasing");
    }
    double steps = std::ceil(b / tau - 1e-9 * std::max(1.0, b / tau));
    auto orbit_budget = static_cast<std::uint64_t>(steps);
    std::uint64_t idx = 0;
    for (std::uint64_t k = 0; k <= orbit_budget; ++k) {
        std::uint64_t window = g(idx);
        if (idx + window >= a.size())
            throw InsufficientData("metastable_index: sequence too short for the required window");
        double mx = a[idx], mn = a[idx];
        for (std::uint64_t j = idx; j <= idx + window; ++j) {
            mx = std::max(mx, a[j]);
            mn = std::min(mn, a[j]);
        }
        if (mx - mn <= tau) return idx;
        idx += window;  // g~ = Id + g
    }
    throw NumericFailure("metastable_index: orbit bound exhausted without a stable window");
}

} // namespace lionman
