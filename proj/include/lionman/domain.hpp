#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "rng.hpp"
#include "space.hpp"

namespace lionman {

enum class DomainShape { ball, box, spherical_cap, octant };

/// Convex bounded playing field inside a Space, with a tight diameter bound b.
/// Balls and boxes live in the normed instances; caps and the closed positive
/// octant live on the sphere. The octant exists only for the counterexample
/// geometry and is never used as a game domain.
class Domain {
public:
    static Domain ball(Space s, Point center, double radius) {
        if (!s.is_normed()) throw InvalidInput("ball domains require a normed space");
        s.validate(center);
        if (!(radius > 0.0)) throw InvalidInput("ball: radius must be positive");
        Domain d(std::move(s), DomainShape::ball);
        d.a_ = std::move(center);
        d.r_ = radius;
        d.diameter_ = 2.0 * radius;
        return d;
    }

    static Domain box(Space s, Point lo, Point hi) {
        if (!s.is_normed()) throw InvalidInput("box domains require a normed space");
        s.validate(lo);
        s.validate(hi);
        for (std::size_t i = 0; i < lo.dim(); ++i)
            if (!(hi[i] >= lo[i])) throw InvalidInput("box: hi must dominate lo coordinatewise");
        double diam = s.distance(lo, hi);
        if (!(diam > 0.0)) throw InvalidInput("box: degenerate (diameter zero)");
        Domain d(std::move(s), DomainShape::box);
        d.a_ = std::move(lo);
        d.b_ = std::move(hi);
        d.diameter_ = diam;
        return d;
    }

    static Domain spherical_cap(Space s, Point pole, double angular_radius) {
        if (s.kind() != SpaceKind::sphere2)
            throw InvalidInput("spherical caps require the sphere");
        s.validate(pole);
        if (!(angular_radius > 0.0) || angular_radius > std::numbers::pi / 4.0 + 1e-15)
            throw InvalidInput("spherical cap: angular radius must lie in (0, pi/4]");
        Domain d(std::move(s), DomainShape::spherical_cap);
        d.a_ = std::move(pole);
        d.r_ = angular_radius;
        d.diameter_ = 2.0 * angular_radius;
        return d;
    }

    static Domain octant(Space s) {
        if (s.kind() != SpaceKind::sphere2) throw InvalidInput("octant requires the sphere");
        Domain d(std::move(s), DomainShape::octant);
        d.diameter_ = std::numbers::pi / 2.0;
        return d;
    }

    const Space& space() const { return space_; }
    DomainShape shape() const { return shape_; }
    double diameter_bound() const { return diameter_; }

    const Point& center() const { return a_; }          // ball
    double radius() const { return r_; }                // ball
    const Point& lo() const { return a_; }              // box
    const Point& hi() const { return b_; }              // box
    const Point& pole() const { return a_; }            // cap
    double angular_radius() const { return r_; }        // cap

    bool operator==(const Domain&) const = default;

    /// Membership within the space tolerance; the boundary counts as inside.
    bool contains(const Point& x) const {
        space_.validate(x);
        double tol = space_.tol();
        switch (shape_) {
            case DomainShape::ball:
                return space_.distance(a_, x) <= r_ + tol;
            case DomainShape::box:
                for (std::size_t i = 0; i < x.dim(); ++i)
                    if (x[i] < a_[i] - tol || x[i] > b_[i] + tol) return false;
                return true;
            case DomainShape::spherical_cap:
                return space_.distance(a_, x) <= r_ + tol;
            case DomainShape::octant:
                for (int i = 0; i < 3; ++i)
                    if (x[i] < -tol) return false;
                return true;
        }
        return false;
    }

    /// Move from `from` toward `target`, truncated to distance at most
    /// max_step and pulled back along the geodesic to the last in-domain
    /// point. If the target already satisfies both constraints it is
    /// returned unchanged. Requires from inside the domain.
    Point clamp_move(const Point& from, const Point& target, double max_step) const {
        if (!(max_step > 0.0)) throw InvalidInput("clamp_move: max_step must be positive");
        if (!contains(from)) throw InvalidState("clamp_move: from lies outside the domain");
        double d = space_.distance(from, target);
        Point tgt = target;
        if (d > max_step) tgt = space_.interpolate(from, target, max_step / d);
        if (contains(tgt)) return tgt;
        // domain convexity: the in-domain parameters form an interval [0, t*]
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
            double mid = 0.5 * (lo + hi);
            if (contains(space_.interpolate(from, tgt, mid))) lo = mid; else hi = mid;
        }
        return space_.interpolate(from, tgt, lo);
    }

    /// Uniform sample by rejection from an enclosing box (normed shapes) or
    /// from the whole sphere (cap, octant). Deterministic given the source.
    Point sample(Rng& rng) const {
        switch (shape_) {
            case DomainShape::ball: {
                Point x = a_;
                while (true) {
                    for (std::size_t i = 0; i < a_.dim(); ++i)
                        x[i] = a_[i] + rng.uniform(-r_, r_);
                    if (contains(x)) return x;
                }
            }
            case DomainShape::box: {
                Point x = a_;
                for (std::size_t i = 0; i < a_.dim(); ++i) x[i] = rng.uniform(a_[i], b_[i]);
                return x;
            }
            case DomainShape::spherical_cap:
            case DomainShape::octant: {
                while (true) {
                    auto g = rng.gaussian_vector(3);
                    double n = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
                    if (n < 1e-12) continue;
                    Point x{{g[0] / n, g[1] / n, g[2] / n}};
                    if (contains(x)) return x;
                }
            }
        }
        return a_;
    }

private:
    Domain(Space s, DomainShape shape) : space_(std::move(s)), shape_(shape) {}

    Space space_;
    DomainShape shape_;
    Point a_;       // center / lo / pole
    Point b_;       // hi
    double r_ = 0.0;
    double diameter_ = 0.0;
};

} // namespace lionman
