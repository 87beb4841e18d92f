#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "point.hpp"

namespace lionman {

enum class SpaceKind { euclidean, lp, sphere2 };

/// A uniquely geodesic space: the flat p-norm spaces R^n with 1 < p < inf
/// (p = 2 is Euclidean) or the round unit sphere S^2 with the angular metric.
/// Geodesics in the normed instances are straight segments; on the sphere
/// they are great-circle arcs, unique below antipodal range. The convexity
/// machinery uses the sphere only on domains of diameter < pi/2.
///
/// All operations are pure; a Space is immutable and freely shareable.
class Space {
public:
    static Space euclidean(std::size_t dim) {
        if (dim == 0) throw InvalidInput("euclidean: dimension must be positive");
        return Space(SpaceKind::euclidean, dim, 2.0);
    }

    static Space lp(std::size_t dim, double p) {
        if (dim == 0) throw InvalidInput("lp: dimension must be positive");
        if (!(p > 1.0) || !std::isfinite(p))
            throw InvalidInput("lp: p must exceed 1 and be finite "
                               "(p = 1 and p = inf are not uniquely geodesic)");
        return Space(SpaceKind::lp, dim, p);
    }

    static Space sphere2() { return Space(SpaceKind::sphere2, 3, 2.0); }

    SpaceKind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    double p() const { return p_; }
    double tol() const { return tol_; }
    bool is_normed() const { return kind_ != SpaceKind::sphere2; }

    /// Same space with a different membership/validation tolerance.
    Space with_tolerance(double tol) const {
        if (!(tol > 0.0)) throw InvalidInput("with_tolerance: tolerance must be positive");
        Space s = *this;
        s.tol_ = tol;
        return s;
    }

    bool operator==(const Space&) const = default;

    void validate(const Point& x) const {
        if (x.dim() != dim_) throw InvalidInput("point dimension does not match space");
        if (kind_ == SpaceKind::sphere2) {
            double s = dot(x.coords, x.coords);
            if (std::abs(s - 1.0) > tol_)
                throw InvalidInput("sphere point is off the unit sphere beyond tolerance");
        }
    }

    double distance(const Point& x, const Point& y) const {
        validate(x);
        validate(y);
        return dist_unchecked(x, y);
    }

    /// The point at parameter t of the geodesic from x to y:
    /// d(result, x) = t * d(x,y) and d(result, y) = (1-t) * d(x,y).
    Point interpolate(const Point& x, const Point& y, double t) const {
        validate(x);
        validate(y);
        if (!(t >= 0.0) || !(t <= 1.0))
            throw InvalidInput("interpolate: t must lie in [0, 1]");
        return interp_unchecked(x, y, t);
    }

    Point midpoint(const Point& x, const Point& y) const { return interpolate(x, y, 0.5); }

    /// The point past y, at distance d(x,y) + extra from x along the geodesic
    /// through x and y. On the sphere the extension stops short of the
    /// antipode of x. Requires x != y.
    Point extend_past(const Point& x, const Point& y, double extra) const {
        validate(x);
        validate(y);
        if (!(extra >= 0.0)) throw InvalidInput("extend_past: extra must be nonnegative");
        double d = dist_unchecked(x, y);
        if (d <= tol_) throw DegenerateGeodesic("extend_past: coincident points have no direction");
        if (kind_ == SpaceKind::sphere2) {
            double total = std::min(d + extra, std::numbers::pi - 1e-6);
            return slerp(x, y, d, total / d);
        }
        Point r = y;
        double f = extra / d;
        for (std::size_t i = 0; i < dim_; ++i) r[i] += f * (y[i] - x[i]);
        return r;
    }

    /// min over t in [0,1] of d(z, interpolate(x, y, t)). The map
    /// t -> d(z, geodesic(t)) is convex in every implemented space (on valid
    /// domains), so a ternary search converges; 200 iterations or interval
    /// width < 1e-12, whichever first.
    double dist_to_segment(const Point& z, const Point& x, const Point& y) const {
        validate(z);
        validate(x);
        validate(y);
        auto f = [&](double t) { return dist_unchecked(z, interp_unchecked(x, y, t)); };
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
            double m1 = lo + (hi - lo) / 3.0;
            double m2 = hi - (hi - lo) / 3.0;
            if (f(m1) <= f(m2)) hi = m2; else lo = m1;
        }
        return std::min({f(0.0), f(1.0), f(0.5 * (lo + hi))});
    }

    /// The point at the given distance from p in direction dir (projected to
    /// the tangent plane on the sphere). dir need not be normalized.
    Point offset(const Point& p, const std::vector<double>& dir, double dist) const {
        validate(p);
        if (dir.size() != dim_) throw InvalidInput("offset: direction dimension mismatch");
        if (!(dist >= 0.0)) throw InvalidInput("offset: distance must be nonnegative");
        if (dist == 0.0) return p;
        if (kind_ == SpaceKind::sphere2) {
            std::vector<double> t(3);
            double dp = dot(dir, p.coords);
            for (int i = 0; i < 3; ++i) t[i] = dir[i] - dp * p[i];
            double n = std::sqrt(dot(t, t));
            if (n < 1e-14) {
                // direction parallel to p: fall back to any tangent
                t = {-p[1], p[0], 0.0};
                n = std::sqrt(dot(t, t));
                if (n < 1e-14) { t = {0.0, -p[2], p[1]}; n = std::sqrt(dot(t, t)); }
            }
            double a = std::min(dist, std::numbers::pi - 1e-6);
            Point r{{0.0, 0.0, 0.0}};
            for (int i = 0; i < 3; ++i) r[i] = std::cos(a) * p[i] + std::sin(a) * t[i] / n;
            return renormalize(r);
        }
        double n = norm_p(dir);
        if (n < 1e-300) throw InvalidInput("offset: zero direction");
        Point r = p;
        for (std::size_t i = 0; i < dim_; ++i) r[i] += dist / n * dir[i];
        return r;
    }

    /// p-norm of a coordinate vector (Euclidean norm for the sphere's ambient R^3).
    double norm_p(const std::vector<double>& v) const {
        if (kind_ == SpaceKind::lp) {
            double s = 0.0;
            for (double c : v) s += std::pow(std::abs(c), p_);
            return std::pow(s, 1.0 / p_);
        }
        return std::sqrt(dot(v, v));
    }

private:
    Space(SpaceKind k, std::size_t d, double p) : kind_(k), dim_(d), p_(p) {}

    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    double dist_unchecked(const Point& x, const Point& y) const {
        switch (kind_) {
            case SpaceKind::euclidean: {
                double s = 0.0;
                for (std::size_t i = 0; i < dim_; ++i) {
                    double d = x[i] - y[i];
                    s += d * d;
                }
                return std::sqrt(s);
            }
            case SpaceKind::lp: {
                double s = 0.0;
                for (std::size_t i = 0; i < dim_; ++i)
                    s += std::pow(std::abs(x[i] - y[i]), p_);
                return std::pow(s, 1.0 / p_);
            }
            case SpaceKind::sphere2: {
                // atan2 form: accurate for both tiny and near-antipodal angles
                double d = dot(x.coords, y.coords);
                double cx = x[1] * y[2] - x[2] * y[1];
                double cy = x[2] * y[0] - x[0] * y[2];
                double cz = x[0] * y[1] - x[1] * y[0];
                double c = std::sqrt(cx * cx + cy * cy + cz * cz);
                return std::atan2(c, d);
            }
        }
        return 0.0;
    }

    Point interp_unchecked(const Point& x, const Point& y, double t) const {
        if (kind_ == SpaceKind::sphere2) {
            double theta = dist_unchecked(x, y);
            if (theta <= 1e-15) return x;
            if (theta >= std::numbers::pi - 1e-9)
                throw DegenerateGeodesic("interpolate: antipodal sphere points");
            if (t == 0.0) return x;
            if (t == 1.0) return y;
            return slerp(x, y, theta, t);
        }
        if (t == 0.0) return x;
        if (t == 1.0) return y;
        Point r = x;
        for (std::size_t i = 0; i < dim_; ++i) r[i] = (1.0 - t) * x[i] + t * y[i];
        return r;
    }

    // great-circle interpolation, sin-weighted; valid for t outside [0,1] too
    // as long as the total angle stays below pi
    Point slerp(const Point& x, const Point& y, double theta, double t) const {
        double s = std::sin(theta);
        double a = std::sin((1.0 - t) * theta) / s;
        double b = std::sin(t * theta) / s;
        Point r{{0.0, 0.0, 0.0}};
        for (int i = 0; i < 3; ++i) r[i] = a * x[i] + b * y[i];
        return renormalize(r);
    }

    static Point renormalize(Point r) {
        double n = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
        for (int i = 0; i < 3; ++i) r[i] /= n;
        return r;
    }

    SpaceKind kind_;
    std::size_t dim_;
    double p_;
    double tol_ = 1e-10;
};

} // namespace lionman
