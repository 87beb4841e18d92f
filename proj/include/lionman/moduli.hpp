#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "log_real.hpp"

namespace lionman {

/// Uniform numeric access for the moduli calculus, which composes only
/// products, quotients, powers, positive sums and min. Instantiated with
/// double for ordinary evaluation and with LogReal when compositions dive
/// below machine range.
template <class Num>
struct NumTraits;

template <>
struct NumTraits<double> {
    static double from(double v) { return v; }
    static double pow(double x, double k) { return std::pow(x, k); }
};

template <>
struct NumTraits<LogReal> {
    static LogReal from(double v) { return LogReal::from_real(v); }
    static LogReal pow(LogReal x, double k) { return x.pow(k); }
};

enum class ModulusFamily { lp, p_uniform };

/// Closed-form modulus of uniform convexity eta(eps, r) for a space family:
/// quantitative witness that midpoints of eps-separated points drop strictly
/// inside balls of radius r. Built-in families ignore r, which makes them
/// trivially monotone (nonincreasing in r). Each factors as
/// eta(eps, r) = eps * eta_tilde(eps, r) with eta_tilde nondecreasing in eps;
/// the factored form feeds the sharper uniqueness-modulus conversion.
class ConvexityModulus {
public:
    static ConvexityModulus lp_family(double p) {
        require_p(p);
        ConvexityModulus m;
        m.family_ = ModulusFamily::lp;
        m.p_ = p;
        m.coeff_ = p <= 2.0 ? (p - 1.0) / 8.0 : 1.0 / (p * std::pow(2.0, p));
        return m;
    }

    static ConvexityModulus p_uniform(double p, double c) {
        require_p(p);
        if (!(c > 0.0)) throw InvalidInput("p_uniform: c must be positive");
        ConvexityModulus m;
        m.family_ = ModulusFamily::p_uniform;
        m.p_ = p;
        m.c_ = c;
        m.coeff_ = c / (8.0 * p);
        return m;
    }

    /// The 2-uniformly convex case with parameter 2: inner-product geometry
    /// and every nonpositively curved comparison space.
    static ConvexityModulus hilbert() { return p_uniform(2.0, 2.0); }

    ModulusFamily family() const { return family_; }
    double p() const { return p_; }
    double c() const { return c_; }

    /// eta(eps, r) for eps in (0, 2]; values capped at 1 so the codomain
    /// contract delta in (0, 1] holds even at extreme parameters.
    double eta(double eps, double r) const {
        require_eps(eps);
        (void)r;
        return std::min(1.0, eps * eta_tilde_num<double>(eps));
    }

    /// The factor eta(eps, r) / eps, nondecreasing in eps.
    double eta_tilde(double eps, double r) const {
        require_eps(eps);
        (void)r;
        return eta_tilde_num<double>(eps);
    }

    template <class Num>
    Num eta_tilde_num(Num eps) const {
        // leading coefficient fixed in double so every numeric route sees
        // bit-identical constants
        if (family_ == ModulusFamily::lp && p_ <= 2.0)
            return NumTraits<Num>::from(coeff_) * eps;
        return NumTraits<Num>::from(coeff_) * NumTraits<Num>::pow(eps, p_ - 1.0);
    }

    bool operator==(const ConvexityModulus&) const = default;

private:
    static void require_p(double p) {
        if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("modulus: p must exceed 1");
    }
    static void require_eps(double eps) {
        if (!(eps > 0.0) || !(eps <= 2.0)) throw InvalidInput("modulus: eps must lie in (0, 2]");
    }

    ModulusFamily family_ = ModulusFamily::lp;
    double p_ = 2.0;
    double c_ = 0.0;
    double coeff_ = 0.125;
};

/// eps^2- or eps^p-type convexity modulus of the p-norm spaces:
/// (p-1)/8 * eps^2 for p <= 2, eps^p / (p 2^p) for p > 2.
inline double eta_lp(double p, double eps) {
    return ConvexityModulus::lp_family(p).eta(eps, 1.0);
}

/// Convexity modulus c/(8p) * eps^p of a p-uniformly convex space
/// with parameter c.
inline double eta_p_uniform(double p, double c, double eps) {
    return ConvexityModulus::p_uniform(p, c).eta(eps, 1.0);
}

/// 2-uniform convexity parameter of a curvature-kappa comparison space on a
/// domain of the given diameter: c = (pi - 2 sqrt(k) s) * tan(sqrt(k) s) for
/// any slack 0 < s <= pi/(2 sqrt(k)) - diam. Requires diam < pi/(2 sqrt(k)).
inline double cat_kappa_parameter(double kappa, double diam, double slack) {
    if (!(kappa > 0.0)) throw InvalidInput("cat_kappa_parameter: kappa must be positive");
    double limit = std::numbers::pi / (2.0 * std::sqrt(kappa));
    if (!(diam >= 0.0) || !(diam < limit))
        throw DomainTooLarge("cat_kappa_parameter: domain diameter must stay below pi/(2 sqrt(kappa))");
    if (!(slack > 0.0) || slack > limit - diam)
        throw InvalidInput("cat_kappa_parameter: slack must lie in (0, pi/(2 sqrt(kappa)) - diam]");
    double u = std::sqrt(kappa) * slack;
    return (std::numbers::pi - 2.0 * u) * std::tan(u);
}

/// Modulus of uniform uniqueness derived from a convexity modulus through
/// the factored form: Phi(eps, b) = eps * eta_tilde(eps/(b+eps), b+eps).
/// Satisfies Phi(eps, b) < eps for the built-in families.
template <class Num>
Num phi_value(const ConvexityModulus& m, Num eps, Num b) {
    Num u = eps / (b + eps);
    return eps * m.eta_tilde_num<Num>(u);
}

inline double phi_from_eta(const ConvexityModulus& m, double eps, double b) {
    if (!(eps > 0.0) || !(b > 0.0)) throw InvalidInput("phi_from_eta: eps and b must be positive");
    return phi_value<double>(m, eps, b);
}

using PhiFn = std::function<double(double eps, double b)>;
using ThetaFn = std::function<double(double eps, double a, double b)>;

/// Modulus of uniform betweenness obtained by nesting a uniqueness modulus:
/// Theta(eps,a,b) = 1/2 min{eps, Phi((a/(6b)) Phi(Phi(eps/2,b)/2, b), b+eps/2)}
/// for eps <= a, clamped to Theta(a,a,b) for eps > a.
inline double theta_from_phi(const PhiFn& phi, double eps, double a, double b) {
    if (!(eps > 0.0) || !(a > 0.0) || !(b > 0.0))
        throw InvalidInput("theta_from_phi: eps, a, b must be positive");
    if (eps > a) eps = a;
    double inner = phi(0.5 * phi(0.5 * eps, b), b);
    double arg = a / (6.0 * b) * inner;
    return 0.5 * std::min(eps, phi(arg, b + 0.5 * eps));
}

template <class Num>
Num theta_value(const ConvexityModulus& m, Num eps, Num a, Num b) {
    if (a < eps) eps = a;
    const Num half = NumTraits<Num>::from(0.5);
    Num inner = phi_value<Num>(m, half * phi_value<Num>(m, half * eps, b), b);
    Num arg = a / (NumTraits<Num>::from(6.0) * b) * inner;
    Num cand = phi_value<Num>(m, arg, b + half * eps);
    return half * std::min(eps, cand);
}

/// Delta(eps) = Theta(eps, eps, b), the one-parameter betweenness gauge.
inline double delta_fn(const ThetaFn& theta, double eps, double b) {
    if (!(eps > 0.0) || !(b > 0.0)) throw InvalidInput("delta_fn: eps and b must be positive");
    return theta(eps, eps, b);
}

/// Psi(eps) = Phi(Delta(eps), b) / 2; satisfies Psi(eps) < Delta(eps) < eps.
inline double psi_fn(const PhiFn& phi, const ThetaFn& theta, double eps, double b) {
    return 0.5 * phi(delta_fn(theta, eps, b), b);
}

template <class Num>
Num delta_value(const ConvexityModulus& m, Num eps, Num b) {
    return theta_value<Num>(m, eps, eps, b);
}

template <class Num>
Num psi_value(const ConvexityModulus& m, Num eps, Num b) {
    return NumTraits<Num>::from(0.5) * phi_value<Num>(m, delta_value<Num>(m, eps, b), b);
}

/// Convexity modulus recovered from a uniqueness modulus in a normed space:
/// eta(eps) = Phi(eps/3, 1) / 2. The conversion requires Phi < 1 everywhere,
/// which is only checkable on samples: a fixed probe grid plus the actual
/// evaluation point.
inline double eta_from_phi_normed(const PhiFn& phi, double eps) {
    if (!(eps > 0.0) || !(eps <= 2.0))
        throw InvalidInput("eta_from_phi_normed: eps must lie in (0, 2]");
    auto probe = [&](double e, double b) {
        double v = phi(e, b);
        if (!(v < 1.0))
            throw HypothesisViolation("eta_from_phi_normed: sampled Phi value >= 1");
        return v;
    };
    for (double e : {1e-3, 1e-2, 0.1, 0.5, 1.0, 1.5, 2.0})
        for (double b : {0.5, 1.0, 2.0, 4.0}) probe(e, b);
    return 0.5 * probe(eps / 3.0, 1.0);
}

/// Rescaling of a normed-space uniqueness modulus given at b = 1:
/// Phi(eps, b) = b * Phi_1(eps / b).
inline double normalize_phi_normed(const std::function<double(double)>& phi1,
                                   double eps, double b) {
    if (!(eps > 0.0) || !(b > 0.0))
        throw InvalidInput("normalize_phi_normed: eps and b must be positive");
    return b * phi1(eps / b);
}

/// One space family's moduli plus the diameter bound b that the derived
/// one-parameter maps Delta and Psi close over. The double-valued entry
/// points reroute through LogReal when a composition falls below 1e-300,
/// and fail loudly if the value cannot come back into double range.
struct ModuliBundle {
    ConvexityModulus modulus;
    double b;

    ModuliBundle(ConvexityModulus m, double diameter_bound)
        : modulus(m), b(diameter_bound) {
        if (!(b > 0.0)) throw InvalidInput("ModuliBundle: diameter bound must be positive");
    }

    double phi(double eps, double b_arg) const { return phi_from_eta(modulus, eps, b_arg); }

    double theta(double eps, double a, double b_arg) const {
        if (!(eps > 0.0) || !(a > 0.0) || !(b_arg > 0.0))
            throw InvalidInput("theta: eps, a, b must be positive");
        return rerouted([&] { return theta_value<double>(modulus, eps, a, b_arg); },
                        [&] {
                            return theta_value<LogReal>(modulus, LogReal::from_real(eps),
                                                        LogReal::from_real(a),
                                                        LogReal::from_real(b_arg));
                        });
    }

    double delta(double eps) const {
        require_eps(eps);
        return rerouted([&] { return delta_value<double>(modulus, eps, b); },
                        [&] { return delta_log(LogReal::from_real(eps)); });
    }

    double psi(double eps) const {
        require_eps(eps);
        return rerouted([&] { return psi_value<double>(modulus, eps, b); },
                        [&] { return psi_log(LogReal::from_real(eps)); });
    }

    LogReal phi_log(LogReal eps, double b_arg) const {
        return phi_value<LogReal>(modulus, eps, LogReal::from_real(b_arg));
    }
    LogReal delta_log(LogReal eps) const {
        return delta_value<LogReal>(modulus, eps, LogReal::from_real(b));
    }
    LogReal psi_log(LogReal eps) const {
        return psi_value<LogReal>(modulus, eps, LogReal::from_real(b));
    }

    PhiFn phi_fn() const {
        return [m = modulus](double e, double bb) { return phi_from_eta(m, e, bb); };
    }
    ThetaFn theta_fn() const {
        ModuliBundle copy = *this;
        return [copy](double e, double a, double bb) { return copy.theta(e, a, bb); };
    }

    /// Family strings accepted by the command line:
    /// "lp:<p>", "puniform:<p>:<c>", "cat:<kappa>:<diam>:<slack>".
    static ModuliBundle parse(const std::string& family_spec, double diameter_bound);
    std::string family_spec() const;

private:
    static void require_eps(double eps) {
        if (!(eps > 0.0)) throw InvalidInput("bundle: eps must be positive");
    }

    template <class Plain, class Logged>
    static double rerouted(Plain&& plain, Logged&& logged) {
        double v = plain();
        if (std::isfinite(v) && v >= 1e-300) return v;
        LogReal lv = logged();
        if (!lv.is_finite()) throw NumericFailure("moduli: non-finite intermediate");
        double back = lv.to_real();
        if (back == 0.0)
            throw NumericFailure("moduli: value below double range; use the LogReal entry points");
        return back;
    }
};

namespace detail {
inline std::vector<std::string> split_spec(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

inline double parse_real(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw InvalidInput(std::string("cannot parse ") + what + ": '" + s + "'");
    }
    if (pos != s.size())
        throw InvalidInput(std::string("trailing characters in ") + what + ": '" + s + "'");
    return v;
}
} // namespace detail

inline ModuliBundle ModuliBundle::parse(const std::string& family_spec, double diameter_bound) {
    auto parts = detail::split_spec(family_spec);
    if (parts.empty()) throw InvalidInput("empty family spec");
    const std::string& name = parts[0];
    if (name == "lp") {
        if (parts.size() != 2) throw InvalidInput("family spec: expected lp:<p>");
        double p = detail::parse_real(parts[1], "p");
        if (!(p > 1.0)) throw InvalidInput("family spec: p must exceed 1");
        return ModuliBundle(ConvexityModulus::lp_family(p), diameter_bound);
    }
    if (name == "puniform") {
        if (parts.size() != 3) throw InvalidInput("family spec: expected puniform:<p>:<c>");
        double p = detail::parse_real(parts[1], "p");
        double c = detail::parse_real(parts[2], "c");
        if (!(p > 1.0)) throw InvalidInput("family spec: p must exceed 1");
        return ModuliBundle(ConvexityModulus::p_uniform(p, c), diameter_bound);
    }
    if (name == "cat") {
        if (parts.size() != 4) throw InvalidInput("family spec: expected cat:<kappa>:<diam>:<slack>");
        double kappa = detail::parse_real(parts[1], "kappa");
        double diam = detail::parse_real(parts[2], "diam");
        double slack = detail::parse_real(parts[3], "slack");
        return ModuliBundle(ConvexityModulus::p_uniform(2.0, cat_kappa_parameter(kappa, diam, slack)),
                            diameter_bound);
    }
    throw InvalidInput("unknown family '" + name + "' (expected lp, puniform or cat)");
}

inline std::string ModuliBundle::family_spec() const {
    if (modulus.family() == ModulusFamily::lp)
        return "lp:" + std::to_string(modulus.p());
    return "puniform:" + std::to_string(modulus.p()) + ":" + std::to_string(modulus.c());
}

} // namespace lionman
