#pragma once

#include <cmath>
#include <cstdint>
#include <optional>

#include "moduli.hpp"

namespace lionman {

/// Smallest number of lion steps N whose combined reach N*D strictly exceeds
/// b + 1. Computed with a hair of upward slack so decimal parameters behave
/// like their exact values (30 * 0.1 counts as 3, not as > 3); a larger N
/// keeps the requirement valid, a smaller one would not.
inline std::int64_t choose_N(double D, double b) {
    if (!(D > 0.0) || !(b > 0.0)) throw InvalidInput("choose_N: D and b must be positive");
    const double threshold = (b + 1.0) * (1.0 + 1e-12);
    auto n = static_cast<std::int64_t>(std::max(1.0, std::floor(threshold / D)));
    while (static_cast<double>(n) * D <= threshold) ++n;
    while (n > 1 && static_cast<double>(n - 1) * D > threshold) --n;
    return n;
}

/// Largest admissible auxiliary parameter: min{1/(3N), D/4, alpha/3}.
inline double choose_eps(std::int64_t N, double D, double alpha) {
    if (N < 1) throw InvalidInput("choose_eps: N must be positive");
    if (!(D > 0.0) || !(alpha > 0.0)) throw InvalidInput("choose_eps: D and alpha must be positive");
    return std::min({1.0 / (3.0 * static_cast<double>(N)), D / 4.0, alpha / 3.0});
}

/// N-fold composition of Psi, evaluated in LogReal throughout; every step
/// must land strictly below its input.
inline LogReal psi_iterate(const ModuliBundle& bundle, double eps, std::int64_t N) {
    if (!(eps > 0.0)) throw InvalidInput("psi_iterate: eps must be positive");
    if (N < 0) throw InvalidInput("psi_iterate: N must be nonnegative");
    LogReal x = LogReal::from_real(eps);
    for (std::int64_t i = 0; i < N; ++i) {
        LogReal next = bundle.psi_log(x);
        if (!next.is_finite() || next.is_zero())
            throw NumericFailure("psi_iterate: non-finite intermediate");
        if (!(next < x)) throw NumericFailure("psi_iterate: contraction failed");
        x = next;
    }
    return x;
}

/// Validated parameter block of one bound evaluation: the smallest N whose
/// reach exceeds b + 1 and the largest admissible auxiliary eps.
struct RateParams {
    double D = 0.0;
    double b = 0.0;
    std::int64_t N = 0;
    double alpha = 0.0;
    double eps = 0.0;

    static RateParams choose(double D, double b, double alpha) {
        if (!(D > 0.0)) throw InvalidInput("RateParams: D must be positive");
        if (!(b >= D)) throw InvalidInput("RateParams: need b >= D");
        if (!(alpha > 0.0)) throw InvalidInput("RateParams: alpha must be positive");
        RateParams p{D, b, choose_N(D, b), alpha, 0.0};
        p.eps = choose_eps(p.N, D, alpha);
        // both selection rules hold by construction; keep them loud
        if (!(b + 1.0 < static_cast<double>(p.N) * D * (1.0 + 1e-9)))
            throw NumericFailure("RateParams: reach requirement failed");
        if (!(p.eps > 0.0) ||
            p.eps > std::min({1.0 / (3.0 * static_cast<double>(p.N)), D / 4.0, alpha / 3.0}))
            throw NumericFailure("RateParams: eps cap failed");
        return p;
    }
};

struct RateResult {
    std::int64_t N = 0;
    double eps = 0.0;
    LogReal gamma;   // Gamma = N * ceil(b / Phi(Psi^N(eps), b))
    LogReal omega;   // Omega = N + Gamma
    /// Present only when N + Gamma fits exactly below 2^53.
    std::optional<std::uint64_t> exact_omega;
    /// Set when the ceiling was left as the raw quotient (off by at most one
    /// unit at magnitudes where a unit is far below reporting precision).
    bool ceiling_approximated = false;
    double log10_gamma = 0.0;
    double log10_omega = 0.0;
};

namespace detail {
inline double round6(double x) {
    double r = std::round(x * 1e6) / 1e6;
    return std::isfinite(r) ? r : x;
}
} // namespace detail

/// Guaranteed capture bound: for every adversary, after omega steps the
/// lion-man distance stays below D + alpha. Takes the smallest N and the
/// largest admissible eps, the tightest instance the guarantee allows.
/// A pure function: identical inputs give bit-identical results.
inline RateResult compute_omega(const ModuliBundle& bundle, double D, double b, double alpha) {
    if (std::abs(bundle.b - b) > 1e-12 * std::max(1.0, std::abs(b)))
        throw InvalidInput("compute_omega: bundle diameter bound differs from b");
    RateParams params = RateParams::choose(D, b, alpha);

    RateResult r;
    r.N = params.N;
    r.eps = params.eps;

    LogReal tail = psi_iterate(bundle, r.eps, r.N);
    LogReal phi = bundle.phi_log(tail, b);
    LogReal quotient = LogReal::from_real(b) / phi;
    if (!quotient.is_finite()) throw NumericFailure("compute_omega: non-finite quotient");

    const double n_real = static_cast<double>(r.N);
    if (auto ceil_q = quotient.ceil_if_representable()) {
        r.ceiling_approximated = false;
        // integer values below 2^53 are exact in double; beyond that the
        // product only feeds log-space reporting
        long double gamma_i = static_cast<long double>(r.N) * static_cast<long double>(*ceil_q);
        long double omega_i = gamma_i + static_cast<long double>(r.N);
        r.gamma = LogReal::from_real(static_cast<double>(gamma_i));
        r.omega = LogReal::from_real(static_cast<double>(omega_i));
        if (omega_i < 9007199254740992.0L)
            r.exact_omega = static_cast<std::uint64_t>(omega_i);
    } else {
        r.ceiling_approximated = true;
        r.gamma = LogReal::from_real(n_real) * quotient;
        r.omega = LogReal::from_real(n_real) + r.gamma;
    }
    r.log10_gamma = detail::round6(r.gamma.log10());
    r.log10_omega = detail::round6(r.omega.log10());
    return r;
}

} // namespace lionman
