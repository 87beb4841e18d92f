#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>

#include "errors.hpp"

namespace lionman {

/// Nonnegative real carried as its natural logarithm, so products, powers and
/// quotients of astronomically small or large values never leave range.
/// Addition uses the stable log-sum-exp form. Zero is the -inf log element.
class LogReal {
public:
    LogReal() : lg_(-std::numeric_limits<double>::infinity()) {}

    static LogReal from_real(double x) {
        if (!(x >= 0.0)) throw InvalidInput("LogReal::from_real: negative or NaN input");
        return from_log(std::log(x));
    }
    static LogReal from_log(double natural_log) {
        LogReal r;
        r.lg_ = natural_log;
        return r;
    }

    bool is_zero() const { return std::isinf(lg_) && lg_ < 0.0; }
    /// Zero counts as finite; +inf or NaN logs signal a blown evaluation.
    bool is_finite() const { return is_zero() || std::isfinite(lg_); }

    double log_natural() const { return lg_; }
    double log10() const { return lg_ / 2.30258509299404568401799145468436421; }
    double to_real() const { return std::exp(lg_); }

    LogReal pow(double k) const {
        if (is_zero()) {
            if (k <= 0.0) throw InvalidInput("LogReal::pow: zero base requires a positive exponent");
            return LogReal();
        }
        return from_log(lg_ * k);
    }

    /// Exact integer ceiling when the value sits below 2^53; absent otherwise.
    std::optional<std::uint64_t> ceil_if_representable() const {
        if (is_zero()) return std::uint64_t{0};
        double v = to_real();
        if (!(v < 9007199254740992.0)) return std::nullopt;
        return static_cast<std::uint64_t>(std::ceil(v));
    }

    friend LogReal operator*(LogReal a, LogReal b) { return from_log(a.lg_ + b.lg_); }

    friend LogReal operator/(LogReal a, LogReal b) {
        if (b.is_zero()) throw InvalidInput("LogReal: division by zero");
        return from_log(a.lg_ - b.lg_);
    }

    friend LogReal operator+(LogReal a, LogReal b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        double hi = std::max(a.lg_, b.lg_), lo = std::min(a.lg_, b.lg_);
        return from_log(hi + std::log1p(std::exp(lo - hi)));
    }

    friend bool operator<(LogReal a, LogReal b) { return a.lg_ < b.lg_; }
    friend bool operator>(LogReal a, LogReal b) { return b < a; }
    friend bool operator<=(LogReal a, LogReal b) { return !(b < a); }
    friend bool operator>=(LogReal a, LogReal b) { return !(a < b); }
    friend bool operator==(LogReal a, LogReal b) { return a.lg_ == b.lg_; }

private:
    double lg_;
};

} // namespace lionman
