#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace wiener {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;  // 1/sqrt(2*pi)

/// Standard normal CDF. Evaluated through erfc in whichever tail keeps full relative accuracy.
inline double std_normal_cdf(double z) {
    if (!std::isfinite(z)) throw DomainError("std_normal_cdf: non-finite input");
    return 0.5 * std::erfc(-z * (std::numbers::sqrt2 / 2.0));
}

/// P(a <= Z <= b) for standard normal Z, accurate in both tails.
inline double std_normal_mass(double a, double b) {
    if (!(a < b)) return 0.0;
    if (a >= 0.0) return 0.5 * (std::erfc(a * (std::numbers::sqrt2 / 2.0)) - std::erfc(b * (std::numbers::sqrt2 / 2.0)));
    if (b <= 0.0) return 0.5 * (std::erfc(-b * (std::numbers::sqrt2 / 2.0)) - std::erfc(-a * (std::numbers::sqrt2 / 2.0)));
    return 1.0 - 0.5 * (std::erfc(-a * (std::numbers::sqrt2 / 2.0)) + std::erfc(b * (std::numbers::sqrt2 / 2.0)));
}

inline double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

/// N(0, variance) density at x.
inline double normal_pdf(double x, double variance) {
    return kInvSqrt2Pi / std::sqrt(variance) * std::exp(-0.5 * x * x / variance);
}

/**
 * Inverse standard normal CDF, Wichura's AS241 (PPND16), relative accuracy about 1e-16.
 * Open interval only: p must lie in (0, 1).
 */
inline double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("std_normal_quantile: p must lie in (0, 1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                    45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                    21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                     1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
                  4.6303378461565452959) * r + 1.42343711074968357734) /
                (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                     0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
                  2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                     0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
                  5.4637849111641143699) * r + 6.6579046435011037772) /
                (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                     7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
                  0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

namespace detail {

inline void validate_times(std::span<const double> times, const char* who) {
    if (times.empty()) throw DomainError(std::string(who) + ": empty time list");
    double prev = 0.0;
    for (double t : times) {
        if (!std::isfinite(t) || t <= 0.0) throw DomainError(std::string(who) + ": times must be positive and finite");
        if (t <= prev) throw DomainError(std::string(who) + ": times must be strictly increasing (sorted, no duplicates)");
        prev = t;
    }
}

}  // namespace detail

/// Covariance of Brownian motion at the given times: entry (j, r) = min(t_j, t_r). Never stored densely.
class MinCovariance {
public:
    explicit MinCovariance(std::span<const double> times) : times_(times.begin(), times.end()) {
        detail::validate_times(times_, "MinCovariance");
    }
    std::size_t size() const { return times_.size(); }
    double operator()(std::size_t j, std::size_t r) const { return std::min(times_[j], times_[r]); }
    std::span<const double> times() const { return times_; }

private:
    std::vector<double> times_;
};

/**
 * Closed-form lower-triangular Cholesky factor of MinCovariance. Entry (i, j) is
 * sqrt(t_j - t_{j-1}) for j <= i, zero above the diagonal; L * L^T reproduces min(t_i, t_j).
 * Applying it to a vector of independent standard normals is a cumulative sum of scaled increments.
 */
class IncrementFactor {
public:
    explicit IncrementFactor(std::span<const double> times) {
        detail::validate_times(times, "cholesky_min");
        scale_.reserve(times.size());
        double prev = 0.0;
        for (double t : times) {
            scale_.push_back(std::sqrt(t - prev));
            prev = t;
        }
    }

    std::size_t size() const { return scale_.size(); }
    double operator()(std::size_t i, std::size_t j) const { return j <= i ? scale_[j] : 0.0; }
    std::span<const double> pivots() const { return scale_; }

    // out = L * z
    void apply(std::span<const double> z, std::span<double> out) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < scale_.size(); ++i) {
            acc += scale_[i] * z[i];
            out[i] = acc;
        }
    }

private:
    std::vector<double> scale_;
};

inline IncrementFactor cholesky_min(std::span<const double> times) { return IncrementFactor(times); }

/// det(min(t_i, t_j)) = product of increments t_i - t_{i-1}, with t_0 = 0.
inline double det_min_cov(std::span<const double> times) {
    detail::validate_times(times, "det_min_cov");
    double det = 1.0;
    double prev = 0.0;
    for (double t : times) {
        det *= t - prev;
        prev = t;
    }
    return det;
}

/// log f_{t_1..t_k}(x) via the independent-increments factorization; O(k).
inline double log_joint_density(std::span<const double> times, std::span<const double> point) {
    detail::validate_times(times, "joint_density");
    if (times.size() != point.size()) throw DomainError("joint_density: point length does not match time count");
    double acc = 0.0;
    double t_prev = 0.0;
    double x_prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(point[i])) throw DomainError("joint_density: non-finite coordinate");
        const double dt = times[i] - t_prev;
        const double dx = point[i] - x_prev;
        acc += -0.5 * dx * dx / dt - 0.5 * std::log(2.0 * std::numbers::pi * dt);
        t_prev = times[i];
        x_prev = point[i];
    }
    return acc;
}

/// Joint density of (W_{t_1}, ..., W_{t_k}) at the given point.
inline double joint_density(std::span<const double> times, std::span<const double> point) {
    return std::exp(log_joint_density(times, point));
}

}  // namespace wiener
