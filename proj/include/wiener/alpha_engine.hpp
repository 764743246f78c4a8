#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gaussians.hpp"
#include "pathsets.hpp"

namespace wiener {

enum class QuadratureRule {
    trapezoid,
    simpson,  // fourth-order extended Simpson with uniform interior weights
};

struct QuadratureConfig {
    int space_points = 1024;
    double truncation = 10.0;  // +-inf becomes +-truncation * sqrt(t_n)
    QuadratureRule rule = QuadratureRule::simpson;

    void validate() const {
        if (space_points < 16) throw DomainError("QuadratureConfig: space_points must be >= 16");
        if (!(truncation >= 6.0) || !std::isfinite(truncation))
            throw DomainError("QuadratureConfig: truncation must be finite and >= 6");
    }
};

/// alpha_{t_1..t_n} of a rectangle (or set expression) on a fixed grid.
struct AlphaValue {
    double value = 0.0;
    std::vector<Rational> grid;
    double est_quadrature_error = 0.0;
};

namespace detail {

// Kernel entries below exp(-kCutoff^2 / 2) ~ 2e-22 of the peak are dropped.
inline constexpr double kKernelCutoff = 10.0;

inline std::vector<double> quadrature_weights(int m, double h, QuadratureRule rule) {
    std::vector<double> w(static_cast<std::size_t>(m), h);
    if (rule == QuadratureRule::trapezoid) {
        w.front() = w.back() = 0.5 * h;
        return w;
    }
    static constexpr double end[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};
    for (int i = 0; i < 4; ++i) {
        w[static_cast<std::size_t>(i)] = end[i] * h;
        w[static_cast<std::size_t>(m - 1 - i)] = end[i] * h;
    }
    return w;
}

/**
 * One transfer step: out[j] = sum_k src[k] * phi(y_j - x_k; 0, variance) over the nodes
 * x_k = x0 + k*hx and y_j = y0 + j*hy. src already carries the quadrature weights `weight`.
 * Only nodes within kKernelCutoff standard deviations contribute; the Gaussian factors along a
 * row are generated by a two-term multiplicative recurrence, so each row costs two exp() calls.
 * Each row is divided by the discrete kernel mass and multiplied by the exact one, which removes
 * the aliasing error of a kernel narrower than a few node spacings.
 */
inline void transfer_step(std::span<const double> src, std::span<const double> weight, double x0, double hx,
                          std::span<double> out, double y0, double hy, double variance) {
    const double s = std::sqrt(variance);
    const double delta = hx / s;
    const double c = std::exp(-delta * delta);
    const auto m = static_cast<std::int64_t>(src.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double d = (y0 + static_cast<double>(j) * hy) - x0;
        auto k_lo = static_cast<std::int64_t>(std::ceil((d - kKernelCutoff * s) / hx));
        auto k_hi = static_cast<std::int64_t>(std::floor((d + kKernelCutoff * s) / hx));
        k_lo = std::max<std::int64_t>(k_lo, 0);
        k_hi = std::min<std::int64_t>(k_hi, m - 1);
        if (k_lo > k_hi) {
            out[j] = 0.0;
            continue;
        }
        const auto k0 = std::clamp<std::int64_t>(std::llround(d / hx), k_lo, k_hi);
        const double u0 = (d - static_cast<double>(k0) * hx) / s;
        const double e0 = std::exp(-0.5 * u0 * u0);
        double acc = src[static_cast<std::size_t>(k0)] * e0;
        double mass = weight[static_cast<std::size_t>(k0)] * e0;
        if (k0 < k_hi) {
            double e = e0;
            double ratio = std::exp(u0 * delta - 0.5 * delta * delta);
            for (std::int64_t k = k0 + 1; k <= k_hi; ++k) {
                e *= ratio;
                ratio *= c;
                acc += src[static_cast<std::size_t>(k)] * e;
                mass += weight[static_cast<std::size_t>(k)] * e;
            }
        }
        if (k0 > k_lo) {
            double e = e0;
            double ratio = std::exp(-u0 * delta - 0.5 * delta * delta);
            for (std::int64_t k = k0 - 1; k >= k_lo; --k) {
                e *= ratio;
                ratio *= c;
                acc += src[static_cast<std::size_t>(k)] * e;
                mass += weight[static_cast<std::size_t>(k)] * e;
            }
        }
        // Rescale the row so the discrete kernel carries its exact mass over [x_0, x_{m-1}].
        const double exact = std_normal_mass(-d / s, (static_cast<double>(m - 1) * hx - d) / s);
        out[j] = mass > 0.0 ? acc * exact / mass : 0.0;
    }
}

/**
 * P(W_{t_i} in [lo_i, hi_i] for all i) for finite, non-degenerate intervals by propagating the
 * constrained density slab by slab:
 *   g_1(y) = phi(y; t_1) on [lo_1, hi_1],
 *   g_i(y) = 1[lo_i, hi_i](y) * integral g_{i-1}(x) phi(y - x; t_i - t_{i-1}) dx,
 *   result  = integral g_n.
 * Each slab carries m uniform nodes spanning its interval exactly. g is renormalized after each
 * slab with the scale kept in log form, so long grids never underflow.
 */
inline double transfer_probability(std::span<const double> times, std::span<const double> lo,
                                   std::span<const double> hi, int m, QuadratureRule rule) {
    const std::size_t n = times.size();
    std::vector<double> g(static_cast<std::size_t>(m));
    std::vector<double> weighted(static_cast<std::size_t>(m));
    std::vector<double> next(static_cast<std::size_t>(m));

    double h = (hi[0] - lo[0]) / (m - 1);
    for (int j = 0; j < m; ++j) g[static_cast<std::size_t>(j)] = normal_pdf(lo[0] + j * h, times[0]);
    double log_scale = 0.0;

    for (std::size_t i = 1; i < n; ++i) {
        const auto w = quadrature_weights(m, h, rule);
        double peak = 0.0;
        for (int k = 0; k < m; ++k) peak = std::max(peak, g[static_cast<std::size_t>(k)]);
        if (peak == 0.0) return 0.0;
        for (int k = 0; k < m; ++k)
            weighted[static_cast<std::size_t>(k)] = w[static_cast<std::size_t>(k)] * (g[static_cast<std::size_t>(k)] / peak);
        log_scale += std::log(peak);
        const double h_next = (hi[i] - lo[i]) / (m - 1);
        transfer_step(weighted, w, lo[i - 1], h, next, lo[i], h_next, times[i] - times[i - 1]);
        g.swap(next);
        h = h_next;
    }
    const auto w = quadrature_weights(m, h, rule);
    double total = 0.0;
    for (int k = 0; k < m; ++k) total += w[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
    if (total <= 0.0) return 0.0;
    return std::exp(std::log(total) + log_scale);
}

}  // namespace detail

/**
 * alpha of the cylinder over a rectangle: the Gaussian probability that (W_{t_1}, ..., W_{t_n})
 * falls inside it. Cost O(n * m * w) with w the kernel half-width in nodes.
 *
 * Empty rectangles and rectangles with a zero-width interval (a Lebesgue-null slice) return an
 * exact 0 with zero error and no quadrature. The error estimate is |alpha(m) - alpha(m/2)|.
 */
inline AlphaValue alpha_rectangle(const Rectangle& rect, const QuadratureConfig& cfg) {
    cfg.validate();
    AlphaValue out;
    out.grid = rect.times;
    if (rect.empty || rect.size() == 0 || rect.degenerate()) return out;

    // unconstrained times integrate out exactly
    std::vector<double> times, lo, hi;
    for (std::size_t i = 0; i < rect.size(); ++i) {
        if (rect.lo[i] == -kInf && rect.hi[i] == kInf) continue;
        times.push_back(rect.times[i].to_double());
        lo.push_back(rect.lo[i]);
        hi.push_back(rect.hi[i]);
    }
    if (times.empty()) {
        out.value = 1.0;
        return out;
    }
    const double reach = cfg.truncation * std::sqrt(times.back());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        lo[i] = std::max(lo[i], -reach);
        hi[i] = std::min(hi[i], reach);
        // Whole interval beyond the truncation reach: mass below Phi(-truncation).
        if (!(lo[i] < hi[i])) return out;
    }
    const double fine = detail::transfer_probability(times, lo, hi, cfg.space_points, cfg.rule);
    const double coarse = detail::transfer_probability(times, lo, hi, cfg.space_points / 2, cfg.rule);
    out.value = std::max(fine, 0.0);
    out.est_quadrature_error = std::abs(fine - coarse);
    return out;
}

/**
 * alpha of a set expression on a grid that holds every breakpoint of every band in it.
 * Unions use inclusion-exclusion over the nonempty member intersections; differences subtract.
 * Negative round-off is clamped to 0; errors add up over the rectangles evaluated.
 */
inline AlphaValue alpha_expr(const SetExpr& expr, std::span<const Rational> grid, const QuadratureConfig& cfg) {
    cfg.validate();
    AlphaValue out;
    out.grid.assign(grid.begin(), grid.end());

    if (const auto* band = std::get_if<BandSet>(&expr)) return alpha_rectangle(project(*band, grid), cfg);

    if (const auto* u = std::get_if<UnionSet>(&expr)) {
        const std::size_t k = u->members.size();
        if (k > kMaxUnionArity)
            throw RefusalError("alpha_expr: union of " + std::to_string(k) + " bands exceeds the maximum arity " +
                               std::to_string(kMaxUnionArity));
        double total = 0.0;
        double err = 0.0;
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
            std::optional<BandSet> acc;
            bool empty = false;
            int bits = 0;
            for (std::size_t i = 0; i < k && !empty; ++i) {
                if (!(mask & (1u << i))) continue;
                ++bits;
                for (std::size_t j = 0; j < i; ++j)
                    if ((mask & (1u << j)) && u->disjoint[i][j]) empty = true;
                if (empty) break;
                if (!acc) {
                    acc = u->members[i];
                } else {
                    acc = intersect(*acc, u->members[i]);
                    if (!acc) empty = true;
                }
            }
            if (empty || acc->is_empty()) continue;
            const auto a = alpha_rectangle(project(*acc, grid), cfg);
            total += (bits % 2 == 1 ? 1.0 : -1.0) * a.value;
            err += a.est_quadrature_error;
        }
        out.value = std::max(total, 0.0);
        out.est_quadrature_error = err;
        return out;
    }

    const auto& d = std::get<DifferenceSet>(expr);
    const auto a_outer = alpha_rectangle(project(d.outer, grid), cfg);
    const auto a_inner = alpha_rectangle(project(d.inner, grid), cfg);
    out.value = std::max(a_outer.value - a_inner.value, 0.0);
    out.est_quadrature_error = a_outer.est_quadrature_error + a_inner.est_quadrature_error;
    return out;
}

}  // namespace wiener
