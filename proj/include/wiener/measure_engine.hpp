#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "alpha_engine.hpp"
#include "errors.hpp"
#include "gaussians.hpp"
#include "mc_oracle.hpp"
#include "parallel.hpp"
#include "pathsets.hpp"
#include "timegrid.hpp"

namespace wiener {

/**
 * How the limit over refinement levels is driven. Levels run start_level..max_level on the
 * nested dyadic grids (each merged with the set's breakpoints); the loop stops early once two
 * successive alphas differ by less than stop_delta.
 */
struct RefinementPolicy {
    int start_level = 0;
    int max_level = 8;
    double stop_delta = 1e-4;
    bool extrapolate = false;  // Richardson in sqrt(grid gap) over the last two levels

    void validate() const {
        if (start_level < 0 || start_level > max_level || max_level > kDefaultMaxLevel)
            throw DomainError("RefinementPolicy: need 0 <= start_level <= max_level <= " +
                              std::to_string(kDefaultMaxLevel));
        if (!(stop_delta > 0.0)) throw DomainError("RefinementPolicy: stop_delta must be positive");
    }
};

enum class StopReason { delta, max_level };

inline const char* to_string(StopReason r) { return r == StopReason::delta ? "delta" : "max_level"; }

struct TraceEntry {
    int level = 0;
    AlphaValue alpha;
};

struct MeasureEstimate {
    double value = 0.0;
    double last_alpha = 0.0;  // value before any extrapolation
    std::vector<TraceEntry> alpha_trace;
    StopReason stopped_by = StopReason::max_level;
    std::optional<McEstimate> mc_cross_check;
    bool monotone_certified = false;
    std::vector<std::string> warnings;

    double quadrature_error() const { return alpha_trace.empty() ? 0.0 : alpha_trace.back().alpha.est_quadrature_error; }
    std::vector<Rational> final_grid() const {
        return alpha_trace.empty() ? std::vector<Rational>{} : alpha_trace.back().alpha.grid;
    }
};

/// Slack allowed for alpha_{L+1} > alpha_L: twice the larger quadrature error estimate, plus round-off.
inline double monotone_slack(const AlphaValue& prev, const AlphaValue& next) {
    return 2.0 * std::max(prev.est_quadrature_error, next.est_quadrature_error) + 1e-12;
}

/// Richardson extrapolation assuming alpha_L = limit + c * sqrt(2^-L).
inline double sqrt_gap_extrapolate(double alpha_coarse, double alpha_fine) {
    return (std::numbers::sqrt2 * alpha_fine - alpha_coarse) / (std::numbers::sqrt2 - 1.0);
}

namespace detail {

inline void check_monotone(const AlphaValue& prev, const AlphaValue& next, int level) {
    if (next.value <= prev.value + monotone_slack(prev, next)) return;
    std::ostringstream msg;
    msg.precision(12);
    msg << "monotonicity violated: alpha at level " << level << " = " << next.value << " exceeds level " << level - 1
        << " value " << prev.value << " by more than the quadrature slack " << monotone_slack(prev, next);
    throw InternalConsistencyError(msg.str());
}

// The refinement loop shared by bands and unions: both are closed path sets, so alpha must
// decrease level over level up to quadrature slack.
inline MeasureEstimate refine(const SetExpr& expr, const RefinementPolicy& policy, const QuadratureConfig& cfg) {
    policy.validate();
    cfg.validate();
    const auto breaks = breakpoints(expr);
    MeasureEstimate est;
    est.monotone_certified = true;
    for (int level = policy.start_level; level <= policy.max_level; ++level) {
        const auto grid = merge_with(grid_at_level(level), breaks);
        TraceEntry entry{level, alpha_expr(expr, grid, cfg)};
        if (!est.alpha_trace.empty()) check_monotone(est.alpha_trace.back().alpha, entry.alpha, level);
        est.alpha_trace.push_back(std::move(entry));
        const std::size_t n = est.alpha_trace.size();
        // a level whose merged grid equals the previous one adds nothing and cannot count as convergence
        if (n >= 2 && est.alpha_trace[n - 1].alpha.grid.size() > est.alpha_trace[n - 2].alpha.grid.size() &&
            std::abs(est.alpha_trace[n - 1].alpha.value - est.alpha_trace[n - 2].alpha.value) < policy.stop_delta) {
            est.stopped_by = StopReason::delta;
            break;
        }
    }
    est.last_alpha = est.alpha_trace.back().alpha.value;
    est.value = est.last_alpha;
    const std::size_t n = est.alpha_trace.size();
    if (policy.extrapolate) {
        if (n >= 2) {
            const double x = sqrt_gap_extrapolate(est.alpha_trace[n - 2].alpha.value, est.alpha_trace[n - 1].alpha.value);
            est.value = std::clamp(x, 0.0, est.alpha_trace.front().alpha.value);
        } else {
            est.warnings.push_back("extrapolation needs at least two levels; returning the last alpha");
        }
    }
    return est;
}

}  // namespace detail

/**
 * phi of a band: the limit of alpha over refining grids. Each level's alpha is checked against the
 * previous one (it may not grow beyond quadrature slack; a violation throws
 * InternalConsistencyError). With an McConfig the final grid is cross-checked by sampling.
 */
inline MeasureEstimate phi_band(const BandSet& band, const RefinementPolicy& policy, const QuadratureConfig& cfg,
                                const std::optional<McConfig>& mc = std::nullopt) {
    auto est = detail::refine(SetExpr{band}, policy, cfg);
    if (mc) est.mc_cross_check = estimate_rectangle(project(band, est.final_grid()), *mc);
    return est;
}

/**
 * mu on the set algebra. Bands go through phi_band and unions through the same refinement loop
 * with inclusion-exclusion at each level. A difference is mu(outer) - mu(inner); a negative
 * result (quadrature noise) is clamped to 0 with a warning. Both sides are refined together on
 * the same grids, each checked for monotonicity, and the run stops once both have settled.
 */
inline MeasureEstimate mu_expr(const SetExpr& expr, const RefinementPolicy& policy, const QuadratureConfig& cfg,
                               const std::optional<McConfig>& mc = std::nullopt) {
    if (const auto* band = std::get_if<BandSet>(&expr)) return phi_band(*band, policy, cfg, mc);
    if (std::holds_alternative<UnionSet>(expr)) {
        const auto& u = std::get<UnionSet>(expr);
        if (u.members.size() > kMaxUnionArity)
            throw RefusalError("mu_expr: union of " + std::to_string(u.members.size()) +
                               " bands exceeds the maximum arity " + std::to_string(kMaxUnionArity));
        return detail::refine(expr, policy, cfg);
    }

    const auto& d = std::get<DifferenceSet>(expr);
    policy.validate();
    cfg.validate();
    const auto breaks = breakpoints(expr);
    MeasureEstimate est;
    est.monotone_certified = true;
    std::optional<AlphaValue> prev_outer, prev_inner;
    for (int level = policy.start_level; level <= policy.max_level; ++level) {
        const auto grid = merge_with(grid_at_level(level), breaks);
        const auto o = alpha_expr(SetExpr{d.outer}, grid, cfg);
        const auto i = alpha_expr(SetExpr{d.inner}, grid, cfg);
        bool settled = false;
        if (prev_outer) {
            detail::check_monotone(*prev_outer, o, level);
            detail::check_monotone(*prev_inner, i, level);
            settled = grid.size() > prev_outer->grid.size() && std::abs(o.value - prev_outer->value) < policy.stop_delta &&
                      std::abs(i.value - prev_inner->value) < policy.stop_delta;
        }
        TraceEntry e{level, o};
        e.alpha.value = o.value - i.value;
        e.alpha.est_quadrature_error = o.est_quadrature_error + i.est_quadrature_error;
        est.alpha_trace.push_back(std::move(e));
        prev_outer = o;
        prev_inner = i;
        if (settled) {
            est.stopped_by = StopReason::delta;
            break;
        }
    }
    const std::size_t n = est.alpha_trace.size();
    est.last_alpha = est.alpha_trace.back().alpha.value;
    est.value = est.last_alpha;
    if (policy.extrapolate) {
        if (n >= 2) est.value = sqrt_gap_extrapolate(est.alpha_trace[n - 2].alpha.value, est.last_alpha);
        else est.warnings.push_back("extrapolation needs at least two levels; returning the last alpha");
    }
    if (est.value < 0.0) {
        std::ostringstream msg;
        msg << "difference measure " << est.value << " clamped to 0";
        est.warnings.push_back(msg.str());
        est.value = 0.0;
    }
    return est;
}

/// P(sup_{t <= 1} W_t <= a) = 2 Phi(a) - 1 (reflection principle).
inline double oracle_one_sided(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("oracle_one_sided: barrier must be positive and finite");
    return std::erf(a * (std::numbers::sqrt2 / 2.0));
}

/**
 * P(sup_{t <= 1} |W_t| <= a) via the alternating image series
 *   sum_k (-1)^k [Phi((2k+1)a) - Phi((2k-1)a)],
 * folded onto k >= 0 and summed until the next term drops below 1e-16.
 */
inline double oracle_two_sided(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("oracle_two_sided: barrier must be positive and finite");
    double sum = std_normal_mass(-a, a);
    for (long k = 1;; ++k) {
        const double term = 2.0 * std_normal_mass(static_cast<double>(2 * k - 1) * a, static_cast<double>(2 * k + 1) * a);
        sum += (k % 2 == 1 ? -term : term);
        const double next = 2.0 * std_normal_mass(static_cast<double>(2 * k + 1) * a, static_cast<double>(2 * k + 3) * a);
        if (next < 1e-16) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

enum class FamilyDirection { shrinking, widening };

/// A nested one-parameter family of bands, evaluated at `params` in order.
struct BandFamily {
    std::string name;
    std::vector<double> params;
    std::function<BandSet(double)> member;
    std::optional<BandSet> limit;  // band the family converges to; nullopt means the whole space
    FamilyDirection direction = FamilyDirection::shrinking;
};

struct ContinuityReport {
    std::string name;
    std::vector<double> params;
    std::vector<double> values;
    std::vector<double> errors;
    double limit_value = 0.0;
    double final_gap = 0.0;  // |last member value - limit value|
    bool monotone = false;
    bool converged = false;
    double tolerance = 0.0;
};

/**
 * Evaluates mu along a nested family and checks it moves monotonically (down for shrinking,
 * up for widening) and ends within `tolerance` of mu of the limit band. Members are evaluated in
 * parallel; each value is independent of the worker count.
 */
inline ContinuityReport continuity_suite(const BandFamily& family, const RefinementPolicy& policy,
                                         const QuadratureConfig& cfg, double tolerance, int workers = 1) {
    if (family.params.empty()) throw DomainError("continuity_suite: empty family");
    ContinuityReport rep;
    rep.name = family.name;
    rep.params = family.params;
    rep.tolerance = tolerance;
    const std::size_t n = family.params.size();
    std::vector<MeasureEstimate> ests(n + 1);
    const BandSet limit = family.limit.value_or(BandSet::whole_space());
    parallel_for(n + 1, workers, [&](std::size_t i) {
        ests[i] = i < n ? phi_band(family.member(family.params[i]), policy, cfg) : phi_band(limit, policy, cfg);
    });
    for (std::size_t i = 0; i < n; ++i) {
        rep.values.push_back(ests[i].value);
        rep.errors.push_back(ests[i].quadrature_error());
    }
    rep.limit_value = ests[n].value;
    rep.monotone = true;
    for (std::size_t i = 1; i < n; ++i) {
        const double slack = 2.0 * policy.stop_delta + 2.0 * (rep.errors[i] + rep.errors[i - 1]) + 1e-12;
        const double step = rep.values[i] - rep.values[i - 1];
        if (family.direction == FamilyDirection::shrinking ? step > slack : step < -slack) rep.monotone = false;
    }
    rep.final_gap = std::abs(rep.values.back() - rep.limit_value);
    rep.converged = rep.final_gap <= tolerance;
    return rep;
}

}  // namespace wiener
