#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "timegrid.hpp"

namespace wiener {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Breakpoint {
    Rational t;
    double value = 0.0;
    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/**
 * Piecewise-linear function on [0, 1] given by sorted breakpoints, constant beyond the first
 * and last breakpoint. A single breakpoint with value +-inf encodes a one-sided (unbounded) bound.
 */
class PiecewiseLinear {
public:
    static PiecewiseLinear constant(double value) {
        if (std::isnan(value)) throw DomainError("PiecewiseLinear: NaN level");
        PiecewiseLinear f;
        f.points_.push_back({Rational(0), value});
        return f;
    }

    static PiecewiseLinear from_points(std::vector<Breakpoint> points) {
        if (points.empty()) throw DomainError("PiecewiseLinear: no breakpoints");
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto& p = points[i];
            if (p.t < Rational(0) || p.t > Rational(1))
                throw DomainError("PiecewiseLinear: breakpoint time " + p.t.to_string() + " outside [0, 1]");
            if (!std::isfinite(p.value)) {
                if (points.size() == 1 && !std::isnan(p.value)) continue;
                throw DomainError("PiecewiseLinear: infinite values are only allowed as a constant level");
            }
            if (i > 0 && !(points[i - 1].t < p.t))
                throw DomainError("PiecewiseLinear: breakpoint times must be strictly increasing");
        }
        PiecewiseLinear f;
        f.points_ = std::move(points);
        return f;
    }

    bool is_infinite() const { return points_.size() == 1 && std::isinf(points_[0].value); }
    std::span<const Breakpoint> breakpoints() const { return points_; }

    double at(const Rational& t) const {
        if (points_.size() == 1 || t <= points_.front().t) return points_.front().value;
        if (t >= points_.back().t) return points_.back().value;
        const auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                         [](const Rational& x, const Breakpoint& b) { return x < b.t; });
        const auto lo = hi - 1;
        if (lo->t == t) return lo->value;
        const double w = (t - lo->t).to_double() / (hi->t - lo->t).to_double();
        return lo->value + w * (hi->value - lo->value);
    }

    double at(double t) const {
        if (points_.size() == 1 || t <= points_.front().t.to_double()) return points_.front().value;
        if (t >= points_.back().t.to_double()) return points_.back().value;
        std::size_t k = 1;
        while (points_[k].t.to_double() < t) ++k;
        const double ta = points_[k - 1].t.to_double();
        const double tb = points_[k].t.to_double();
        const double w = (t - ta) / (tb - ta);
        return points_[k - 1].value + w * (points_[k].value - points_[k - 1].value);
    }

    friend bool operator==(const PiecewiseLinear&, const PiecewiseLinear&) = default;
    friend bool operator<(const PiecewiseLinear& a, const PiecewiseLinear& b) {
        return std::lexicographical_compare(
            a.points_.begin(), a.points_.end(), b.points_.begin(), b.points_.end(),
            [](const Breakpoint& x, const Breakpoint& y) {
                if (x.t != y.t) return x.t < y.t;
                return x.value < y.value;
            });
    }

private:
    std::vector<Breakpoint> points_;
};

namespace detail {

// Times (as doubles) where max/min over `pieces` can change slope: all breakpoints plus
// pairwise crossings inside shared linear segments, and the endpoints 0 and 1.
inline std::vector<double> envelope_kinks(std::span<const PiecewiseLinear> pieces) {
    std::vector<double> ts{0.0, 1.0};
    for (const auto& p : pieces)
        for (const auto& b : p.breakpoints()) ts.push_back(b.t.to_double());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::vector<double> crossings;
    for (std::size_t s = 0; s + 1 < ts.size(); ++s) {
        const double a = ts[s], b = ts[s + 1];
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].is_infinite()) continue;
            for (std::size_t j = i + 1; j < pieces.size(); ++j) {
                if (pieces[j].is_infinite()) continue;
                const double da = pieces[i].at(a) - pieces[j].at(a);
                const double db = pieces[i].at(b) - pieces[j].at(b);
                if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0))
                    crossings.push_back(a + (b - a) * da / (da - db));
            }
        }
    }
    ts.insert(ts.end(), crossings.begin(), crossings.end());
    std::sort(ts.begin(), ts.end());
    return ts;
}

// Breakpoints of two functions plus the endpoints; enough to compare them exactly.
inline std::vector<Rational> joint_breaks(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::vector<Rational> ts{Rational(0), Rational(1)};
    for (const auto& b : f.breakpoints()) ts.push_back(b.t);
    for (const auto& b : g.breakpoints()) ts.push_back(b.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

// f(t) <= g(t) for every t in [0, 1].
inline bool below_everywhere(const PiecewiseLinear& f, const PiecewiseLinear& g) {
    for (const auto& t : joint_breaks(f, g))
        if (f.at(t) > g.at(t)) return false;
    return true;
}

}  // namespace detail

/**
 * Path-constraint set {x in C : lower(t) <= x(t) <= upper(t) for all t in [0, 1]}.
 *
 * lower is the pointwise max of its pieces and upper the pointwise min of its pieces; a plain
 * band has one piece each, intersections concatenate pieces. The set may be empty (bounds cross
 * somewhere, or 0 is outside [lower(0), upper(0)]); is_empty() reports it exactly.
 */
class BandSet {
public:
    BandSet(PiecewiseLinear lower, PiecewiseLinear upper)
        : BandSet(std::vector<PiecewiseLinear>{std::move(lower)}, std::vector<PiecewiseLinear>{std::move(upper)}) {}

    BandSet(std::vector<PiecewiseLinear> lowers, std::vector<PiecewiseLinear> uppers)
        : lowers_(std::move(lowers)), uppers_(std::move(uppers)) {
        if (lowers_.empty() || uppers_.empty()) throw DomainError("BandSet: each bound needs at least one piece");
        for (const auto& l : lowers_)
            if (l.is_infinite() && l.at(0.0) > 0.0) throw DomainError("BandSet: lower bound of +inf");
        for (const auto& u : uppers_)
            if (u.is_infinite() && u.at(0.0) < 0.0) throw DomainError("BandSet: upper bound of -inf");
        normalize(lowers_, -kInf);
        normalize(uppers_, kInf);
        empty_ = compute_empty();
    }

    static BandSet whole_space() { return BandSet(PiecewiseLinear::constant(-kInf), PiecewiseLinear::constant(kInf)); }

    /// Constant band [lo, hi] (lo <= 0 <= hi for a nonempty set).
    static BandSet constant(double lo, double hi) {
        return BandSet(PiecewiseLinear::constant(lo), PiecewiseLinear::constant(hi));
    }

    double lower(const Rational& t) const {
        double v = -kInf;
        for (const auto& l : lowers_) v = std::max(v, l.at(t));
        return v;
    }
    double upper(const Rational& t) const {
        double v = kInf;
        for (const auto& u : uppers_) v = std::min(v, u.at(t));
        return v;
    }
    double lower(double t) const {
        double v = -kInf;
        for (const auto& l : lowers_) v = std::max(v, l.at(t));
        return v;
    }
    double upper(double t) const {
        double v = kInf;
        for (const auto& u : uppers_) v = std::min(v, u.at(t));
        return v;
    }

    std::span<const PiecewiseLinear> lower_pieces() const { return lowers_; }
    std::span<const PiecewiseLinear> upper_pieces() const { return uppers_; }

    bool is_empty() const { return empty_; }

    /// Every breakpoint time of either bound inside (0, 1], sorted and unique.
    std::vector<Rational> breakpoints() const {
        std::vector<Rational> ts;
        for (const auto* side : {&lowers_, &uppers_})
            for (const auto& f : *side)
                for (const auto& b : f.breakpoints())
                    if (b.t > Rational(0)) ts.push_back(b.t);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        return ts;
    }

    /// Finest dyadic level among the breakpoints (non-dyadic breakpoints are skipped).
    int breakpoint_level() const {
        int level = 0;
        for (const auto& t : breakpoints())
            if (t.is_dyadic()) level = std::max(level, t.dyadic_level());
        return level;
    }

    friend bool operator==(const BandSet& a, const BandSet& b) {
        return a.lowers_ == b.lowers_ && a.uppers_ == b.uppers_;
    }

private:
    // Sorted, deduplicated pieces; a +-inf sentinel is dropped once a finite piece exists.
    static void normalize(std::vector<PiecewiseLinear>& pieces, double sentinel) {
        std::sort(pieces.begin(), pieces.end());
        pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
        const bool has_finite = std::any_of(pieces.begin(), pieces.end(), [](const auto& p) { return !p.is_infinite(); });
        if (has_finite)
            std::erase_if(pieces, [&](const auto& p) { return p.is_infinite() && p.at(0.0) == sentinel; });
        // drop finite pieces that never bind
        const bool lower = sentinel < 0;
        for (std::size_t i = 0; i < pieces.size();) {
            bool slack = false;
            for (std::size_t j = 0; j < pieces.size() && !slack; ++j) {
                if (i == j || pieces[i].is_infinite() || pieces[j].is_infinite()) continue;
                slack = lower ? detail::below_everywhere(pieces[i], pieces[j]) : detail::below_everywhere(pieces[j], pieces[i]);
            }
            if (slack) pieces.erase(pieces.begin() + static_cast<std::ptrdiff_t>(i));
            else ++i;
        }
    }

    bool compute_empty() const {
        if (lower(Rational(0)) > 0.0 || upper(Rational(0)) < 0.0) return true;
        for (const auto& l : lowers_)
            for (const auto& u : uppers_)
                if (!detail::below_everywhere(l, u)) return true;
        return false;
    }

    std::vector<PiecewiseLinear> lowers_;
    std::vector<PiecewiseLinear> uppers_;
    bool empty_ = false;
};

/// Pointwise intersection [max of lowers, min of uppers]; nullopt is the empty marker.
inline std::optional<BandSet> intersect(const BandSet& a, const BandSet& b) {
    std::vector<PiecewiseLinear> lowers(a.lower_pieces().begin(), a.lower_pieces().end());
    lowers.insert(lowers.end(), b.lower_pieces().begin(), b.lower_pieces().end());
    std::vector<PiecewiseLinear> uppers(a.upper_pieces().begin(), a.upper_pieces().end());
    uppers.insert(uppers.end(), b.upper_pieces().begin(), b.upper_pieces().end());
    BandSet out(std::move(lowers), std::move(uppers));
    if (out.is_empty()) return std::nullopt;
    return out;
}

/// Exact projection of a band onto finitely many times: a product of closed intervals.
struct Rectangle {
    std::vector<Rational> times;
    std::vector<double> lo;
    std::vector<double> hi;
    bool empty = false;

    std::size_t size() const { return times.size(); }
    bool degenerate() const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (lo[i] == hi[i]) return true;
        return false;
    }
    bool contains_point(std::span<const double> x) const {
        if (empty) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] < lo[i] || x[i] > hi[i]) return false;
        return true;
    }
};

/**
 * Projects a band onto sorted times in (0, 1]. The times must include every band breakpoint in
 * (0, 1]; then both bounds are linear between consecutive times and the rectangle is exactly the
 * image of the band.
 */
inline Rectangle project(const BandSet& band, std::span<const Rational> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        require_unit_interval(times[i], "project");
        if (i > 0 && !(times[i - 1] < times[i])) throw DomainError("project: times must be strictly increasing");
    }
    for (const auto& b : band.breakpoints())
        if (!std::binary_search(times.begin(), times.end(), b))
            throw PreconditionError("project: grid is missing band breakpoint t = " + b.to_string() +
                                    " (merge the breakpoints into the grid first)");
    Rectangle rect;
    rect.times.assign(times.begin(), times.end());
    rect.lo.reserve(times.size());
    rect.hi.reserve(times.size());
    rect.empty = band.is_empty();
    for (const auto& t : times) {
        rect.lo.push_back(band.lower(t));
        rect.hi.push_back(band.upper(t));
        if (rect.lo.back() > rect.hi.back()) rect.empty = true;
    }
    return rect;
}

/// Membership of a piecewise-linear path (path(0) == 0) in a band; exact.
inline bool contains(const BandSet& band, const PiecewiseLinear& path) {
    if (path.is_infinite() || path.at(Rational(0)) != 0.0)
        throw DomainError("contains: path must be finite and vanish at t = 0");
    if (band.is_empty()) return false;
    for (const auto& l : band.lower_pieces())
        if (!detail::below_everywhere(l, path)) return false;
    for (const auto& u : band.upper_pieces())
        if (!detail::below_everywhere(path, u)) return false;
    return true;
}

namespace detail {

// max over `inner` >= max over `outer` (or min <= min when `upper`) everywhere, up to `tol`.
inline bool envelope_dominates(std::span<const PiecewiseLinear> outer, std::span<const PiecewiseLinear> inner,
                               bool upper, double tol = 1e-12) {
    std::vector<PiecewiseLinear> all(outer.begin(), outer.end());
    all.insert(all.end(), inner.begin(), inner.end());
    auto env = [&](std::span<const PiecewiseLinear> ps, double t) {
        double v = upper ? kInf : -kInf;
        for (const auto& p : ps) v = upper ? std::min(v, p.at(t)) : std::max(v, p.at(t));
        return v;
    };
    for (double t : envelope_kinks(all)) {
        const double o = env(outer, t);
        const double i = env(inner, t);
        if (upper ? (i > o + tol) : (i < o - tol)) return false;
    }
    return true;
}

}  // namespace detail

/// inner is a subset of outer (pointwise bound comparison; the empty set is a subset of anything).
inline bool is_subset(const BandSet& inner, const BandSet& outer) {
    if (inner.is_empty()) return true;
    if (outer.is_empty()) return false;
    return detail::envelope_dominates(outer.lower_pieces(), inner.lower_pieces(), false) &&
           detail::envelope_dominates(outer.upper_pieces(), inner.upper_pieces(), true);
}

inline constexpr std::size_t kMaxUnionArity = 8;

struct UnionSet {
    std::vector<BandSet> members;
    // disjoint[i][j]: intersect(members[i], members[j]) is empty.
    std::vector<std::vector<bool>> disjoint;

    explicit UnionSet(std::vector<BandSet> ms) : members(std::move(ms)) {
        if (members.empty()) throw DomainError("UnionSet: no members");
        const std::size_t k = members.size();
        disjoint.assign(k, std::vector<bool>(k, false));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) disjoint[i][j] = !intersect(members[i], members[j]).has_value();
    }
};

struct DifferenceSet {
    BandSet outer;
    BandSet inner;

    DifferenceSet(BandSet o, BandSet i) : outer(std::move(o)), inner(std::move(i)) {
        if (!is_subset(inner, outer)) throw DomainError("DifferenceSet: inner band is not contained in outer band");
    }
};

using SetExpr = std::variant<BandSet, UnionSet, DifferenceSet>;

/// Every breakpoint of every band in the expression, in (0, 1].
inline std::vector<Rational> breakpoints(const SetExpr& expr) {
    std::vector<Rational> ts;
    auto add = [&](const BandSet& b) {
        auto bs = b.breakpoints();
        ts.insert(ts.end(), bs.begin(), bs.end());
    };
    std::visit(
        [&](const auto& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, BandSet>) {
                add(e);
            } else if constexpr (std::is_same_v<E, UnionSet>) {
                for (const auto& m : e.members) add(m);
            } else {
                add(e.outer);
                add(e.inner);
            }
        },
        expr);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

struct StructuralReport {
    bool member = false;                    // contains(band, path)
    std::optional<int> first_excluded_level;  // first level whose projection excludes the path
    int levels_checked = 0;
    bool consistent = false;                // member <=> never excluded
};

/**
 * Checks K = intersection over levels of the preimages of the projections of K, for one path:
 * a member must project inside the rectangle at every level, a non-member must fall outside
 * at some level <= max_level. Each level's grid is the dyadic grid merged with the band breakpoints.
 */
inline StructuralReport structural_relation_check(const BandSet& band, const PiecewiseLinear& path, int max_level) {
    if (max_level < 0 || max_level > kDefaultMaxLevel)
        throw DomainError("structural_relation_check: max_level out of range");
    int path_level = 0;
    for (const auto& b : path.breakpoints()) {
        if (!b.t.is_dyadic()) throw DomainError("structural_relation_check: path breakpoints must be dyadic");
        path_level = std::max(path_level, b.t.dyadic_level());
    }
    if (max_level < path_level || max_level < band.breakpoint_level())
        throw PreconditionError("structural_relation_check: max_level below the breakpoint level of band or path");

    StructuralReport report;
    report.member = contains(band, path);
    const auto breaks = band.breakpoints();
    for (int level = 0; level <= max_level; ++level) {
        const auto grid = merge_with(grid_at_level(level, max_level), breaks);
        const Rectangle rect = project(band, grid);
        std::vector<double> x;
        x.reserve(grid.size());
        for (const auto& t : grid) x.push_back(path.at(t));
        ++report.levels_checked;
        if (!rect.contains_point(x)) {
            report.first_excluded_level = level;
            break;
        }
    }
    report.consistent = report.member != report.first_excluded_level.has_value();
    return report;
}

}  // namespace wiener
