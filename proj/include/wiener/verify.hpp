#pragma once

// The acceptance suite: each criterion is a self-contained, seeded experiment that produces one
// report line. Report text contains no timings, so it is byte-identical across runs and worker
// counts; timings go to the optional `timing` stream.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "alpha_engine.hpp"
#include "gaussians.hpp"
#include "mc_oracle.hpp"
#include "measure_engine.hpp"
#include "oracles.hpp"
#include "pathsets.hpp"
#include "rng.hpp"

namespace wiener {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;

    std::string line() const {
        return std::string(passed ? "[PASS] " : "[FAIL] ") + "C" + std::to_string(id) + " " + name + ": " + detail;
    }
};

struct VerifyOptions {
    std::uint64_t seed = 42;
    int workers = 1;
    std::set<int> only;            // empty: every criterion
    std::ostream* timing = nullptr;  // per-criterion wall time, if wanted
};

struct VerifyReport {
    std::vector<CriterionResult> results;
    bool all_passed() const {
        for (const auto& r : results)
            if (!r.passed) return false;
        return true;
    }
    std::string text() const {
        std::string s;
        for (const auto& r : results) s += r.line() + "\n";
        return s;
    }
};

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

/// Deterministic uniform source for building random test sets (independent of std distributions).
class TestRng {
public:
    explicit TestRng(std::uint64_t seed) : gen_(mix_seed(seed)) {}
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)) % (hi - lo + 1); }

private:
    std::mt19937_64 gen_;
};

// Random band with breakpoints on the level-`level` dyadic grid, containing 0 at t = 0.
// Each side is unbounded with probability `p_inf`.
inline BandSet random_band(TestRng& rng, int level = 3, double p_inf = 0.2, double near = 0.3, double far = 2.5) {
    const int n = 1 << level;
    auto side = [&](double sign) {
        if (rng.uniform() < p_inf) return PiecewiseLinear::constant(sign * kInf);
        std::vector<Breakpoint> pts;
        for (int k = 0; k <= n; ++k) pts.push_back({Rational::dyadic(k, level), sign * rng.uniform(near, far)});
        return PiecewiseLinear::from_points(std::move(pts));
    };
    auto lower = side(-1.0);
    auto upper = side(1.0);
    return BandSet(std::move(lower), std::move(upper));
}

inline RefinementPolicy all_levels(int lo, int hi, bool extrapolate = false) {
    RefinementPolicy p;
    p.start_level = lo;
    p.max_level = hi;
    p.stop_delta = 1e-300;  // never stop early
    p.extrapolate = extrapolate;
    return p;
}

// alpha at every level lo..hi, with no early stop (an exactly repeated value would end a refinement run).
inline std::vector<AlphaValue> level_trace(const SetExpr& expr, int lo, int hi, const QuadratureConfig& cfg = {}) {
    const auto breaks = breakpoints(expr);
    std::vector<AlphaValue> out;
    for (int level = lo; level <= hi; ++level) out.push_back(alpha_expr(expr, merge_with(grid_at_level(level), breaks), cfg));
    return out;
}

}  // namespace detail

// C1: alpha traces over levels 0..8 are nonincreasing within 2x the quadrature error estimate.
inline CriterionResult criterion_monotonicity(const VerifyOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    constexpr int kBands = 50;
    std::vector<double> worst(kBands, -1.0);
    std::vector<int> ok(kBands, 0);
    parallel_for(kBands, opt.workers, [&](std::size_t b) {
        detail::TestRng rng(opt.seed * 1000 + 100 + b);
        const BandSet band = detail::random_band(rng);
        const auto trace = detail::level_trace(SetExpr{band}, 0, 8);
        double w = -1.0;
        bool good = trace.size() == 9;
        for (std::size_t i = 1; i < trace.size(); ++i) {
            const auto& p = trace[i - 1];
            const auto& c = trace[i];
            const double excess = c.value - p.value;
            w = std::max(w, excess);
            if (excess > 2.0 * std::max(p.est_quadrature_error, c.est_quadrature_error) + 1e-12) good = false;
        }
        worst[b] = w;
        ok[b] = good ? 1 : 0;
    });
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int n_ok = 0;
    double max_excess = -1.0;
    for (int b = 0; b < kBands; ++b) {
        n_ok += ok[b];
        max_excess = std::max(max_excess, worst[b]);
    }
    CriterionResult r{1, "monotone alpha trace", n_ok == kBands && secs < 60.0, ""};
    r.detail = std::to_string(n_ok) + "/" + std::to_string(kBands) + " random bands nonincreasing over levels 0..8" +
               " (largest level-over-level increase " + detail::fmt("%.3e", max_excess) + ")" +
               (secs < 60.0 ? "" : "; runtime budget of 60 s exceeded");
    if (opt.timing) *opt.timing << "C1 " << secs << " s\n";
    return r;
}

// C2 / C3: discrete-monitoring barrier probabilities at level 10 against the closed forms.
inline CriterionResult criterion_barrier(const VerifyOptions& opt, bool two_sided) {
    const std::vector<double> barriers{0.5, 1.0, 2.0};
    struct Row {
        double raw = 0, extrap = 0, oracle = 0, secs = 0;
    };
    std::vector<Row> rows(barriers.size());
    parallel_for(barriers.size(), opt.workers, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        const double a = barriers[i];
        const BandSet band = two_sided ? BandSet::constant(-a, a) : BandSet::constant(-kInf, a);
        QuadratureConfig cfg;
        cfg.space_points = 2048;
        const auto est = phi_band(band, detail::all_levels(0, 10, true), cfg);
        rows[i].raw = est.last_alpha;
        rows[i].extrap = est.value;
        rows[i].oracle = two_sided ? oracle_two_sided(a) : oracle_one_sided(a);
        rows[i].secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    bool pass = true;
    std::string detail;
    for (std::size_t i = 0; i < barriers.size(); ++i) {
        const auto& w = rows[i];
        const bool above = w.raw > w.oracle;
        const bool raw_ok = std::abs(w.raw - w.oracle) <= 5e-3;
        const bool ext_ok = std::abs(w.extrap - w.oracle) <= 1e-3;
        const bool time_ok = w.secs < 30.0;
        pass = pass && above && raw_ok && ext_ok && time_ok;
        if (!detail.empty()) detail += "; ";
        detail += "a=" + detail::fmt("%.1f", barriers[i]) + " oracle=" + detail::fmt("%.8f", w.oracle) +
                  " level10=" + detail::fmt("%.8f", w.raw) + (above ? " (above)" : " (NOT above)") +
                  " gap=" + detail::fmt("%.2e", w.raw - w.oracle) + (raw_ok ? "" : " >5e-3") +
                  " extrapolated gap=" + detail::fmt("%.2e", w.extrap - w.oracle) + (ext_ok ? "" : " >1e-3") +
                  (time_ok ? "" : " runtime>30s");
        if (opt.timing) *opt.timing << (two_sided ? "C3" : "C2") << " a=" << barriers[i] << " " << w.secs << " s\n";
    }
    return {two_sided ? 3 : 2, two_sided ? "two-sided barrier vs image series" : "one-sided barrier vs reflection principle",
            pass, detail};
}

// C4: boundary sets (degenerate bands) get exactly zero at every level.
inline CriterionResult criterion_degenerate(const VerifyOptions&) {
    std::vector<std::pair<std::string, BandSet>> bands;
    bands.emplace_back("[0,0]", BandSet::constant(0.0, 0.0));
    {
        auto c = PiecewiseLinear::from_points({{Rational(0), 0.0}, {Rational(1), 0.7}});
        bands.emplace_back("[c,c] c(t)=0.7t", BandSet(c, c));
    }
    {
        // Bounds touch only at t = 1/2.
        auto lo = PiecewiseLinear::from_points({{Rational(0), -1.0}, {Rational(1, 2), 0.25}, {Rational(1), -1.0}});
        auto hi = PiecewiseLinear::from_points({{Rational(0), 1.0}, {Rational(1, 2), 0.25}, {Rational(1), 1.0}});
        bands.emplace_back("pinched at t=1/2", BandSet(lo, hi));
    }
    {
        auto lo = PiecewiseLinear::from_points({{Rational(0), -1.0}, {Rational(1), 0.5}});
        bands.emplace_back("pinched at t=1", BandSet(lo, PiecewiseLinear::constant(0.5)));
    }
    bool pass = true;
    std::string detail;
    for (const auto& [name, band] : bands) {
        const auto est = phi_band(band, detail::all_levels(0, 10), QuadratureConfig{});
        const auto trace = detail::level_trace(SetExpr{band}, 0, 10);
        bool zero = est.value == 0.0 && trace.size() == 11;
        for (const auto& a : trace) zero = zero && a.value == 0.0 && a.est_quadrature_error == 0.0;
        pass = pass && zero;
        if (!detail.empty()) detail += "; ";
        detail += name + (zero ? " exactly 0 at levels 0..10" : " NOT identically 0");
    }
    return {4, "boundary sets have measure zero", pass, detail};
}

// C5: mu(C) = 1 and mu(empty) = 0.
inline CriterionResult criterion_normalization(const VerifyOptions&) {
    const auto whole = mu_expr(SetExpr{BandSet::whole_space()}, detail::all_levels(0, 10), QuadratureConfig{});
    double worst = 0.0;
    for (const auto& a : detail::level_trace(SetExpr{BandSet::whole_space()}, 0, 10)) worst = std::max(worst, std::abs(a.value - 1.0));
    worst = std::max(worst, std::abs(whole.value - 1.0));
    const bool whole_ok = worst <= 1e-8;

    const BandSet empty_cross(PiecewiseLinear::from_points({{Rational(0), -1.0}, {Rational(1), 1.0}}),
                              PiecewiseLinear::constant(0.5));
    const BandSet empty_origin(PiecewiseLinear::constant(0.1), PiecewiseLinear::constant(1.0));
    bool empty_ok = true;
    for (const auto* b : {&empty_cross, &empty_origin}) {
        const auto est = mu_expr(SetExpr{*b}, detail::all_levels(0, 10), QuadratureConfig{});
        empty_ok = empty_ok && b->is_empty() && est.value == 0.0;
    }
    return {5, "normalization", whole_ok && empty_ok,
            "max |mu(C) - 1| over levels 0..10 = " + detail::fmt("%.3e", worst) +
                (empty_ok ? "; mu(empty) exactly 0 for 2 empty bands" : "; mu(empty) NOT 0")};
}

// C6: disjoint band pairs are additive at level 8.
inline CriterionResult criterion_additivity(const VerifyOptions& opt) {
    constexpr int kPairs = 10;
    std::vector<double> gap(kPairs, 1.0);
    parallel_for(kPairs, opt.workers, [&](std::size_t p) {
        detail::TestRng rng(opt.seed * 1000 + 300 + p);
        const int level = 2;
        const int n = 1 << level;
        // A lies below -s at t = 1, B above +s, s >= 0.25, so the bounds are >= 0.5 apart there.
        const double s_a = rng.uniform(0.25, 0.75), s_b = rng.uniform(0.25, 0.75);
        std::vector<Breakpoint> a_lo, a_hi, b_lo, b_hi;
        for (int k = 0; k <= n; ++k) {
            const auto t = Rational::dyadic(k, level);
            const double frac = t.to_double();
            a_lo.push_back({t, -rng.uniform(1.0, 3.0)});
            a_hi.push_back({t, (1.0 - frac) * rng.uniform(0.2, 1.5) - frac * s_a});
            b_lo.push_back({t, -(1.0 - frac) * rng.uniform(0.2, 1.5) + frac * s_b});
            b_hi.push_back({t, rng.uniform(1.0, 3.0)});
        }
        const BandSet a(PiecewiseLinear::from_points(a_lo), PiecewiseLinear::from_points(a_hi));
        const BandSet b(PiecewiseLinear::from_points(b_lo), PiecewiseLinear::from_points(b_hi));
        const auto policy = detail::all_levels(0, 8);
        const QuadratureConfig cfg;
        const double mu_a = mu_expr(SetExpr{a}, policy, cfg).value;
        const double mu_b = mu_expr(SetExpr{b}, policy, cfg).value;
        const double mu_ab = mu_expr(SetExpr{UnionSet({a, b})}, policy, cfg).value;
        gap[p] = std::abs(mu_ab - mu_a - mu_b);
    });
    double worst = 0.0;
    for (double g : gap) worst = std::max(worst, g);
    return {6, "finite additivity on disjoint bands", worst <= 2e-3,
            std::to_string(kPairs) + " disjoint pairs, max |mu(A u B) - mu(A) - mu(B)| = " + detail::fmt("%.3e", worst)};
}

// C7: alpha_rectangle vs dense tensor quadrature (n <= 3) and vs Monte Carlo (100 random pairs).
inline CriterionResult criterion_oracle_equivalence(const VerifyOptions& opt) {
    struct Case {
        std::vector<Rational> times;
        std::vector<double> lo, hi;
    };
    const std::vector<Case> cases{
        {{Rational(1)}, {-1.0}, {1.0}},
        {{Rational(1)}, {-kInf}, {0.5}},
        {{Rational(1, 2), Rational(1)}, {-1.0, -1.0}, {1.0, 1.0}},
        {{Rational(1, 4), Rational(1)}, {-0.5, -kInf}, {2.0, 1.0}},
        {{Rational(1, 4), Rational(1, 2), Rational(3, 4)}, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}},
        {{Rational(1, 2), Rational(3, 4), Rational(1)}, {-2.0, -1.0, -kInf}, {0.5, 1.5, kInf}},
        {{Rational(1, 8), Rational(5, 8), Rational(1)}, {-0.3, 0.0, -0.4}, {0.6, 2.0, 1.2}},
    };
    double worst_quad = 0.0;
    for (const auto& c : cases) {
        Rectangle rect{c.times, c.lo, c.hi, false};
        const double a = alpha_rectangle(rect, QuadratureConfig{}).value;
        const auto t = to_doubles(c.times);
        const double ref = oracles::tensor_rectangle_probability(t, c.lo, c.hi);
        worst_quad = std::max(worst_quad, std::abs(a - ref));
    }
    const bool quad_ok = worst_quad <= 1e-6;

    constexpr int kPairs = 100;
    std::vector<int> agree(kPairs, 0);
    for (int p = 0; p < kPairs; ++p) {
        detail::TestRng rng(opt.seed * 1000 + 700 + static_cast<std::uint64_t>(p));
        const BandSet band = detail::random_band(rng, 3, 0.2, 0.3, 3.0);
        const int level = rng.integer(0, 8);
        const auto grid = merge_with(grid_at_level(level), band.breakpoints());
        const Rectangle rect = project(band, grid);
        const auto a = alpha_rectangle(rect, QuadratureConfig{});
        McConfig mc;
        mc.samples = 1'000'000;
        mc.seed = mix_seed(opt.seed + 7000 + static_cast<std::uint64_t>(p));
        mc.workers = opt.workers;
        const auto e = estimate_rectangle(rect, mc);
        agree[static_cast<std::size_t>(p)] =
            std::abs(a.value - e.p_hat) <= 3.0 * (e.std_error + a.est_quadrature_error) + 1e-12 ? 1 : 0;
    }
    int n_agree = 0;
    for (int v : agree) n_agree += v;
    return {7, "oracle equivalence", quad_ok && n_agree >= 99,
            "max |alpha - tensor quadrature| over " + std::to_string(cases.size()) + " rectangles (n<=3) = " +
                detail::fmt("%.3e", worst_quad) + "; Monte Carlo agreement " + std::to_string(n_agree) + "/" +
                std::to_string(kPairs) + " at 1e6 samples"};
}

// C8: sample covariance of the increment and bridge samplers on the level-3 grid.
inline CriterionResult criterion_covariance(const VerifyOptions& opt) {
    constexpr std::uint64_t kSamples = 1'000'000;
    const auto grid = to_doubles(grid_at_level(3).times());
    const auto vec = vector_moments(grid, kSamples, mix_seed(opt.seed + 8001), opt.workers);
    const auto bri = bridge_moments(3, kSamples, mix_seed(opt.seed + 8002), opt.workers);
    const std::size_t n = grid.size();
    double worst_vec = 0.0, worst_cmp = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double s = std::min(grid[i], grid[j]);
            // Standard error of a Gaussian sample covariance: sqrt((S_ii S_jj + S_ij^2) / n).
            const double se = std::sqrt((grid[i] * grid[j] + s * s) / static_cast<double>(kSamples));
            worst_vec = std::max(worst_vec, std::abs(vec.covariance(i, j) - s) / se);
            worst_cmp = std::max(worst_cmp, std::abs(bri.covariance(i, j) - vec.covariance(i, j)) / (std::sqrt(2.0) * se));
        }
    return {8, "Wiener covariance min(s,t)", worst_vec <= 4.0 && worst_cmp <= 4.0,
            "increment sampler max |cov - min(t_i,t_j)| = " + detail::fmt("%.2f", worst_vec) +
                " SE; bridge vs increment max difference = " + detail::fmt("%.2f", worst_cmp) + " SE (limit 4)"};
}

// C9: structural relation agrees with exact membership.
inline CriterionResult criterion_structural(const VerifyOptions& opt) {
    constexpr int kPairs = 100;
    int agree = 0, members = 0;
    for (int p = 0; p < kPairs; ++p) {
        detail::TestRng rng(opt.seed * 1000 + 900 + static_cast<std::uint64_t>(p));
        const BandSet band = detail::random_band(rng, 3, 0.2, 0.3, 2.0);
        const int path_level = 6;
        const int n = 1 << path_level;
        std::vector<Breakpoint> pts{{Rational(0), 0.0}};
        for (int k = 1; k <= n; ++k) {
            const auto t = Rational::dyadic(k, path_level);
            const double lo = std::max(band.lower(t), -3.0), hi = std::min(band.upper(t), 3.0);
            pts.push_back({t, rng.uniform(lo, hi)});
        }
        if (rng.uniform() < 0.5) {
            // Push one breakpoint just outside a bound.
            const auto k = static_cast<std::size_t>(rng.integer(1, n));
            const double eps = rng.uniform(1e-3, 0.2);
            if (rng.uniform() < 0.5) pts[k].value = std::max(band.lower(pts[k].t), -3.0) - eps;
            else pts[k].value = std::min(band.upper(pts[k].t), 3.0) + eps;
        }
        const auto path = PiecewiseLinear::from_points(pts);
        const auto rep = structural_relation_check(band, path, 10);
        members += rep.member ? 1 : 0;
        agree += rep.consistent ? 1 : 0;
    }
    return {9, "structural relation vs membership", agree == kPairs,
            std::to_string(agree) + "/" + std::to_string(kPairs) + " (band, path) pairs consistent up to level 10 (" +
                std::to_string(members) + " members)"};
}

// C10: downward/upward continuity along nested band families.
inline CriterionResult criterion_continuity(const VerifyOptions& opt) {
    const auto policy = detail::all_levels(0, 8);
    const QuadratureConfig cfg;
    std::vector<double> ks;
    for (double k = 1; k <= 1024; k *= 2) ks.push_back(k);
    std::vector<double> ks_from2(ks.begin() + 1, ks.end());

    const auto c = PiecewiseLinear::from_points({{Rational(0), 0.0}, {Rational(1), 0.5}});
    auto shifted = [c](double off) {
        std::vector<Breakpoint> pts;
        for (const auto& b : c.breakpoints()) pts.push_back({b.t, b.value + off});
        return PiecewiseLinear::from_points(pts);
    };

    std::vector<BandFamily> families{
        {"[-1-1/k,1+1/k] down to [-1,1]", ks, [](double k) { return BandSet::constant(-1.0 - 1.0 / k, 1.0 + 1.0 / k); },
         BandSet::constant(-1.0, 1.0), FamilyDirection::shrinking},
        {"[-1+1/k,1-1/k] up to [-1,1]", ks_from2, [](double k) { return BandSet::constant(-1.0 + 1.0 / k, 1.0 - 1.0 / k); },
         BandSet::constant(-1.0, 1.0), FamilyDirection::widening},
        {"[c-1/k,c+1/k] down to degenerate c(t)=t/2", {1, 2, 4, 8, 16, 32},
         [shifted](double k) { return BandSet(shifted(-1.0 / k), shifted(1.0 / k)); }, BandSet(c, c),
         FamilyDirection::shrinking},
        {"[-k,k] up to C", {1, 2, 4, 8}, [](double k) { return BandSet::constant(-k, k); }, std::nullopt,
         FamilyDirection::widening},
    };
    bool pass = true;
    std::string detail;
    for (std::size_t f = 0; f < families.size(); ++f) {
        const bool degenerate = f == 2;
        const auto rep = continuity_suite(families[f], policy, cfg, degenerate ? 1e-2 : 2e-3, opt.workers);
        bool ok = rep.monotone && rep.converged;
        if (degenerate) {
            // Width 2/k = 1/16 is the last member (k = 32); the limit itself must be exactly 0.
            ok = ok && rep.values.back() < 1e-2 && rep.limit_value == 0.0;
        }
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += rep.name + (rep.monotone ? " monotone" : " NOT monotone") + ", last=" +
                  detail::fmt("%.6f", rep.values.back()) + " limit=" + detail::fmt("%.6f", rep.limit_value) +
                  " gap=" + detail::fmt("%.2e", rep.final_gap);
    }
    return {10, "continuity along nested families", pass, detail};
}

inline VerifyReport run_criteria(const VerifyOptions& opt) {
    using Fn = std::function<CriterionResult(const VerifyOptions&)>;
    const std::vector<std::pair<int, Fn>> all{
        {1, criterion_monotonicity},
        {2, [](const VerifyOptions& o) { return criterion_barrier(o, false); }},
        {3, [](const VerifyOptions& o) { return criterion_barrier(o, true); }},
        {4, criterion_degenerate},
        {5, criterion_normalization},
        {6, criterion_additivity},
        {7, criterion_oracle_equivalence},
        {8, criterion_covariance},
        {9, criterion_structural},
        {10, criterion_continuity},
    };
    VerifyReport rep;
    for (const auto& [id, fn] : all) {
        if (!opt.only.empty() && !opt.only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            rep.results.push_back(fn(opt));
        } catch (const std::exception& e) {
            rep.results.push_back({id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()});
        }
        if (opt.timing)
            *opt.timing << "criterion " << id << " total "
                        << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    }
    return rep;
}

/**
 * Runs the selected criteria; criterion 11 (determinism) reruns them with a different worker count
 * and requires byte-identical report text.
 */
inline VerifyReport run_verify(const VerifyOptions& opt) {
    VerifyReport rep = run_criteria(opt);
    if (opt.only.empty() || opt.only.count(11)) {
        VerifyOptions again = opt;
        again.workers = opt.workers == 1 ? 3 : 1;
        again.timing = nullptr;
        if (again.only.count(11) && again.only.size() > 1) again.only.erase(11);
        const bool only_11 = opt.only.size() == 1 && opt.only.count(11);
        VerifyOptions first = opt;
        first.timing = nullptr;
        // With only criterion 11 selected, compare two cheap criteria instead of the full suite.
        if (only_11) first.only = again.only = {4, 5, 8, 9};
        const std::string a = only_11 ? run_criteria(first).text() : rep.text();
        const std::string b = run_criteria(again).text();
        rep.results.push_back({11, "determinism across worker counts", a == b,
                               std::string(a == b ? "identical" : "DIFFERENT") + " report text with workers=" +
                                   std::to_string(opt.workers) + " and workers=" + std::to_string(again.workers)});
    }
    return rep;
}

}  // namespace wiener
