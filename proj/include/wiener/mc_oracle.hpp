#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gaussians.hpp"
#include "parallel.hpp"
#include "pathsets.hpp"
#include "rng.hpp"
#include "timegrid.hpp"

namespace wiener {

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    int workers = 1;
    int level = 8;  // dyadic level for bridge path sampling

    void validate() const {
        if (samples < 1) throw DomainError("McConfig: samples must be >= 1");
        if (workers < 1) throw DomainError("McConfig: workers must be >= 1");
        if (level < 0 || level > kDefaultMaxLevel) throw DomainError("McConfig: level out of range");
    }
};

struct McEstimate {
    double p_hat = 0.0;
    double std_error = 0.0;  // sqrt(p_hat (1 - p_hat) / samples)
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Row-major sample matrix.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

namespace detail {

inline McEstimate make_estimate(std::uint64_t hits, std::uint64_t samples, std::uint64_t seed) {
    McEstimate e;
    e.samples = samples;
    e.seed = seed;
    e.p_hat = static_cast<double>(hits) / static_cast<double>(samples);
    e.std_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(samples));
    return e;
}

// Fills a bridge path on the level-L dyadic grid: out[k] = W(k / 2^L), out[0] = 0.
// The draw for time k / 2^L is normal index k - 1 of the row's stream.
inline void fill_bridge_path(NormalStream& rng, int level, std::span<double> out) {
    const std::size_t n = std::size_t{1} << level;
    out[0] = 0.0;
    out[n] = rng.normal(n - 1);
    for (int l = 1; l <= level; ++l) {
        const std::size_t step = n >> l;
        const double sd = std::sqrt(static_cast<double>(step) / (2.0 * static_cast<double>(n)));
        for (std::size_t pos = step; pos < n; pos += 2 * step)
            out[pos] = 0.5 * (out[pos - step] + out[pos + step]) + sd * rng.normal(pos - 1);
    }
}

}  // namespace detail

/**
 * Draws `count` vectors (W_{t_1}, ..., W_{t_n}) as cumulative sums of independent N(0, t_i - t_{i-1})
 * increments. Row r comes from stream (seed, r), so rows are identical for any worker count.
 */
inline SampleMatrix sample_vector(std::span<const double> times, std::uint64_t count, std::uint64_t seed,
                                  int workers = 1) {
    const IncrementFactor factor(times);
    SampleMatrix m;
    m.rows = count;
    m.cols = times.size();
    m.values.resize(m.rows * m.cols);
    const auto pivots = factor.pivots();
    block_reduce(count, workers, 0, [&](std::uint64_t begin, std::uint64_t end) {
        for (std::uint64_t r = begin; r < end; ++r) {
            NormalStream rng(seed, r, StreamPurpose::increments);
            double acc = 0.0;
            for (std::size_t i = 0; i < m.cols; ++i) {
                acc += pivots[i] * rng.normal(i);
                m.values[r * m.cols + i] = acc;
            }
        }
        return 0;
    }, [](int&, int) {});
    return m;
}

/**
 * Brownian paths on the level-L dyadic grid by midpoint refinement: W(1) ~ N(0, 1), then each
 * midpoint of [a, b] ~ N((W_a + W_b) / 2, (b - a) / 4). Column k - 1 holds W(k / 2^L).
 */
inline SampleMatrix sample_path_bridge(int level, std::uint64_t count, std::uint64_t seed, int workers = 1) {
    if (level < 0 || level > kDefaultMaxLevel) throw RefusalError("sample_path_bridge: level out of range");
    const std::size_t n = std::size_t{1} << level;
    SampleMatrix m;
    m.rows = count;
    m.cols = n;
    m.values.resize(m.rows * m.cols);
    block_reduce(count, workers, 0, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> path(n + 1);
        for (std::uint64_t r = begin; r < end; ++r) {
            NormalStream rng(seed, r, StreamPurpose::bridge);
            detail::fill_bridge_path(rng, level, path);
            std::copy(path.begin() + 1, path.end(), m.values.begin() + static_cast<std::ptrdiff_t>(r * n));
        }
        return 0;
    }, [](int&, int) {});
    return m;
}

/// Fraction of increment-sampled vectors on the rectangle's times that land inside it.
inline McEstimate estimate_rectangle(const Rectangle& rect, const McConfig& cfg) {
    cfg.validate();
    if (rect.empty) return detail::make_estimate(0, cfg.samples, cfg.seed);
    const auto times = to_doubles(rect.times);
    const IncrementFactor factor(times);
    const auto pivots = factor.pivots();
    const std::uint64_t hits = block_reduce(cfg.samples, cfg.workers, std::uint64_t{0},
        [&](std::uint64_t begin, std::uint64_t end) {
            std::uint64_t h = 0;
            for (std::uint64_t r = begin; r < end; ++r) {
                NormalStream rng(cfg.seed, r, StreamPurpose::increments);
                double acc = 0.0;
                bool inside = true;
                for (std::size_t i = 0; i < times.size() && inside; ++i) {
                    acc += pivots[i] * rng.normal(i);
                    inside = acc >= rect.lo[i] && acc <= rect.hi[i];
                }
                h += inside ? 1 : 0;
            }
            return h;
        },
        [](std::uint64_t& acc, std::uint64_t v) { acc += v; });
    return detail::make_estimate(hits, cfg.samples, cfg.seed);
}

/**
 * Fraction of increment-sampled vectors on `grid` that land in the projection of a set expression:
 * inside some member rectangle for a union, inside outer but not inner for a difference.
 */
inline McEstimate estimate_expr(const SetExpr& expr, std::span<const Rational> grid, const McConfig& cfg) {
    cfg.validate();
    if (const auto* band = std::get_if<BandSet>(&expr)) return estimate_rectangle(project(*band, grid), cfg);
    std::vector<Rectangle> plus, minus;
    if (const auto* u = std::get_if<UnionSet>(&expr)) {
        for (const auto& m : u->members) plus.push_back(project(m, grid));
    } else {
        const auto& d = std::get<DifferenceSet>(expr);
        plus.push_back(project(d.outer, grid));
        minus.push_back(project(d.inner, grid));
    }
    const auto times = to_doubles(grid);
    const IncrementFactor factor(times);
    const auto pivots = factor.pivots();
    const std::uint64_t hits = block_reduce(cfg.samples, cfg.workers, std::uint64_t{0},
        [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<double> x(times.size());
            std::uint64_t h = 0;
            for (std::uint64_t r = begin; r < end; ++r) {
                NormalStream rng(cfg.seed, r, StreamPurpose::increments);
                double acc = 0.0;
                for (std::size_t i = 0; i < times.size(); ++i) {
                    acc += pivots[i] * rng.normal(i);
                    x[i] = acc;
                }
                bool in = false;
                for (const auto& p : plus) in = in || p.contains_point(x);
                for (const auto& m : minus) in = in && !m.contains_point(x);
                h += in ? 1 : 0;
            }
            return h;
        },
        [](std::uint64_t& acc, std::uint64_t v) { acc += v; });
    return detail::make_estimate(hits, cfg.samples, cfg.seed);
}

/**
 * Fraction of bridge paths on the level-cfg.level dyadic grid that respect the band at every grid
 * time. Monitoring only at grid times, so it over-estimates the continuous-path probability,
 * less so as the level grows.
 */
inline McEstimate estimate_band_paths(const BandSet& band, const McConfig& cfg) {
    cfg.validate();
    if (band.is_empty()) return detail::make_estimate(0, cfg.samples, cfg.seed);
    const std::size_t n = std::size_t{1} << cfg.level;
    std::vector<double> lo(n), hi(n);
    for (std::size_t k = 1; k <= n; ++k) {
        const auto t = Rational::dyadic(static_cast<std::int64_t>(k), cfg.level);
        lo[k - 1] = band.lower(t);
        hi[k - 1] = band.upper(t);
    }
    const std::uint64_t hits = block_reduce(cfg.samples, cfg.workers, std::uint64_t{0},
        [&](std::uint64_t begin, std::uint64_t end) {
            std::vector<double> path(n + 1);
            std::uint64_t h = 0;
            for (std::uint64_t r = begin; r < end; ++r) {
                NormalStream rng(cfg.seed, r, StreamPurpose::bridge);
                detail::fill_bridge_path(rng, cfg.level, path);
                bool inside = true;
                for (std::size_t k = 1; k <= n && inside; ++k) inside = path[k] >= lo[k - 1] && path[k] <= hi[k - 1];
                h += inside ? 1 : 0;
            }
            return h;
        },
        [](std::uint64_t& acc, std::uint64_t v) { acc += v; });
    return detail::make_estimate(hits, cfg.samples, cfg.seed);
}

/// Sample mean and covariance, accumulated block-wise so the result is worker-independent.
struct SampleMoments {
    std::uint64_t count = 0;
    std::vector<double> mean;
    std::vector<double> cov;  // row-major, dim x dim, divisor count - 1
    std::size_t dim = 0;

    double covariance(std::size_t i, std::size_t j) const { return cov[i * dim + j]; }
};

namespace detail {

struct MomentSums {
    std::vector<double> s1, s2;
};

template <class RowFn>
SampleMoments accumulate_moments(std::size_t dim, std::uint64_t count, int workers, RowFn&& fill_row) {
    MomentSums init{std::vector<double>(dim, 0.0), std::vector<double>(dim * dim, 0.0)};
    auto sums = block_reduce(count, workers, init,
        [&](std::uint64_t begin, std::uint64_t end) {
            MomentSums s = init;
            std::vector<double> x(dim);
            for (std::uint64_t r = begin; r < end; ++r) {
                fill_row(r, std::span<double>(x));
                for (std::size_t i = 0; i < dim; ++i) {
                    s.s1[i] += x[i];
                    for (std::size_t j = 0; j < dim; ++j) s.s2[i * dim + j] += x[i] * x[j];
                }
            }
            return s;
        },
        [](MomentSums& acc, const MomentSums& p) {
            for (std::size_t i = 0; i < acc.s1.size(); ++i) acc.s1[i] += p.s1[i];
            for (std::size_t i = 0; i < acc.s2.size(); ++i) acc.s2[i] += p.s2[i];
        });
    SampleMoments m;
    m.count = count;
    m.dim = dim;
    m.mean.resize(dim);
    m.cov.resize(dim * dim);
    const double n = static_cast<double>(count);
    for (std::size_t i = 0; i < dim; ++i) m.mean[i] = sums.s1[i] / n;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            m.cov[i * dim + j] = (sums.s2[i * dim + j] - n * m.mean[i] * m.mean[j]) / (n - 1.0);
    return m;
}

}  // namespace detail

/// Moments of the increment sampler on `times` (same rows as sample_vector, without storing them).
inline SampleMoments vector_moments(std::span<const double> times, std::uint64_t count, std::uint64_t seed,
                                    int workers = 1) {
    const IncrementFactor factor(times);
    const auto pivots = factor.pivots();
    return detail::accumulate_moments(times.size(), count, workers, [&](std::uint64_t r, std::span<double> x) {
        NormalStream rng(seed, r, StreamPurpose::increments);
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            acc += pivots[i] * rng.normal(i);
            x[i] = acc;
        }
    });
}

/// Moments of the bridge sampler on the level-L dyadic grid.
inline SampleMoments bridge_moments(int level, std::uint64_t count, std::uint64_t seed, int workers = 1) {
    if (level < 0 || level > kDefaultMaxLevel) throw RefusalError("bridge_moments: level out of range");
    const std::size_t n = std::size_t{1} << level;
    return detail::accumulate_moments(n, count, workers, [&](std::uint64_t r, std::span<double> x) {
        NormalStream rng(seed, r, StreamPurpose::bridge);
        std::vector<double> path(n + 1);
        detail::fill_bridge_path(rng, level, path);
        std::copy(path.begin() + 1, path.end(), x.begin());
    });
}

}  // namespace wiener
