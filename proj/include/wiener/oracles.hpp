#pragma once

// Reference computations that share no code path with the production kernels: dense covariance
// algebra, tensor Gauss-Legendre quadrature, power series. Used by the test suites and `verify`.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wiener::oracles {

using Matrix = std::vector<std::vector<double>>;

/// erf by its Maclaurin series, summed until terms vanish; fine for |x| <= 3.
inline double erf_series(double x) {
    double term = x;
    double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const double add = term / (2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

inline double normal_cdf_series(double z) { return 0.5 * (1.0 + erf_series(z / std::numbers::sqrt2)); }

inline Matrix dense_min_covariance(std::span<const double> times) {
    const std::size_t n = times.size();
    Matrix s(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s[i][j] = std::min(times[i], times[j]);
    return s;
}

/// Inverse and determinant by Gauss-Jordan elimination with partial pivoting.
inline std::pair<Matrix, double> dense_inverse(Matrix a) {
    const std::size_t n = a.size();
    Matrix inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (a[p][c] == 0.0) throw std::runtime_error("dense_inverse: singular matrix");
        if (p != c) {
            std::swap(a[p], a[c]);
            std::swap(inv[p], inv[c]);
            det = -det;
        }
        const double piv = a[c][c];
        det *= piv;
        for (std::size_t j = 0; j < n; ++j) {
            a[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return {inv, det};
}

/// Textbook Cholesky-Banachiewicz factorization.
inline Matrix dense_cholesky(const Matrix& a) {
    const std::size_t n = a.size();
    Matrix l(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) throw std::runtime_error("dense_cholesky: not positive definite");
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    return l;
}

/// Multivariate normal density with covariance min(t_i, t_j), evaluated through the dense inverse.
class DenseDensity {
public:
    explicit DenseDensity(std::span<const double> times) : n_(times.size()) {
        auto [inv, det] = dense_inverse(dense_min_covariance(times));
        inv_ = std::move(inv);
        norm_ = 1.0 / std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(n_)) * det);
    }
    double operator()(std::span<const double> x) const {
        double q = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) q += x[i] * inv_[i][j] * x[j];
        return norm_ * std::exp(-0.5 * q);
    }

private:
    std::size_t n_;
    Matrix inv_;
    double norm_ = 0.0;
};

struct QuadratureRule1D {
    std::vector<double> nodes, weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], Newton iteration on the three-term recurrence.
inline QuadratureRule1D gauss_legendre(int n) {
    QuadratureRule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = x;
        r.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return r;
}

/// Composite Gauss-Legendre nodes/weights on [a, b] with `panels` panels of `order` points.
inline QuadratureRule1D composite_rule(double a, double b, int panels, int order) {
    const auto base = gauss_legendre(order);
    QuadratureRule1D r;
    const double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double left = a + p * w;
        for (std::size_t k = 0; k < base.nodes.size(); ++k) {
            r.nodes.push_back(left + 0.5 * w * (base.nodes[k] + 1.0));
            r.weights.push_back(0.5 * w * base.weights[k]);
        }
    }
    return r;
}

/**
 * Rectangle probability for n <= 3 by brute-force tensor quadrature of the dense density.
 * Infinite ends are cut at +-12 sqrt(t_i).
 */
inline double tensor_rectangle_probability(std::span<const double> times, std::span<const double> lo,
                                            std::span<const double> hi, int panels = 8, int order = 16) {
    const std::size_t n = times.size();
    if (n == 0 || n > 3) throw std::invalid_argument("tensor_rectangle_probability: 1 <= n <= 3");
    const DenseDensity f(times);
    std::vector<QuadratureRule1D> rules;
    for (std::size_t i = 0; i < n; ++i) {
        const double cut = 12.0 * std::sqrt(times[i]);
        const double a = std::max(lo[i], -cut);
        const double b = std::min(hi[i], cut);
        if (!(a < b)) return 0.0;
        rules.push_back(composite_rule(a, b, panels, order));
    }
    double total = 0.0;
    std::vector<double> x(n);
    const auto& r0 = rules[0];
    for (std::size_t i = 0; i < r0.nodes.size(); ++i) {
        x[0] = r0.nodes[i];
        if (n == 1) {
            total += r0.weights[i] * f(x);
            continue;
        }
        for (std::size_t j = 0; j < rules[1].nodes.size(); ++j) {
            x[1] = rules[1].nodes[j];
            const double wij = r0.weights[i] * rules[1].weights[j];
            if (n == 2) {
                total += wij * f(x);
                continue;
            }
            for (std::size_t k = 0; k < rules[2].nodes.size(); ++k) {
                x[2] = rules[2].nodes[k];
                total += wij * rules[2].weights[k] * f(x);
            }
        }
    }
    return total;
}

/// P(sup |W_t| <= a) from the heat-kernel eigenfunction series (4/pi) sum (-1)^n/(2n+1) exp(-(2n+1)^2 pi^2 / (8a^2)).
inline double two_sided_eigen_series(double a) {
    double sum = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const double k = 2.0 * n + 1.0;
        const double term = std::exp(-k * k * std::numbers::pi * std::numbers::pi / (8.0 * a * a)) / k;
        sum += (n % 2 == 0 ? term : -term);
        if (term < 1e-20) break;
    }
    return 4.0 / std::numbers::pi * sum;
}

}  // namespace wiener::oracles
