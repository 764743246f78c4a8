#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace wiener {

/// Exact rational time. Always normalized: den > 0, gcd(num, den) == 1.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den_ == 0) throw DomainError("Rational: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    static Rational dyadic(std::int64_t k, int level) {
        if (level < 0 || level > 62) throw DomainError("Rational::dyadic: level out of range");
        return Rational(k, std::int64_t{1} << level);
    }

    /// Parses "k/2^m", "k/d" or an integer "k".
    static Rational parse(std::string_view text);

    constexpr std::int64_t num() const { return num_; }
    constexpr std::int64_t den() const { return den_; }
    constexpr double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    bool is_dyadic() const { return (den_ & (den_ - 1)) == 0; }

    // Smallest level L with this time on the level-L dyadic grid (dyadic times only).
    int dyadic_level() const {
        if (!is_dyadic()) throw DomainError("Rational::dyadic_level: " + to_string() + " is not dyadic");
        int level = 0;
        while ((std::int64_t{1} << level) < den_) ++level;
        return level;
    }

    std::string to_string() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend constexpr std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend Rational operator-(const Rational& a, const Rational& b) {
        const __int128 n = static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_;
        const __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator+(const Rational& a, const Rational& b) {
        const __int128 n = static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_;
        const __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw DomainError("Rational: overflow");
        return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational Rational::parse(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
        return s;
    };
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        s = trim(s);
        if (s.empty()) throw DomainError("Rational::parse: empty integer in '" + std::string(text) + "'");
        bool neg = false;
        if (s.front() == '-' || s.front() == '+') {
            neg = s.front() == '-';
            s.remove_prefix(1);
        }
        if (s.empty()) throw DomainError("Rational::parse: bad integer in '" + std::string(text) + "'");
        std::int64_t v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') throw DomainError("Rational::parse: bad digit in '" + std::string(text) + "'");
            if (v > (INT64_MAX - 9) / 10) throw DomainError("Rational::parse: overflow in '" + std::string(text) + "'");
            v = v * 10 + (c - '0');
        }
        return neg ? -v : v;
    };

    text = trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const std::int64_t num = parse_int(text.substr(0, slash));
    std::string_view den_text = trim(text.substr(slash + 1));
    const auto caret = den_text.find('^');
    if (caret == std::string_view::npos) {
        const std::int64_t den = parse_int(den_text);
        if (den <= 0) throw DomainError("Rational::parse: non-positive denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (parse_int(den_text.substr(0, caret)) != 2)
        throw DomainError("Rational::parse: only powers of two allowed in '" + std::string(text) + "'");
    const std::int64_t exponent = parse_int(den_text.substr(caret + 1));
    if (exponent < 0 || exponent > 62) throw DomainError("Rational::parse: exponent out of range in '" + std::string(text) + "'");
    return Rational::dyadic(num, static_cast<int>(exponent));
}

inline constexpr int kDefaultMaxLevel = 20;

/**
 * Level-L dyadic grid {k / 2^L : k = 1..2^L}, the L-th finite stage of the dense
 * time set in (0, 1]. Grids are nested: level L is a subset of level L + 1.
 * Times are exact; call to_doubles() at kernel boundaries.
 */
class TimeGrid {
public:
    static TimeGrid at_level(int level, int max_level = kDefaultMaxLevel) {
        if (level < 0) throw DomainError("grid_at_level: negative level " + std::to_string(level));
        if (level > max_level)
            throw RefusalError("grid_at_level: level " + std::to_string(level) + " exceeds configured maximum " +
                               std::to_string(max_level) + " (a level-L grid holds 2^L times)");
        TimeGrid g;
        g.level_ = level;
        const std::int64_t n = std::int64_t{1} << level;
        g.times_.reserve(static_cast<std::size_t>(n));
        for (std::int64_t k = 1; k <= n; ++k) g.times_.push_back(Rational::dyadic(k, level));
        return g;
    }

    int level() const { return level_; }
    std::span<const Rational> times() const { return times_; }
    std::size_t size() const { return times_.size(); }

private:
    int level_ = 0;
    std::vector<Rational> times_;
};

inline TimeGrid grid_at_level(int level, int max_level = kDefaultMaxLevel) {
    return TimeGrid::at_level(level, max_level);
}

inline void require_unit_interval(const Rational& t, std::string_view who) {
    if (t <= Rational(0) || t > Rational(1))
        throw DomainError(std::string(who) + ": time " + t.to_string() + " outside (0, 1]");
}

/// Sorted, deduplicated union of a sorted time list with extra times in (0, 1].
inline std::vector<Rational> merge_with(std::span<const Rational> sorted_times, std::span<const Rational> extra) {
    for (const auto& t : extra) require_unit_interval(t, "merge_with");
    std::vector<Rational> out(sorted_times.begin(), sorted_times.end());
    out.insert(out.end(), extra.begin(), extra.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<Rational> merge_with(const TimeGrid& grid, std::span<const Rational> extra) {
    return merge_with(grid.times(), extra);
}

inline std::vector<double> to_doubles(std::span<const Rational> times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (const auto& t : times) out.push_back(t.to_double());
    return out;
}

}  // namespace wiener
