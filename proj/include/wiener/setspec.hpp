#pragma once

// Reading and writing set-specification documents:
//   { "type": "band", "lower": [["k/2^m", "v"], ...] | "-inf", "upper": [...] | "+inf" }
//   { "type": "union", "members": [band, ...] }
//   { "type": "difference", "outer": band, "inner": band }
// Times are exact dyadic strings, values decimal strings (plain JSON numbers are accepted too).

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pathsets.hpp"

namespace wiener {

class SpecError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

inline double parse_decimal(const nlohmann::json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_string()) throw SpecError(where + ": value must be a decimal string");
    const std::string s = j.get<std::string>();
    if (s == "-inf") return -kInf;
    if (s == "+inf" || s == "inf") return kInf;
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw SpecError(where + ": cannot parse value '" + s + "'");
    return v;
}

inline Rational parse_time(const nlohmann::json& j, const std::string& where) {
    Rational t;
    if (j.is_string()) {
        try {
            t = Rational::parse(j.get<std::string>());
        } catch (const DomainError& e) {
            throw SpecError(where + ": " + e.what());
        }
    } else if (j.is_number_integer()) {
        t = Rational(j.get<std::int64_t>());
    } else {
        throw SpecError(where + ": time must be an exact string like \"3/2^2\"");
    }
    if (!t.is_dyadic()) throw SpecError(where + ": time " + t.to_string() + " is not a dyadic rational");
    return t;
}

inline PiecewiseLinear parse_bound(const nlohmann::json& j, const std::string& where, bool is_lower) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (is_lower && s == "-inf") return PiecewiseLinear::constant(-kInf);
        if (!is_lower && (s == "+inf" || s == "inf")) return PiecewiseLinear::constant(kInf);
        throw SpecError(where + ": expected " + std::string(is_lower ? "\"-inf\"" : "\"+inf\"") +
                        " or a breakpoint list");
    }
    if (!j.is_array() || j.empty()) throw SpecError(where + ": bound must be a non-empty breakpoint list");
    std::vector<Breakpoint> pts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& p = j[i];
        const std::string at = where + "[" + std::to_string(i) + "]";
        if (!p.is_array() || p.size() != 2) throw SpecError(at + ": breakpoint must be [t, v]");
        pts.push_back({parse_time(p[0], at), parse_decimal(p[1], at)});
    }
    try {
        return PiecewiseLinear::from_points(std::move(pts));
    } catch (const DomainError& e) {
        throw SpecError(where + ": " + e.what());
    }
}

inline void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) ok = ok || it.key() == k;
        if (!ok) throw SpecError(where + ": unknown key '" + it.key() + "'");
    }
}

inline BandSet parse_band(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object() || j.value("type", "") != "band") throw SpecError(where + ": expected a band object");
    require_keys(j, {"type", "lower", "upper"}, where);
    if (!j.contains("lower") || !j.contains("upper")) throw SpecError(where + ": band needs lower and upper");
    try {
        return BandSet(parse_bound(j["lower"], where + ".lower", true), parse_bound(j["upper"], where + ".upper", false));
    } catch (const SpecError&) {
        throw;
    } catch (const DomainError& e) {
        throw SpecError(where + ": " + e.what());
    }
}

inline std::string format_value(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string format_time(const Rational& t) {
    if (t.den() == 1) return std::to_string(t.num());
    return std::to_string(t.num()) + "/2^" + std::to_string(t.dyadic_level());
}

inline nlohmann::json bound_to_json(std::span<const PiecewiseLinear> pieces, bool is_lower) {
    if (pieces.size() != 1)
        throw SpecError("set spec: intersection bands (several pieces per bound) have no file representation");
    const auto& f = pieces[0];
    if (f.is_infinite()) return is_lower ? "-inf" : "+inf";
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& b : f.breakpoints()) arr.push_back({format_time(b.t), format_value(b.value)});
    return arr;
}

}  // namespace detail

inline SetExpr parse_set_spec(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw SpecError("set spec: top level must be an object with a string \"type\"");
    const std::string type = j["type"].get<std::string>();
    if (type == "band") return detail::parse_band(j, "band");
    if (type == "union") {
        detail::require_keys(j, {"type", "members"}, "union");
        if (!j.contains("members") || !j["members"].is_array() || j["members"].empty())
            throw SpecError("union: members must be a non-empty array");
        std::vector<BandSet> members;
        for (std::size_t i = 0; i < j["members"].size(); ++i)
            members.push_back(detail::parse_band(j["members"][i], "union.members[" + std::to_string(i) + "]"));
        return UnionSet(std::move(members));
    }
    if (type == "difference") {
        detail::require_keys(j, {"type", "outer", "inner"}, "difference");
        if (!j.contains("outer") || !j.contains("inner")) throw SpecError("difference: needs outer and inner");
        auto outer = detail::parse_band(j["outer"], "difference.outer");
        auto inner = detail::parse_band(j["inner"], "difference.inner");
        try {
            return DifferenceSet(std::move(outer), std::move(inner));
        } catch (const DomainError& e) {
            throw SpecError(std::string("difference: ") + e.what());
        }
    }
    throw SpecError("set spec: unknown type '" + type + "'");
}

inline SetExpr parse_set_spec(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("set spec: malformed JSON: ") + e.what());
    }
    return parse_set_spec(j);
}

inline SetExpr load_set_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("set spec: cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_set_spec(buf.str());
}

inline nlohmann::json band_to_json(const BandSet& band) {
    return {{"type", "band"},
            {"lower", detail::bound_to_json(band.lower_pieces(), true)},
            {"upper", detail::bound_to_json(band.upper_pieces(), false)}};
}

inline nlohmann::json to_json(const SetExpr& expr) {
    return std::visit(
        [](const auto& e) -> nlohmann::json {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, BandSet>) {
                return band_to_json(e);
            } else if constexpr (std::is_same_v<E, UnionSet>) {
                nlohmann::json ms = nlohmann::json::array();
                for (const auto& m : e.members) ms.push_back(band_to_json(m));
                return {{"type", "union"}, {"members", ms}};
            } else {
                return {{"type", "difference"}, {"outer", band_to_json(e.outer)}, {"inner", band_to_json(e.inner)}};
            }
        },
        expr);
}

}  // namespace wiener
