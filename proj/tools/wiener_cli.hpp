#pragma once

// Command-line front end. Subcommands:
//   estimate  mu of a set spec, rendered as a report (JSON) or trace CSV
//   converge  one CSV row per refinement level
//   verify    the acceptance suite
//   sample    sampled vectors or bridge paths as CSV
//   oracle    closed-form barrier probabilities
// Exit codes: 0 ok, 1 verify failure, 2 malformed input, 3 internal-consistency failure.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wiener/wiener.hpp"

namespace wiener::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitInternal = 3;

struct LevelRange {
    int first = 0;
    int last = 8;
};

inline LevelRange parse_levels(const std::string& text) {
    const auto dots = text.find("..");
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw DomainError("--levels: expected A..B, got '" + text + "'");
        }
        if (used != s.size()) throw DomainError("--levels: expected A..B, got '" + text + "'");
        return v;
    };
    LevelRange r;
    if (dots == std::string::npos) {
        r.first = r.last = to_int(text);
    } else {
        r.first = to_int(text.substr(0, dots));
        r.last = to_int(text.substr(dots + 2));
    }
    if (r.first < 0 || r.first > r.last || r.last > kDefaultMaxLevel)
        throw DomainError("--levels: need 0 <= A <= B <= " + std::to_string(kDefaultMaxLevel));
    return r;
}

enum class Command { estimate, converge, verify, sample, oracle };
enum class OutputFormat { csv, report };

struct RunConfig {
    Command command = Command::estimate;
    std::string set_path;
    std::string levels = "0..8";
    double stop_delta = 1e-4;
    bool extrapolate = false;
    int space_points = 1024;
    double truncation = 10.0;
    std::string rule = "simpson";
    std::uint64_t samples = 100000;
    std::uint64_t seed = 42;
    int workers = default_workers();
    std::string out = "-";
    std::optional<std::string> format;
    bool timing = false;
    // sample
    std::string mode = "vector";
    int level = 3;
    // oracle
    std::optional<double> one_sided;
    std::optional<double> two_sided;
    // verify
    std::vector<int> criteria;

    QuadratureConfig quadrature() const {
        QuadratureConfig q;
        q.space_points = space_points;
        q.truncation = truncation;
        q.rule = rule == "trapezoid" ? QuadratureRule::trapezoid : QuadratureRule::simpson;
        q.validate();
        return q;
    }
    RefinementPolicy policy() const {
        const auto r = parse_levels(levels);
        RefinementPolicy p;
        p.start_level = r.first;
        p.max_level = r.last;
        p.stop_delta = stop_delta;
        p.extrapolate = extrapolate;
        p.validate();
        return p;
    }
    McConfig mc(int level_for_paths = 8) const {
        McConfig m;
        m.samples = samples;
        m.seed = seed;
        m.workers = workers;
        m.level = level_for_paths;
        m.validate();
        return m;
    }
    OutputFormat output_format(OutputFormat fallback) const {
        if (!format) return fallback;
        return *format == "csv" ? OutputFormat::csv : OutputFormat::report;
    }
};

namespace detail {

inline std::string num(double v, int precision = 12) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

inline const char* kConvergeHeader = "level,n_times,alpha,delta_prev,quad_err,mc_phat,mc_se,runtime_ms\n";

struct ConvergeRow {
    int level = 0;
    std::size_t n_times = 0;
    double alpha = 0.0;
    std::optional<double> delta_prev;
    double quad_err = 0.0;
    std::optional<McEstimate> mc;
    std::optional<double> runtime_ms;
};

inline std::string csv_row(const ConvergeRow& r) {
    std::string s = std::to_string(r.level) + "," + std::to_string(r.n_times) + "," + num(r.alpha) + ",";
    if (r.delta_prev) s += num(*r.delta_prev);
    s += "," + num(r.quad_err, 6) + ",";
    if (r.mc) s += num(r.mc->p_hat) + "," + num(r.mc->std_error, 6);
    else s += ",";
    s += ",";
    if (r.runtime_ms) s += num(*r.runtime_ms, 6);
    return s + "\n";
}

inline nlohmann::json mc_json(const std::optional<McEstimate>& e) {
    if (!e) return nullptr;
    return {{"p_hat", e->p_hat}, {"std_error", e->std_error}, {"samples", e->samples}, {"seed", e->seed}};
}

inline nlohmann::json estimate_json(const MeasureEstimate& est, const RunConfig& cfg) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : est.alpha_trace)
        trace.push_back({{"level", e.level},
                         {"n_times", e.alpha.grid.size()},
                         {"alpha", e.alpha.value},
                         {"quad_err", e.alpha.est_quadrature_error}});
    return {{"value", est.value},
            {"last_alpha", est.last_alpha},
            {"stopped_by", to_string(est.stopped_by)},
            {"monotone_certified", est.monotone_certified},
            {"quadrature_error", est.quadrature_error()},
            {"alpha_trace", trace},
            {"mc_cross_check", mc_json(est.mc_cross_check)},
            {"warnings", est.warnings},
            {"policy",
             {{"levels", cfg.levels}, {"stop_delta", cfg.stop_delta}, {"extrapolate", cfg.extrapolate}}},
            {"quadrature",
             {{"space_points", cfg.space_points}, {"truncation", cfg.truncation}, {"rule", cfg.rule}}}};
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path == "-") {
            stream_ = &fallback;
        } else {
            file_.open(path);
            if (!file_) throw DomainError("--out: cannot open '" + path + "' for writing");
            stream_ = &file_;
        }
    }
    std::ostream& operator*() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

inline int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
    const auto expr = load_set_spec(cfg.set_path);
    const auto policy = cfg.policy();
    const auto quad = cfg.quadrature();
    auto est = mu_expr(expr, policy, quad);
    if (cfg.samples > 0 && !est.alpha_trace.empty())
        est.mc_cross_check =
            estimate_expr(expr, merge_with(grid_at_level(est.alpha_trace.back().level), breakpoints(expr)), cfg.mc());
    Output o(cfg.out, out);
    if (cfg.output_format(OutputFormat::report) == OutputFormat::report) {
        *o << estimate_json(est, cfg).dump(2) << "\n";
    } else {
        *o << kConvergeHeader;
        for (std::size_t i = 0; i < est.alpha_trace.size(); ++i) {
            const auto& e = est.alpha_trace[i];
            ConvergeRow r{e.level, e.alpha.grid.size(), e.alpha.value, std::nullopt, e.alpha.est_quadrature_error,
                          std::nullopt, std::nullopt};
            if (i > 0) r.delta_prev = e.alpha.value - est.alpha_trace[i - 1].alpha.value;
            if (i + 1 == est.alpha_trace.size()) r.mc = est.mc_cross_check;
            *o << csv_row(r);
        }
    }
    return kExitOk;
}

// One row per level A..B; every level is evaluated (no early stop) and checked for monotonicity.
inline int cmd_converge(const RunConfig& cfg, std::ostream& out) {
    const auto expr = load_set_spec(cfg.set_path);
    const auto levels = parse_levels(cfg.levels);
    const auto quad = cfg.quadrature();
    const auto breaks = breakpoints(expr);
    const bool closed = !std::holds_alternative<DifferenceSet>(expr);
    std::vector<ConvergeRow> rows;
    std::optional<AlphaValue> prev;
    for (int level = levels.first; level <= levels.last; ++level) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto grid = merge_with(grid_at_level(level), breaks);
        const auto a = alpha_expr(expr, grid, quad);
        ConvergeRow r{level, grid.size(), a.value, std::nullopt, a.est_quadrature_error, std::nullopt, std::nullopt};
        if (prev) {
            r.delta_prev = a.value - prev->value;
            if (closed && a.value > prev->value + monotone_slack(*prev, a))
                throw InternalConsistencyError("converge: alpha increased from level " + std::to_string(level - 1) +
                                               " to " + std::to_string(level) + " beyond quadrature slack");
        }
        if (cfg.samples > 0) r.mc = estimate_expr(expr, grid, cfg.mc());
        if (cfg.timing)
            r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(r);
        prev = a;
    }
    Output o(cfg.out, out);
    if (cfg.output_format(OutputFormat::csv) == OutputFormat::csv) {
        *o << kConvergeHeader;
        for (const auto& r : rows) *o << csv_row(r);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json j{{"level", r.level}, {"n_times", r.n_times}, {"alpha", r.alpha}, {"quad_err", r.quad_err}};
            j["delta_prev"] = r.delta_prev ? nlohmann::json(*r.delta_prev) : nlohmann::json(nullptr);
            j["mc"] = mc_json(r.mc);
            if (r.runtime_ms) j["runtime_ms"] = *r.runtime_ms;
            arr.push_back(j);
        }
        *o << nlohmann::json{{"rows", arr}}.dump(2) << "\n";
    }
    return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    VerifyOptions opt;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    opt.only.insert(cfg.criteria.begin(), cfg.criteria.end());
    if (cfg.timing) opt.timing = &err;
    const auto rep = run_verify(opt);
    Output o(cfg.out, out);
    const auto fmt = cfg.format;
    if (!fmt) {
        *o << rep.text();
        *o << (rep.all_passed() ? "ALL PASSED" : "SOME CRITERIA FAILED") << "\n";
    } else if (*fmt == "csv") {
        *o << "criterion,name,passed,detail\n";
        for (const auto& r : rep.results) {
            std::string d = r.detail;
            for (auto& ch : d)
                if (ch == '"') ch = '\'';
            *o << r.id << ",\"" << r.name << "\"," << (r.passed ? "true" : "false") << ",\"" << d << "\"\n";
        }
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rep.results)
            arr.push_back({{"criterion", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        *o << nlohmann::json{{"seed", cfg.seed}, {"criteria", arr}, {"all_passed", rep.all_passed()}}.dump(2) << "\n";
    }
    return rep.all_passed() ? kExitOk : kExitVerifyFailed;
}

inline int cmd_sample(const RunConfig& cfg, std::ostream& out) {
    if (cfg.level < 0 || cfg.level > 16) throw RefusalError("sample: --level must be in 0..16");
    const auto grid = grid_at_level(cfg.level);
    const SampleMatrix m = cfg.mode == "bridge"
                               ? sample_path_bridge(cfg.level, cfg.samples, cfg.seed, cfg.workers)
                               : sample_vector(to_doubles(grid.times()), cfg.samples, cfg.seed, cfg.workers);
    Output o(cfg.out, out);
    *o << "row";
    for (const auto& t : grid.times()) *o << ",W(" << t.to_string() << ")";
    *o << "\n";
    for (std::size_t r = 0; r < m.rows; ++r) {
        *o << r;
        for (double v : m.row(r)) *o << "," << num(v, 17);
        *o << "\n";
    }
    return kExitOk;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    if (!cfg.one_sided && !cfg.two_sided) throw DomainError("oracle: give --one-sided A and/or --two-sided A");
    Output o(cfg.out, out);
    if (cfg.output_format(OutputFormat::csv) == OutputFormat::report) {
        nlohmann::json j = nlohmann::json::object();
        if (cfg.one_sided) j["one_sided"] = {{"a", *cfg.one_sided}, {"value", oracle_one_sided(*cfg.one_sided)}};
        if (cfg.two_sided) j["two_sided"] = {{"a", *cfg.two_sided}, {"value", oracle_two_sided(*cfg.two_sided)}};
        *o << j.dump(2) << "\n";
        return kExitOk;
    }
    char buf[64];
    if (cfg.one_sided) {
        std::snprintf(buf, sizeof buf, "%.10f", oracle_one_sided(*cfg.one_sided));
        *o << buf << "\n";
    }
    if (cfg.two_sided) {
        std::snprintf(buf, sizeof buf, "%.10f", oracle_two_sided(*cfg.two_sided));
        *o << buf << "\n";
    }
    return kExitOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Wiener measure of path-constraint sets via refining finite-dimensional projections"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_quadrature = [&](CLI::App* sub) {
        sub->add_option("--space-points", cfg.space_points, "Nodes per time slab")->check(CLI::Range(16, 1 << 20));
        sub->add_option("--truncation", cfg.truncation, "Infinite bounds become +-F*sqrt(t_n)")->check(CLI::Range(6.0, 1e6));
        sub->add_option("--rule", cfg.rule, "Quadrature rule")->check(CLI::IsMember({"trapezoid", "simpson"}));
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--samples", cfg.samples, "Monte Carlo samples (0 disables the cross-check)");
        sub->add_option("--seed", cfg.seed, "Random seed");
        sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "Output path, - for standard output");
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "report"}));
        sub->add_flag("--timing", cfg.timing, "Record wall-clock timings (makes output run-dependent)");
    };

    auto* estimate = app.add_subcommand("estimate", "Estimate mu of a set specification");
    estimate->add_option("--set", cfg.set_path, "Set specification file")->required();
    estimate->add_option("--levels", cfg.levels, "Refinement levels A..B");
    estimate->add_option("--stop-delta", cfg.stop_delta, "Stop once successive alphas differ by less")->check(CLI::PositiveNumber);
    estimate->add_flag("--extrapolate", cfg.extrapolate, "Richardson extrapolation in sqrt(grid gap)");
    add_quadrature(estimate);
    add_common(estimate);

    auto* converge = app.add_subcommand("converge", "CSV convergence table over refinement levels");
    converge->add_option("--set", cfg.set_path, "Set specification file")->required();
    converge->add_option("--levels", cfg.levels, "Refinement levels A..B");
    add_quadrature(converge);
    add_common(converge);

    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--criteria", cfg.criteria, "Only these criteria (1..11)")->check(CLI::Range(1, 11));
    add_common(verify);

    auto* sample = app.add_subcommand("sample", "Write sampled vectors or bridge paths as CSV");
    sample->add_option("--mode", cfg.mode, "vector or bridge")->check(CLI::IsMember({"vector", "bridge"}));
    sample->add_option("--level", cfg.level, "Dyadic grid level of the sampled times");
    add_common(sample);

    auto* oracle = app.add_subcommand("oracle", "Closed-form barrier probabilities");
    oracle->add_option("--one-sided", cfg.one_sided, "P(sup W <= a)");
    oracle->add_option("--two-sided", cfg.two_sided, "P(sup |W| <= a)");
    oracle->add_option("--out", cfg.out, "Output path, - for standard output");
    oracle->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"csv", "report"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }

    try {
        if (estimate->parsed()) return detail::cmd_estimate(cfg, out);
        if (converge->parsed()) return detail::cmd_converge(cfg, out);
        if (verify->parsed()) return detail::cmd_verify(cfg, out, err);
        if (sample->parsed()) return detail::cmd_sample(cfg, out);
        if (oracle->parsed()) return detail::cmd_oracle(cfg, out);
    } catch (const InternalConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::logic_error& e) {  // DomainError, PreconditionError, SpecError
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const RefusalError& e) {
        err << "error: " << e.what() << "\n";
        return kExitBadInput;
    }
    return kExitBadInput;
}

}  // namespace wiener::cli
