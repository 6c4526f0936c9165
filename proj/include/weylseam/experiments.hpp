// Experiment driver: a small command layer that turns a JSON configuration
// into one deterministic artifact (CSV or JSON table) per run.
//
// Contract highlights:
//   * Every artifact echoes the fully resolved configuration (all defaults
//     filled in), so re-running the echoed config reproduces the artifact
//     byte for byte.
//   * Configuration mistakes throw UsageError naming the offending field;
//     the CLI maps those to exit code 2.  Numerical failures surface as
//     weylseam::Error and map to exit code 3 with the error kind printed
//     verbatim on stderr.
//   * Randomized commands (reconstruct) require an explicit seed and draw
//     from SplitMix64 only, in grid order, so rows are reproducible.
//   * CSV uses '.' as the decimal separator and %.17g for doubles
//     regardless of environment.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "design.hpp"
#include "errors.hpp"
#include "hamiltonian.hpp"
#include "inversion.hpp"
#include "linalg.hpp"
#include "rng.hpp"
#include "seam.hpp"
#include "spectral.hpp"
#include "transfer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

namespace weylseam {

// Configuration mistake (unknown command, missing/ill-typed parameter).
// Deliberately not a weylseam::Error: the CLI exits 2 for usage problems
// and reserves exit 3 for numerical failures inside a valid run.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

struct ExperimentConfig {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
};

inline ExperimentConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& item : doc.items()) {
        if (item.key() != "command" && item.key() != "parameters")
            throw UsageError("unknown config field '" + item.key() + "'");
    }
    if (!doc.contains("command") || !doc["command"].is_string())
        throw UsageError("config field 'command' must be a string");
    ExperimentConfig config;
    config.command = doc["command"].get<std::string>();
    if (doc.contains("parameters")) {
        if (!doc["parameters"].is_object())
            throw UsageError("config field 'parameters' must be an object");
        config.parameters = doc["parameters"];
    }
    return config;
}

namespace detail_cli {

inline std::string format_double(double x) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

inline std::string format_cell(const nlohmann::json& value) {
    if (value.is_number_float()) return format_double(value.get<double>());
    if (value.is_number_unsigned()) return std::to_string(value.get<std::uint64_t>());
    if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_string()) return value.get<std::string>();
    throw UsageError("table cells must be numbers, booleans, or strings");
}

// Typed access to the parameter object.  Every successful read is recorded
// in `resolved`, and finish() rejects keys that no reader consumed, so
// misspelled parameters fail loudly instead of being silently ignored.
class Params {
public:
    Params(const nlohmann::json& parameters, std::string command)
        : raw_(parameters), command_(std::move(command)) {
        if (!raw_.is_object()) throw UsageError("config field 'parameters' must be an object");
    }

    bool has(const std::string& name) const { return raw_.contains(name); }

    double number(const std::string& name, double fallback) {
        double value = fallback;
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_number()) bad(name, "must be a number");
            value = j.get<double>();
        }
        if (!std::isfinite(value)) bad(name, "must be finite");
        resolved_[name] = value;
        touched_.insert(name);
        return value;
    }

    double positive(const std::string& name, double fallback) {
        const double value = number(name, fallback);
        if (!(value > 0.0)) bad(name, "must be > 0");
        return value;
    }

    double nonnegative(const std::string& name, double fallback) {
        const double value = number(name, fallback);
        if (!(value >= 0.0)) bad(name, "must be >= 0");
        return value;
    }

    int integer(const std::string& name, int fallback, int min_value) {
        std::int64_t value = fallback;
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_number_integer() && !j.is_number_unsigned()) bad(name, "must be an integer");
            value = j.get<std::int64_t>();
        }
        if (value < min_value)
            bad(name, "must be an integer >= " + std::to_string(min_value));
        resolved_[name] = value;
        touched_.insert(name);
        return static_cast<int>(value);
    }

    std::uint64_t seed() {
        if (!raw_.contains("seed"))
            throw UsageError("command '" + command_ +
                             "' draws random numbers: parameter 'seed' is required "
                             "(set it in the config or pass --seed)");
        const auto& j = raw_["seed"];
        if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
            bad("seed", "must be a nonnegative integer");
        const std::uint64_t value = j.get<std::uint64_t>();
        resolved_["seed"] = value;
        touched_.insert("seed");
        return value;
    }

    std::string choice(const std::string& name, const std::string& fallback,
                       const std::vector<std::string>& allowed) {
        std::string value = fallback;
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_string()) bad(name, "must be a string");
            value = j.get<std::string>();
        }
        if (std::find(allowed.begin(), allowed.end(), value) == allowed.end()) {
            std::string list;
            for (std::size_t i = 0; i < allowed.size(); ++i)
                list += (i ? "|" : "") + allowed[i];
            bad(name, "must be one of " + list);
        }
        resolved_[name] = value;
        touched_.insert(name);
        return value;
    }

    std::string text(const std::string& name, const std::string& fallback) {
        std::string value = fallback;
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_string()) bad(name, "must be a string");
            value = j.get<std::string>();
        }
        resolved_[name] = value;
        touched_.insert(name);
        return value;
    }

    std::vector<double> number_list(const std::string& name, std::vector<double> fallback,
                                    bool require_positive) {
        std::vector<double> values = std::move(fallback);
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_array() || j.empty()) bad(name, "must be a nonempty array of numbers");
            values.clear();
            for (const auto& item : j) {
                if (!item.is_number()) bad(name, "must be a nonempty array of numbers");
                values.push_back(item.get<double>());
            }
        }
        for (double v : values) {
            if (!std::isfinite(v)) bad(name, "entries must be finite");
            if (require_positive && !(v > 0.0)) bad(name, "entries must be > 0");
        }
        resolved_[name] = values;
        touched_.insert(name);
        return values;
    }

    std::vector<int> integer_list(const std::string& name, std::vector<int> fallback,
                                  int min_value) {
        std::vector<int> values = std::move(fallback);
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_array() || j.empty()) bad(name, "must be a nonempty array of integers");
            values.clear();
            for (const auto& item : j) {
                if (!item.is_number_integer() && !item.is_number_unsigned())
                    bad(name, "must be a nonempty array of integers");
                values.push_back(static_cast<int>(item.get<std::int64_t>()));
            }
        }
        for (int v : values)
            if (v < min_value)
                bad(name, "entries must be integers >= " + std::to_string(min_value));
        resolved_[name] = values;
        touched_.insert(name);
        return values;
    }

    // Complex vector encoded as [[re, im], ...]; must have exactly `count`
    // entries when present.  Defaults to zeros.
    std::vector<cplx> complex_list(const std::string& name, std::size_t count) {
        std::vector<cplx> values(count, cplx{});
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_array() || j.size() != count)
                bad(name, "must be an array of " + std::to_string(count) + " [re, im] pairs");
            for (std::size_t i = 0; i < count; ++i) {
                const auto& pair = j[i];
                if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
                    !pair[1].is_number())
                    bad(name, "entries must be [re, im] pairs of numbers");
                values[i] = cplx(pair[0].get<double>(), pair[1].get<double>());
                if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag()))
                    bad(name, "entries must be finite");
            }
        }
        nlohmann::json echo = nlohmann::json::array();
        for (const cplx& v : values) echo.push_back({v.real(), v.imag()});
        resolved_[name] = std::move(echo);
        touched_.insert(name);
        return values;
    }

    cplx upper_half_point(const std::string& name, cplx fallback) {
        cplx value = fallback;
        if (raw_.contains(name)) {
            const auto& j = raw_[name];
            if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
                bad(name, "must be an [re, im] pair of numbers");
            value = cplx(j[0].get<double>(), j[1].get<double>());
        }
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
            bad(name, "must be finite");
        if (!(value.imag() > 0.0)) bad(name, "must lie in the open upper half-plane (im > 0)");
        resolved_[name] = {value.real(), value.imag()};
        touched_.insert(name);
        return value;
    }

    void record(const std::string& name, const nlohmann::json& value) {
        resolved_[name] = value;
        touched_.insert(name);
    }

    void finish() const {
        for (const auto& item : raw_.items()) {
            if (!touched_.count(item.key()))
                throw UsageError("unknown parameter '" + item.key() + "' for command '" +
                                 command_ + "'");
        }
    }

    const nlohmann::json& resolved() const { return resolved_; }

private:
    [[noreturn]] void bad(const std::string& name, const std::string& what) const {
        throw UsageError("parameter '" + name + "' " + what);
    }

    nlohmann::json raw_;
    std::string command_;
    nlohmann::json resolved_ = nlohmann::json::object();
    std::set<std::string> touched_;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<nlohmann::json> rows;          // each row: array, one cell per column
    nlohmann::json notes = nlohmann::json::object();

    void add_row(std::initializer_list<nlohmann::json> cells) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& cell : cells) row.push_back(cell);
        require(row.size() == columns.size(), ErrorKind::InvalidInput,
                "internal: row width does not match the column count");
        rows.push_back(std::move(row));
    }
};

} // namespace detail_cli

struct Artifact {
    std::string text;    // the serialized table, ready to write
    std::string format;  // "csv" or "json"
    std::string out;     // output path ("" = stdout)
};

namespace detail_cli {

inline nlohmann::json resolved_config(const std::string& command, const Params& params) {
    nlohmann::json config;
    config["command"] = command;
    config["parameters"] = params.resolved();
    return config;
}

inline std::string render_csv(const std::string& command, const nlohmann::json& config,
                              const Table& table) {
    std::string text;
    text += "# weylseam " + command + "\n";
    text += "# config " + config.dump() + "\n";
    for (const auto& note : table.notes.items())
        text += "# " + note.key() + " " + format_cell(note.value()) + "\n";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        text += (i ? "," : "") + table.columns[i];
    text += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            text += (i ? "," : "") + format_cell(row[i]);
        text += "\n";
    }
    return text;
}

inline std::string render_json(const std::string& command, const nlohmann::json& config,
                               const Table& table) {
    nlohmann::json doc;
    doc["command"] = command;
    doc["config"] = config;
    doc["columns"] = table.columns;
    doc["rows"] = table.rows;
    doc["notes"] = table.notes;
    return doc.dump(2) + "\n";
}

// --- command handlers ----------------------------------------------------

inline Table run_eval(Params& params) {
    const int N = params.integer("N", 8, 1);
    const double Lambda = params.positive("Lambda", 4.0);
    const double epsilon = params.positive("epsilon", 0.05);
    const std::vector<cplx> q = params.complex_list("q", static_cast<std::size_t>(N));
    const cplx z = params.upper_half_point("z", cplx(0.3, 0.5));
    params.finish();

    const BlockHamiltonian h(N, Lambda, q, epsilon);
    const cplx m = weyl_m(h, z);
    const cplx v = schur_v(h, z);

    Table table;
    table.columns = {"z_re", "z_im", "m_re", "m_im", "v_re", "v_im", "im_m"};
    table.add_row({z.real(), z.imag(), m.real(), m.imag(), v.real(), v.imag(),
                   im_m_from_v(v)});
    return table;
}

inline Table run_jacobian(Params& params) {
    const int N = params.integer("N", 8, 1);
    const int M = params.integer("M", 8, 1);
    const double eta = params.positive("eta", 0.5);
    const double Lambda = params.positive("Lambda", 4.0);
    const double ell = Lambda / N;
    // The echoed alpha is the value actually used, so a defaulted run and
    // its round-trip construct the same design.
    const double alpha_default = detail::two_pi / (4.0 * M);
    const double alpha = params.positive("alpha", alpha_default);
    params.finish();

    const SeamDesign design = equispaced_design(alpha, M, ell, eta);
    const BlockJacobian jac = jacobian_block_free(design, N, Lambda);
    const std::vector<double> svals = singular_values(jac.T);

    Table table;
    table.columns = {"k", "j", "re", "im"};
    for (int k = 0; k < M; ++k)
        for (int j = 0; j < N; ++j) {
            const cplx entry = jac.T(k, j);
            table.add_row({k, j, entry.real(), entry.imag()});
        }
    table.notes["smin"] = svals.back();
    table.notes["smax"] = svals.front();
    return table;
}

inline Table run_design_sweep(Params& params) {
    const std::vector<int> sizes = params.integer_list("MN", {4, 8, 16}, 1);
    const std::vector<double> etas = params.number_list("etas", {0.25, 0.5, 1.0}, true);
    const std::vector<double> Lambdas = params.number_list("Lambdas", {4.0}, true);
    params.finish();

    Table table;
    table.columns = {"M", "N", "eta", "Lambda", "smin", "lower", "upper", "defect"};
    for (int size : sizes)
        for (double eta : etas)
            for (double Lambda : Lambdas) {
                const double ell = Lambda / size;
                const SeamDesign design = half_shift_design(size, ell, eta);
                const SandwichReport report = smin_bounds_block(design, size, Lambda);
                table.add_row({size, size, eta, Lambda, report.smin, report.lower,
                               report.upper, report.tight_frame_defect});
            }
    return table;
}

inline Table run_reconstruct(Params& params) {
    const std::uint64_t seed = params.seed();
    const int N = params.integer("N", 8, 1);
    const double eta = params.positive("eta", 0.5);
    const double Lambda = params.positive("Lambda", 4.0);
    const int trials = params.integer("trials", 100, 1);
    const double amp = params.nonnegative("amp", 1e-3);
    const double noise = params.nonnegative("noise", 1e-6);
    const double epsilon = params.positive("epsilon", 0.05);
    const std::string mode_text = params.choice("mode", "empirical", {"empirical", "certified"});
    params.finish();

    const ReconstructMode mode =
        mode_text == "certified" ? ReconstructMode::certified : ReconstructMode::empirical;
    const SeamDesign design = half_shift_design(N, Lambda / N, eta);
    const BlockHamiltonian base(N, Lambda, std::vector<cplx>(N, cplx{}), epsilon);
    SplitMix64 rng(seed);

    Table table;
    table.columns = {"trial", "noise_norm", "error_norm", "bound_2M0e", "iterations", "mode"};
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<cplx> theta_true(N);
        for (cplx& qj : theta_true) qj = rng.complex_disk(amp / std::sqrt(double(N)));

        std::vector<cplx> y = seam_map(base, theta_true, design);
        std::vector<cplx> e(y.size());
        for (cplx& ek : e) ek = rng.complex_disk(1.0);
        const double raw = norm2(e);
        const double noise_norm = raw > 0.0 ? noise : 0.0;
        if (noise_norm > 0.0)
            for (std::size_t k = 0; k < y.size(); ++k) y[k] += e[k] * (noise / raw);

        const ReconstructResult result = reconstruct(y, design, N, Lambda, mode, 50, 1e-12,
                                                     epsilon);
        std::vector<cplx> diff(theta_true.size());
        for (std::size_t j = 0; j < diff.size(); ++j)
            diff[j] = result.theta_star[j] - theta_true[j];

        table.add_row({trial, noise_norm, norm2(diff),
                       2.0 * result.certificate.M0 * noise_norm, result.iterations,
                       mode_text});
    }
    return table;
}

inline Table run_minimax(Params& params) {
    const int N = params.integer("N", 8, 1);
    const double eta = params.positive("eta", 0.5);
    const double Lambda = params.positive("Lambda", 4.0);
    const double delta = params.positive("delta", 1e-3);
    const double epsilon = params.positive("epsilon", 0.05);
    params.finish();

    const SeamDesign design = half_shift_design(N, Lambda / N, eta);
    const TwoPointReport report = minimax_two_point(design, N, Lambda, delta, epsilon);

    Table table;
    table.columns = {"delta", "t", "sample_gap", "lower_bound", "small_noise",
                     "delta_over_4alpha", "exponential_form"};
    table.add_row({delta, report.t, report.sample_gap, report.lower_bound,
                   report.small_noise, report.delta_over_4alpha, report.exponential_form});
    return table;
}

inline Table run_poisson_minimax(Params& params) {
    const std::vector<int> K_list = params.integer_list("K_list", {4, 8, 12, 16}, 2);
    const double eta = params.positive("eta", 1.0);
    const int M = params.integer("M", 8, 1);
    const double epsilon = params.positive("epsilon", 0.1);
    const double delta = params.nonnegative("delta", 1e-3);
    const double T = params.positive("T", 120.0);
    const double dt = params.positive("dt", 0.01);
    const double ell = params.positive("ell", 0.5);
    const double alpha = params.positive("alpha", 0.3);
    params.finish();

    const SeamDesign design = equispaced_design(alpha, M, ell, eta);
    Table table;
    table.columns = {"K", "eta", "sample_gap", "c1_bound", "L2_separation"};
    for (int K : K_list) {
        const BumpPair pair = build_bump_pair(K, epsilon, GridSpec{T, dt});
        const MinimaxPairReport report = minimax_pair_report(pair, design, delta);
        table.add_row({K, eta, report.sample_gap, report.c1_bound, report.L2_separation});
    }
    return table;
}

inline Table run_prolate(Params& params) {
    const double Lambda = params.positive("Lambda", 4.0);
    const double Omega = params.positive("Omega", 20.0);
    const int n_grid = params.integer("n_grid", 128, 64);
    const double eta = params.nonnegative("eta", 0.0);
    params.finish();

    const std::vector<double> svals = prolate_singular_values(Lambda, Omega, n_grid);
    std::vector<double> weighted;
    if (eta > 0.0) weighted = prolate_singular_values(Lambda, Omega, n_grid, eta);

    Table table;
    table.columns = {"index", "sigma"};
    if (eta > 0.0) table.columns.push_back("sigma_weighted");
    for (std::size_t i = 0; i < svals.size(); ++i) {
        if (eta > 0.0)
            table.add_row({static_cast<int>(i), svals[i], weighted[i]});
        else
            table.add_row({static_cast<int>(i), svals[i]});
    }
    table.notes["plateau"] = plateau_count(svals);
    table.notes["shannon"] = shannon_number(Lambda, Omega);
    if (eta > 0.0) table.notes["plateau_weighted"] = plateau_count(weighted);
    return table;
}

} // namespace detail_cli

// Run one experiment.  Pure: reads nothing but `config`, writes nothing but
// the returned artifact.  Parameter problems throw UsageError; numerical
// problems inside the run throw weylseam::Error.
inline Artifact run_experiment(const ExperimentConfig& config) {
    using namespace detail_cli;
    Params params(config.parameters, config.command);
    // Serialization controls are shared by every command.
    const std::string format = params.choice("format", "csv", {"csv", "json"});
    const std::string out = params.text("out", "");

    Table table;
    if (config.command == "eval") table = run_eval(params);
    else if (config.command == "jacobian") table = run_jacobian(params);
    else if (config.command == "design-sweep") table = run_design_sweep(params);
    else if (config.command == "reconstruct") table = run_reconstruct(params);
    else if (config.command == "minimax") table = run_minimax(params);
    else if (config.command == "poisson-minimax") table = run_poisson_minimax(params);
    else if (config.command == "prolate") table = run_prolate(params);
    else
        throw UsageError("unknown command '" + config.command +
                         "' (expected eval|jacobian|design-sweep|reconstruct|minimax|"
                         "poisson-minimax|prolate)");

    const nlohmann::json resolved = resolved_config(config.command, params);
    Artifact artifact;
    artifact.format = format;
    artifact.out = out;
    artifact.text = format == "csv" ? render_csv(config.command, resolved, table)
                                    : render_json(config.command, resolved, table);
    return artifact;
}

// Structural check of a JSON artifact: required fields, consistent row
// widths, and an embedded config that parses back into an ExperimentConfig.
inline void validate_artifact(const nlohmann::json& doc) {
    if (!doc.is_object()) throw UsageError("artifact must be a JSON object");
    for (const char* field : {"command", "config", "columns", "rows", "notes"})
        if (!doc.contains(field))
            throw UsageError(std::string("artifact is missing field '") + field + "'");
    const ExperimentConfig config = config_from_json(doc["config"]);
    if (config.command != doc["command"].get<std::string>())
        throw UsageError("artifact command does not match its embedded config");
    if (!doc["columns"].is_array() || doc["columns"].empty())
        throw UsageError("artifact field 'columns' must be a nonempty array");
    if (!doc["rows"].is_array()) throw UsageError("artifact field 'rows' must be an array");
    for (const auto& row : doc["rows"])
        if (!row.is_array() || row.size() != doc["columns"].size())
            throw UsageError("artifact rows must match the column count");
}

// ---------------------------------------------------------------------------
// CLI front end.  Kept in the header (with streams injected) so tests can
// drive exit codes and stderr text in-process.

namespace detail_cli {

inline const char* usage_text() {
    return "usage: weylseam --command <name> [--config <file>] [--seed <n>]\n"
           "                [--out <file>] [--format csv|json]\n"
           "\n"
           "commands:\n"
           "  eval             Weyl m and Schur v of a perturbed block system at one point\n"
           "  jacobian         exact block Jacobian entries and extreme singular values\n"
           "  design-sweep     sigma_min sandwich across design sizes, eta, and Lambda\n"
           "  reconstruct      randomized noisy reconstruction trials (requires --seed)\n"
           "  minimax          two-point stability/minimax certificate for one design\n"
           "  poisson-minimax  smoothed-data indistinguishability across frequencies K\n"
           "  prolate          singular spectrum of the truncated Fourier restriction\n"
           "\n"
           "flags override the matching config fields; --seed sets parameters.seed.\n";
}

} // namespace detail_cli

inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace detail_cli;
    std::string command;
    std::string config_path;
    std::string out_path;
    std::string format;
    std::uint64_t seed = 0;

    CLI::App app{"trace-normed canonical system experiments"};
    app.add_option("--command", command,
                   "eval | jacobian | design-sweep | reconstruct | minimax | "
                   "poisson-minimax | prolate");
    app.add_option("--config", config_path, "JSON config file {command, parameters}");
    auto* seed_flag = app.add_option("--seed", seed,
                                     "RNG seed (sets parameters.seed; required by reconstruct)");
    app.add_option("--out", out_path, "write the artifact to this file instead of stdout");
    app.add_option("--format", format, "artifact format: csv (default) or json");
    app.footer(usage_text());

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << usage_text();
        return 2;
    }

    try {
        nlohmann::json doc;
        if (!config_path.empty()) {
            std::ifstream file(config_path, std::ios::binary);
            if (!file) throw UsageError("cannot open config file '" + config_path + "'");
            try {
                doc = nlohmann::json::parse(file);
            } catch (const nlohmann::json::parse_error& e) {
                throw UsageError("config file '" + config_path + "' is not valid JSON: " +
                                 e.what());
            }
        } else {
            doc = {{"command", ""}, {"parameters", nlohmann::json::object()}};
        }
        if (!command.empty()) doc["command"] = command;
        if (!doc.contains("parameters")) doc["parameters"] = nlohmann::json::object();
        if (seed_flag->count() > 0) doc["parameters"]["seed"] = seed;
        if (!format.empty()) doc["parameters"]["format"] = format;
        if (!out_path.empty()) doc["parameters"]["out"] = out_path;
        if (!doc.contains("command") || !doc["command"].is_string() ||
            doc["command"].get<std::string>().empty())
            throw UsageError("missing required flag '--command' (or a config file "
                             "with a 'command' field)");

        const ExperimentConfig config = config_from_json(doc);
        const Artifact artifact = run_experiment(config);
        if (artifact.out.empty()) {
            out << artifact.text;
        } else {
            std::ofstream file(artifact.out, std::ios::binary);
            if (!file) throw UsageError("cannot open output file '" + artifact.out + "'");
            file << artifact.text;
        }
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        // e.what() begins with the error kind's name, verbatim.
        err << e.what() << "\n";
        return 3;
    }
}

} // namespace weylseam
