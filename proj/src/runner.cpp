#include "hamkrylov/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hamkrylov/error.hpp"
#include "hamkrylov/format.hpp"
#include "hamkrylov/matrix_market.hpp"

namespace hamkrylov {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("config: unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
T get_as(const json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + std::string(key) + "' in " + where + ": " + e.what());
    }
}

std::size_t get_count(const json& obj, const char* key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("config: '" + std::string(key) + "' in " + where + " must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

double get_positive(const json& obj, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("config: '" + std::string(key) + "' must be a number");
    const double x = v.get<double>();
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("config: '" + std::string(key) + "' must be positive");
    return x;
}

std::vector<std::size_t> get_count_list(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError("config: '" + what + "' must be an array of integers");
    std::vector<std::size_t> out;
    for (const json& x : v) {
        if (!x.is_number_integer() || x.get<long long>() < 0) {
            throw ConfigError("config: '" + what + "' must contain nonnegative integers");
        }
        out.push_back(x.get<std::size_t>());
    }
    return out;
}

ProblemSpec parse_problem(const json& p, std::uint64_t seed) {
    if (!p.is_object()) throw ConfigError("config: 'problem' must be an object");
    reject_unknown(p, {"family", "m", "N", "initial", "seed"}, "problem");
    ProblemSpec spec;
    const auto name = get_as<std::string>(p, "family", "problem");
    const auto family = parse_family(name);
    if (!family) throw ConfigError("config: unknown problem family '" + name + "'");
    spec.family = *family;

    const bool pde = *family == ProblemFamily::Wave2D || *family == ProblemFamily::Maxwell1D ||
                     *family == ProblemFamily::Maxwell3D;
    const char* size_key = pde ? "N" : "m";
    const char* other_key = pde ? "m" : "N";
    if (p.contains(other_key)) {
        throw ConfigError("config: family " + name + " is sized by '" + size_key + "', not '" + other_key + "'");
    }
    if (!p.contains(size_key)) throw ConfigError("config: problem needs '" + std::string(size_key) + "'");
    spec.size = get_count(p, size_key, "problem");
    const std::size_t minimum = *family == ProblemFamily::Maxwell1D ? 3 : pde ? 2 : 1;
    if (spec.size < minimum) {
        throw ConfigError("config: '" + std::string(size_key) + "' must be at least " + std::to_string(minimum));
    }

    spec.seed = p.contains("seed") ? get_as<std::uint64_t>(p, "seed", "problem") : seed;
    if (p.contains("initial")) {
        const auto mode_name = get_as<std::string>(p, "initial", "problem");
        const auto mode = parse_initial_mode(mode_name);
        if (!mode) throw ConfigError("config: unknown initial mode '" + mode_name + "'");
        spec.initial = mode;
    }
    return spec;
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& rec, bool with_global_error) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << "t,energy,energy_error";
    for (std::size_t k : rec.integral_orders) out << ",H_" << k;
    if (with_global_error) out << ",global_error";
    out << "\r\n";
    for (std::size_t s = 0; s < rec.times.size(); ++s) {
        out << format_double(rec.times[s]) << ',' << format_double(rec.energy[s]) << ','
            << format_double(rec.energy_error[s]);
        for (const Vector& column : rec.integrals) out << ',' << format_double(column[s]);
        if (with_global_error) out << ',' << format_double(rec.global_error[s]);
        out << "\r\n";
    }
    if (!out) throw Error("write failed for " + path.string());
}

std::string integral_kind_name(IntegralKind kind) {
    switch (kind) {
    case IntegralKind::Full: return "full";
    case IntegralKind::WeightedArnoldi: return "weighted_arnoldi";
    case IntegralKind::Modified: return "modified";
    }
    return "unknown";
}

json problem_json(const ExperimentConfig& config, const Problem& problem) {
    return json{{"family", std::string(to_string(config.problem.family))},
                {"size", config.problem.size},
                {"seed", config.problem.seed},
                {"dimension", problem.system.dim()},
                {"canonical", problem.system.is_canonical()},
                {"description", problem.system.description()}};
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

} // namespace

std::size_t problem_dimension(const ProblemSpec& spec) {
    const std::size_t n = spec.size;
    switch (spec.family) {
    case ProblemFamily::Wave2D: return n < 2 ? 0 : 2 * (n - 1) * (n - 1);
    case ProblemFamily::Maxwell1D: return 2 * n;
    case ProblemFamily::Maxwell3D: return n < 2 ? 0 : 2 * (n - 1) * (n - 1) * (n - 1);
    default: return 2 * n;
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown(doc,
                   {"problem", "methods", "krylov_dim", "T", "h", "restart", "diagnostics", "block_j_stabilized",
                    "output_dir", "seed", "sweep"},
                   "config");

    ExperimentConfig c;
    const std::uint64_t seed = doc.contains("seed") ? get_as<std::uint64_t>(doc, "seed", "config") : 0;
    if (!doc.contains("problem")) throw ConfigError("config: 'problem' is required");
    c.problem = parse_problem(doc.at("problem"), seed);

    if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
        throw ConfigError("config: 'methods' must be a nonempty array");
    }
    std::set<std::string> seen;
    for (const json& m : doc.at("methods")) {
        if (!m.is_string()) throw ConfigError("config: method names must be strings");
        const auto name = m.get<std::string>();
        if (name != "Reference" && !parse_method(name)) throw ConfigError("config: unknown method '" + name + "'");
        if (!seen.insert(name).second) throw ConfigError("config: duplicate method '" + name + "'");
        c.methods.push_back(name);
    }

    if (doc.contains("krylov_dim")) c.krylov_dim = get_count(doc, "krylov_dim", "config");
    if (doc.contains("T")) c.horizon = get_positive(doc, "T");
    if (doc.contains("h")) c.h = get_positive(doc, "h");
    if (doc.contains("restart")) {
        const json& r = doc.at("restart");
        if (r.is_null() || (r.is_boolean() && !r.get<bool>()) || (r.is_string() && r.get<std::string>() == "off")) {
            c.restart.reset();
        } else if (r.is_number()) {
            c.restart = get_positive(doc, "restart");
        } else {
            throw ConfigError("config: 'restart' must be a positive interval, \"off\", false or null");
        }
    }
    if (doc.contains("diagnostics")) {
        const json& d = doc.at("diagnostics");
        if (!d.is_object()) throw ConfigError("config: 'diagnostics' must be an object");
        reject_unknown(d, {"energy", "integrals", "global_error"}, "diagnostics");
        if (d.contains("energy")) c.diagnostics.energy = get_as<bool>(d, "energy", "diagnostics");
        if (d.contains("integrals")) c.diagnostics.integrals = get_count_list(d.at("integrals"), "integrals");
        if (d.contains("global_error")) c.diagnostics.global_error = get_as<bool>(d, "global_error", "diagnostics");
    }
    if (doc.contains("block_j_stabilized")) c.block_j_stabilized = get_as<bool>(doc, "block_j_stabilized", "config");
    if (doc.contains("output_dir")) c.output_dir = get_as<std::string>(doc, "output_dir", "config");
    if (doc.contains("sweep")) {
        c.sweep = get_count_list(doc.at("sweep"), "sweep");
        if (c.sweep->empty()) throw ConfigError("config: 'sweep' must not be empty");
    }

    const std::size_t dim = problem_dimension(c.problem);
    auto check_dim = [&](std::size_t d, const std::string& what) {
        if (d < 2) throw ConfigError("config: " + what + " must be at least 2");
        if (d > dim) {
            throw ConfigError("config: " + what + " = " + std::to_string(d) + " exceeds the state dimension " +
                              std::to_string(dim));
        }
    };
    check_dim(c.krylov_dim, "krylov_dim");
    if (c.sweep) {
        for (std::size_t d : *c.sweep) check_dim(d, "sweep entry");
    }
    for (std::size_t k : c.diagnostics.integrals) {
        if (k > dim) throw ConfigError("config: integral order " + std::to_string(k) + " exceeds 2m");
    }
    try {
        (void)c.schedule().steps_per_interval();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

bool RunReport::any_failure() const {
    return std::any_of(outcomes.begin(), outcomes.end(), [](const MethodOutcome& o) { return o.error.has_value(); });
}

bool ConvergenceResult::any_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const ConvergenceRow& r) { return r.error.has_value(); });
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (char ch : text) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

bool is_monotone_within_noise(const std::vector<double>& errors, double factor, double floor, double ceiling) {
    if (errors.empty()) return true;
    const double plateau = std::clamp(*std::min_element(errors.begin(), errors.end()), floor, ceiling);
    for (std::size_t i = 1; i < errors.size(); ++i) {
        if (errors[i] > std::max(errors[i - 1], factor * plateau)) return false;
    }
    return true;
}

RunReport run(const ExperimentConfig& config) {
    RunReport report;
    if (config.sweep) {
        const ConvergenceResult conv = convergence_study(config);
        report.convergence_csv = conv.csv;
        for (const ConvergenceRow& row : conv.rows) {
            if (!row.error) continue;
            MethodOutcome o;
            o.method = row.method + "@" + std::to_string(row.krylov_dim);
            o.error = row.error;
            report.outcomes.push_back(std::move(o));
        }
        report.summary = conv.csv;
        return report;
    }

    std::filesystem::create_directories(config.output_dir);
    const auto setup_start = std::chrono::steady_clock::now();
    const Problem problem = make_problem(config.problem);
    const Schedule schedule = config.schedule();

    DiagnosticsOptions diag;
    diag.integral_orders = config.diagnostics.integrals;
    diag.global_error = config.diagnostics.global_error;
    if (diag.global_error) {
        diag.reference = std::make_shared<const CayleyPropagator>(problem.system.materialize_a(), schedule.h);
    }
    const double setup_seconds = seconds_since(setup_start);

    ProjectionOptions popts;
    popts.block_j_stabilized = config.block_j_stabilized;

    // Reference first when requested.
    std::vector<std::string> order;
    if (std::find(config.methods.begin(), config.methods.end(), "Reference") != config.methods.end()) {
        order.push_back("Reference");
    }
    for (const std::string& m : config.methods)
        if (m != "Reference") order.push_back(m);

    for (const std::string& name : order) {
        MethodOutcome o;
        o.method = name;
        const auto start = std::chrono::steady_clock::now();
        try {
            TrajectoryRecord rec;
            const bool reference = name == "Reference";
            if (reference) {
                rec = reference_solution(problem.system, problem.y0, schedule, diag);
            } else {
                rec = run_method(problem.system, problem.y0, *parse_method(name), config.krylov_dim, schedule, diag,
                                 popts);
            }
            const auto path = config.output_dir / (name + ".csv");
            write_trajectory_csv(path, rec, diag.global_error && !reference);
            o.csv = path;
            o.max_abs_energy_error = rec.max_abs_energy_error();
            if (!rec.global_error.empty()) o.final_global_error = rec.global_error.back();
            o.projections = rec.projections;
            o.krylov_early_stops = rec.krylov_early_stops;
            o.reduced_dim = rec.reduced_dim;
            o.max_projection_defect = rec.max_projection_defect;
            o.integral_preservation_claimed = rec.integral_preservation_claimed;
        } catch (const Error& e) {
            o.error = e.what();
        }
        o.seconds = seconds_since(start);
        report.outcomes.push_back(std::move(o));
    }

    json methods = json::array();
    for (const MethodOutcome& o : report.outcomes) {
        json entry{{"method", o.method}, {"status", o.error ? "error" : "ok"}, {"seconds", o.seconds}};
        if (o.error) {
            entry["error"] = *o.error;
        } else {
            entry["csv"] = o.csv->filename().string();
            entry["max_abs_energy_error"] = o.max_abs_energy_error;
            entry["final_global_error"] = o.final_global_error ? json(*o.final_global_error) : json(nullptr);
            entry["projections"] = o.projections;
            entry["krylov_early_stops"] = o.krylov_early_stops;
            entry["reduced_dim"] = o.reduced_dim;
            entry["max_projection_defect"] = o.max_projection_defect;
            entry["integral_preservation_claimed"] = o.integral_preservation_claimed;
            if (o.method != "Reference") {
                entry["integral_kind"] = integral_kind_name(
                    *parse_method(o.method) == Method::APMH  ? IntegralKind::WeightedArnoldi
                    : *parse_method(o.method) == Method::APM ? IntegralKind::Modified
                                                             : IntegralKind::Full);
            }
        }
        methods.push_back(std::move(entry));
    }
    json summary{{"problem", problem_json(config, problem)},
                 {"krylov_dim", config.krylov_dim},
                 {"T", config.horizon},
                 {"h", config.h},
                 {"restart", config.restart ? json(*config.restart) : json(nullptr)},
                 {"methods", std::move(methods)},
                 {"setup_seconds", setup_seconds}};
    report.summary = config.output_dir / "summary.json";
    write_json(report.summary, summary);
    return report;
}

ConvergenceResult convergence_study(const ExperimentConfig& config) {
    if (!config.sweep || config.sweep->empty()) throw ConfigError("convergence: empty sweep");
    std::filesystem::create_directories(config.output_dir);
    const Problem problem = make_problem(config.problem);
    const Schedule schedule = config.schedule();

    DiagnosticsOptions diag;
    diag.global_error = true;
    diag.max_state_samples = 2;
    diag.reference = std::make_shared<const CayleyPropagator>(problem.system.materialize_a(), schedule.h);
    ProjectionOptions popts;
    popts.block_j_stabilized = config.block_j_stabilized;

    std::vector<std::size_t> dims = *config.sweep;
    std::sort(dims.begin(), dims.end());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    ConvergenceResult result;
    for (const std::string& name : config.methods) {
        if (name == "Reference") continue;
        const Method method = *parse_method(name);
        std::vector<double> errors;
        for (std::size_t d : dims) {
            ConvergenceRow row;
            row.method = name;
            row.krylov_dim = d;
            try {
                const TrajectoryRecord rec =
                    run_method(problem.system, problem.y0, method, d, schedule, diag, popts);
                row.final_global_error = rec.global_error.back();
                errors.push_back(*row.final_global_error);
            } catch (const Error& e) {
                row.error = e.what();
            }
            result.rows.push_back(std::move(row));
        }
        result.monotone.emplace_back(name, is_monotone_within_noise(errors));
    }

    result.csv = config.output_dir / "convergence.csv";
    std::ofstream out(result.csv, std::ios::binary);
    if (!out) throw Error("cannot open " + result.csv.string() + " for writing");
    out << "method,krylov_dim,final_global_error,monotone,error\r\n";
    for (const ConvergenceRow& row : result.rows) {
        const bool mono = std::find_if(result.monotone.begin(), result.monotone.end(), [&](const auto& p) {
                              return p.first == row.method;
                          })->second;
        out << csv_field(row.method) << ',' << row.krylov_dim << ','
            << (row.final_global_error ? format_double(*row.final_global_error) : "") << ','
            << (mono ? "true" : "false") << ',' << csv_field(row.error.value_or("")) << "\r\n";
    }
    return result;
}

std::vector<std::filesystem::path> dump_problem(const ExperimentConfig& config) {
    std::filesystem::create_directories(config.output_dir);
    const Problem problem = make_problem(config.problem);
    std::vector<std::filesystem::path> written;

    const auto h_path = config.output_dir / "H.mtx";
    const AnyMatrix& h = problem.system.h();
    const SparseMatrix hs = std::holds_alternative<SparseMatrix>(h) ? std::get<SparseMatrix>(h)
                                                                    : SparseMatrix::from_dense(std::get<DenseMatrix>(h));
    mm::write_coordinate(h_path, hs, mm::Symmetry::Symmetric);
    written.push_back(h_path);

    const auto y_path = config.output_dir / "y0.mtx";
    mm::write_array(y_path, DenseMatrix(problem.y0.size(), 1, problem.y0));
    written.push_back(y_path);

    json files = json::array({"H.mtx", "y0.mtx"});
    if (const SparseMatrix* s = problem.system.structure()) {
        const auto s_path = config.output_dir / "structure.mtx";
        mm::write_coordinate(s_path, *s, mm::Symmetry::General);
        written.push_back(s_path);
        files.push_back("structure.mtx");
    }
    json sidecar = problem_json(config, problem);
    sidecar["files"] = std::move(files);
    sidecar["initial"] = config.problem.initial ? std::string(to_string(*config.problem.initial)) : "default";
    const auto j_path = config.output_dir / "problem.json";
    write_json(j_path, sidecar);
    written.push_back(j_path);
    return written;
}

} // namespace hamkrylov
