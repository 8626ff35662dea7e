#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hamkrylov/error.hpp"
#include "hamkrylov/format.hpp"
#include "hamkrylov/runner.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeFailure = 2;

hamkrylov::ExperimentConfig load(const std::string& path) {
    hamkrylov::ExperimentConfig config = hamkrylov::load_config(path);
    if (const char* dir = std::getenv("HK_OUTPUT_DIR"); dir && *dir) config.output_dir = dir;
    return config;
}

int report_run(const hamkrylov::RunReport& report) {
    for (const auto& o : report.outcomes) {
        if (o.error) {
            std::cerr << o.method << ": FAILED: " << *o.error << '\n';
        } else {
            std::cout << o.method << ": max |energy error| = " << hamkrylov::format_double(o.max_abs_energy_error);
            if (o.final_global_error) {
                std::cout << ", final global error = " << hamkrylov::format_double(*o.final_global_error);
            }
            std::cout << " -> " << o.csv->string() << '\n';
        }
    }
    if (report.convergence_csv) std::cout << "convergence table -> " << report.convergence_csv->string() << '\n';
    return report.any_failure() ? kRuntimeFailure : kOk;
}

int report_convergence(const hamkrylov::ConvergenceResult& result) {
    for (const auto& row : result.rows) {
        std::cout << row.method << " 2n=" << row.krylov_dim << ": ";
        if (row.error) {
            std::cout << "FAILED: " << *row.error << '\n';
        } else {
            std::cout << hamkrylov::format_double(*row.final_global_error) << '\n';
        }
    }
    for (const auto& [method, mono] : result.monotone) {
        std::cout << method << " monotone: " << (mono ? "yes" : "no") << '\n';
    }
    std::cout << "-> " << result.csv.string() << '\n';
    return result.any_failure() ? kRuntimeFailure : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov projection methods for linear Hamiltonian systems"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run the configured methods and write one CSV per method");
    run_cmd->add_option("config", config_path, "JSON experiment configuration")->required();

    auto* converge_cmd = app.add_subcommand("converge", "Global error at T against the Krylov dimension sweep");
    converge_cmd->add_option("config", config_path, "JSON experiment configuration")->required();

    std::uint64_t seed = 0;
    bool negative_control = false;
    std::string report_path;
    auto* inv_cmd = app.add_subcommand("invariants", "Run the property suite and print a JSON verdict");
    inv_cmd->add_option("--seed", seed, "Seed for the random problem instances");
    inv_cmd->add_flag("--negative-control", negative_control, "Corrupt the symmetry of H in the construction check");
    inv_cmd->add_option("--output", report_path, "Also write the report to this file");

    auto* dump_cmd = app.add_subcommand("dump-problem", "Export the configured problem as Matrix Market files");
    dump_cmd->add_option("config", config_path, "JSON experiment configuration")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run_cmd) return report_run(hamkrylov::run(load(config_path)));
        if (*converge_cmd) {
            hamkrylov::ExperimentConfig config = load(config_path);
            if (!config.sweep) throw hamkrylov::ConfigError("config: 'sweep' is required for converge");
            return report_convergence(hamkrylov::convergence_study(config));
        }
        if (*inv_cmd) {
            const hamkrylov::InvariantReport report = hamkrylov::invariant_suite(seed, negative_control);
            std::cout << report.json;
            if (!report_path.empty()) {
                std::ofstream out(report_path, std::ios::binary);
                out << report.json;
                if (!out) throw hamkrylov::Error("cannot write " + report_path);
            }
            return report.all_pass ? kOk : kRuntimeFailure;
        }
        if (*dump_cmd) {
            for (const auto& path : hamkrylov::dump_problem(load(config_path))) std::cout << path.string() << '\n';
            return kOk;
        }
    } catch (const hamkrylov::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kConfigError;
}
