// Command-line front end.
//
//   aoi-sim run <spec-file> [--out DIR] [--threads N] [--dry-run]
//   aoi-sim verify <suite> [--seed S]
//   aoi-sim trace <spec-file> --cell I [--rep K] [--emit-age-csv]
//
// Exit codes: 0 on success, 1 when a run or a verification check fails,
// 2 when the command line or the spec file is invalid.

#include <cstddef>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "aoi/experiment.hpp"
#include "aoi/metrics.hpp"
#include "aoi/simulate.hpp"
#include "aoi/verify.hpp"

namespace {

int do_run(const std::string& spec_path, const std::string& out_dir, int threads,
           bool dry_run) {
    const aoi::ExperimentSpec spec = aoi::load_spec(spec_path);
    const std::size_t cells = spec.sweep.values.size() * spec.policies.size();
    const std::size_t runs = cells * static_cast<std::size_t>(spec.replications);
    if (dry_run) {
        std::cout << "spec \"" << spec.name << "\": " << spec.sweep.values.size()
                  << " sweep points x " << spec.policies.size() << " policies x "
                  << spec.replications << " replications = " << runs << " runs, "
                  << spec.metrics.size() << " metrics\n";
        return 0;
    }

    const aoi::ExperimentResult result = aoi::run_experiment(spec, threads);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    const std::filesystem::path csv_path = dir / (spec.name + ".csv");
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << aoi::result_csv(result);
    out.close();
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());

    std::cout << "wrote " << result.rows.size() << " rows to " << csv_path.string()
              << "\n";
    return 0;
}

int do_verify(const std::string& suite, std::uint64_t seed) {
    const aoi::SuiteReport report = aoi::run_verification_suite(suite, seed);
    std::cout << report.text();
    return report.pass() ? 0 : 1;
}

int do_trace(const std::string& spec_path, std::size_t cell, std::size_t rep,
             bool emit_age_csv) {
    const aoi::ExperimentSpec spec = aoi::load_spec(spec_path);
    const std::size_t n_policies = spec.policies.size();
    const std::size_t n_cells = spec.sweep.values.size() * n_policies;
    if (cell >= n_cells)
        throw std::invalid_argument("cell index " + std::to_string(cell) +
                                    " out of range: spec \"" + spec.name + "\" has " +
                                    std::to_string(n_cells) +
                                    " cells (sweep points x policies)");
    if (rep >= static_cast<std::size_t>(spec.replications))
        throw std::invalid_argument("replication index " + std::to_string(rep) +
                                    " out of range: spec \"" + spec.name + "\" has " +
                                    std::to_string(spec.replications) +
                                    " replications");

    const std::size_t si = cell / n_policies;
    const std::size_t pi = cell % n_policies;
    aoi::SystemConfig cfg = aoi::cell_config(spec, si, pi, rep);
    cfg.record_events = true;
    const aoi::Trace trace =
        aoi::run_simulation(cfg, aoi::PolicyDescriptor{spec.policies[pi].name});

    if (emit_age_csv) {
        std::cout << aoi::age_trajectory_csv(aoi::age_trajectory(trace));
    } else {
        std::cout << "cell " << cell << ": sweep_value="
                  << aoi::format_double(spec.sweep.values[si]) << " policy="
                  << spec.policies[pi].name << " rep=" << rep << "\n"
                  << aoi::trace_text(trace);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-of-information simulator for replicated multi-server queues"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_dir = ".";
    int threads = 1;
    bool dry_run = false;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Run an experiment spec and write one CSV table");
    run_cmd->add_option("spec-file", spec_path, "experiment spec (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "output directory (default: .)");
    run_cmd->add_option("--threads", threads, "worker threads (default: 1)")
        ->check(CLI::PositiveNumber);
    run_cmd->add_flag("--dry-run", dry_run, "validate the spec and print the plan");

    std::string suite;
    std::uint64_t seed = 1;
    std::string suite_help = "suite name, one of:";
    for (const std::string& name : aoi::verification_suites())
        suite_help += " " + name;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "Run a self-checking verification suite");
    verify_cmd->add_option("suite", suite, suite_help)->required();
    verify_cmd->add_option("--seed", seed, "base seed (default: 1)");

    std::string trace_spec_path;
    std::size_t cell = 0;
    std::size_t rep = 0;
    bool emit_age_csv = false;
    CLI::App* trace_cmd = app.add_subcommand(
        "trace", "Replay one cell of an experiment spec as an event trace");
    trace_cmd->add_option("spec-file", trace_spec_path, "experiment spec (JSON)")
        ->required();
    trace_cmd
        ->add_option("--cell", cell,
                     "flat cell index, sweep-major over (sweep point, policy)")
        ->required();
    trace_cmd->add_option("--rep", rep, "replication index (default: 0)");
    trace_cmd->add_flag("--emit-age-csv", emit_age_csv,
                        "print the age sawtooth as CSV instead of the event trace");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run_cmd->parsed()) return do_run(spec_path, out_dir, threads, dry_run);
        if (verify_cmd->parsed()) return do_verify(suite, seed);
        if (trace_cmd->parsed())
            return do_trace(trace_spec_path, cell, rep, emit_age_csv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
