#include "dsedit/harness.hpp"
#include "dsedit/report.hpp"
#include "dsedit/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

namespace fs = std::filesystem;
using namespace dsedit;

namespace {

struct RunOpts {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<unsigned> jobs;
    std::optional<std::size_t> replications;
    bool quiet = false;
};

int cmd_run(const RunOpts& o) {
    auto cfg = load_config(o.config);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    if (o.jobs) cfg.jobs = *o.jobs;
    if (o.replications) cfg.replications = *o.replications;
    cfg.validate();

    fs::create_directories(cfg.output_dir);
    const std::size_t total = cfg.datasets.size() * cfg.replications;
    std::size_t done = 0;
    auto progress = [&](const std::string& dataset, std::size_t rep) {
        ++done;
        if (!o.quiet) std::cerr << "[" << done << "/" << total << "] " << dataset << " replication " << rep << '\n';
    };
    const auto records = run_experiment(cfg, progress);
    const auto path = (fs::path(cfg.output_dir) / "records.csv").string();
    save_records(path, records);

    std::size_t failed = 0;
    for (const auto& r : records) failed += r.ok() ? 0 : 1;
    std::cout << "wrote " << records.size() << " records to " << path;
    if (failed) std::cout << " (" << failed << " failed cells)";
    std::cout << "\nmaster seed " << cfg.master_seed << ", jobs " << cfg.jobs << ", hardware threads "
              << std::thread::hardware_concurrency() << '\n';
    return 0;
}

int cmd_report(const std::string& records_path, double alpha, std::optional<std::string> out) {
    const auto records = load_records(records_path);
    const auto report = make_report(records, alpha);
    const auto dir = out ? *out : (fs::path(records_path).parent_path() / "report").string();
    write_report(report, dir.empty() ? "report" : dir);
    write_summary(std::cout, report);
    std::cout << "\nreport files in " << (dir.empty() ? "report" : dir) << '\n';
    return 0;
}

struct EditOpts {
    std::string method;
    std::string input;
    std::string out_data;
    std::string out_mask;
    std::string trace;
    std::uint64_t seed = 0;
    PsParams params;
    unsigned jobs = 1;
};

int cmd_edit(const EditOpts& o) {
    const auto method = parse_ps_method(o.method);
    const auto data = load_dataset(o.input);
    const auto outcome = apply_ps(method, data, o.params, o.seed, o.jobs);
    const auto edited = outcome.mask.apply(data);

    if (o.out_data.empty() || o.out_data == "-") write_dataset(std::cout, edited);
    else save_dataset(o.out_data, edited);

    const auto mask_line = format_mask_line(outcome.mask);
    if (!o.out_mask.empty()) {
        std::ofstream m(o.out_mask);
        if (!m) throw DataError("cannot write mask file '" + o.out_mask + "'");
        m << mask_line << '\n';
    }
    if (!o.trace.empty()) {
        std::ofstream t(o.trace);
        if (!t) throw DataError("cannot write trace file '" + o.trace + "'");
        write_trace(t, outcome.trace);
    }
    std::cerr << to_string(method) << ": kept " << outcome.mask.retained_count() << " of " << data.size()
              << " (reduction " << outcome.mask.reduction_rate() * 100.0 << "%)";
    if (outcome.evaluations) std::cerr << ", fitness " << outcome.fitness << " after " << outcome.evaluations << " evaluations";
    std::cerr << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DSEL editing with prototype selection, and the benchmark harness around it"};
    app.require_subcommand(1);

    RunOpts run;
    auto* run_cmd = app.add_subcommand("run", "run an experiment grid from a config file");
    run_cmd->add_option("config", run.config, "experiment config file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--seed", run.seed, "master seed (overrides the config)");
    run_cmd->add_option("--out", run.out, "output directory (overrides the config)");
    run_cmd->add_option("--jobs", run.jobs, "worker threads; 0 = all cores");
    run_cmd->add_option("--replications", run.replications, "replications (overrides the config)");
    run_cmd->add_flag("-q,--quiet", run.quiet, "no progress output");

    std::string records_path;
    double alpha = 0.05;
    std::optional<std::string> report_out;
    auto* report_cmd = app.add_subcommand("report", "statistics and summaries from a records CSV");
    report_cmd->add_option("records", records_path, "records.csv written by run")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--alpha", alpha, "significance level")->capture_default_str();
    report_cmd->add_option("--out", report_out, "report directory (default: <records dir>/report)");

    EditOpts edit;
    auto* edit_cmd = app.add_subcommand("edit", "apply one PS method to a dataset file");
    edit_cmd->add_option("method", edit.method, "Baseline, ENN, RNG, RMHC, SSMA, GGA or CHC")->required();
    edit_cmd->add_option("input", edit.input, "dataset file")->required()->check(CLI::ExistingFile);
    edit_cmd->add_option("-o,--out", edit.out_data, "edited dataset (default: stdout)");
    edit_cmd->add_option("--mask", edit.out_mask, "write the selection mask here");
    edit_cmd->add_option("--trace", edit.trace, "write the search trace here (searchers only)");
    edit_cmd->add_option("--seed", edit.seed, "seed for the stochastic searchers");
    edit_cmd->add_option("--alpha", edit.params.alpha, "fitness weight of accuracy")->capture_default_str();
    edit_cmd->add_option("--enn-k", edit.params.enn_k, "ENN neighbourhood size")->capture_default_str();
    std::optional<std::size_t> evaluations;
    edit_cmd->add_option("--evaluations", evaluations, "fitness-evaluation budget for SSMA/GGA/CHC/RMHC");
    edit_cmd->add_option("--jobs", edit.jobs, "threads for ENN/RNG")->capture_default_str();

    SynthSpec spec;
    std::string gen_kind = "banana";
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "write a synthetic dataset");
    gen_cmd->add_option("kind", gen_kind, "banana, gaussian_overlap, separable_gaussians or noisy_ring")
        ->capture_default_str();
    gen_cmd->add_option("-n", spec.n, "number of rows")->capture_default_str();
    gen_cmd->add_option("--noise", spec.noise, "noise level (meaning depends on the kind)")->capture_default_str();
    gen_cmd->add_option("--seed", spec.seed, "seed")->capture_default_str();
    gen_cmd->add_option("-o,--out", gen_out, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return cmd_run(run);
        if (*report_cmd) return cmd_report(records_path, alpha, report_out);
        if (*edit_cmd) {
            if (evaluations) {
                edit.params.ssma.max_evaluations = *evaluations;
                edit.params.gga.max_evaluations = *evaluations;
                edit.params.chc.max_evaluations = *evaluations;
                edit.params.rmhc_iterations = *evaluations;
            }
            return cmd_edit(edit);
        }
        if (*gen_cmd) {
            spec.kind = parse_synth_kind(gen_kind);
            const auto data = generate(spec);
            if (gen_out.empty() || gen_out == "-") write_dataset(std::cout, data);
            else save_dataset(gen_out, data);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
