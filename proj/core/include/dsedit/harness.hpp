#pragma once

#include "dsedit/dataset.hpp"
#include "dsedit/dynselect.hpp"
#include "dsedit/edition.hpp"
#include "dsedit/pool.hpp"
#include "dsedit/search.hpp"
#include "dsedit/synth.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsedit {

enum class PsMethod { Baseline, ENN, RNG, RMHC, SSMA, GGA, CHC };

inline constexpr std::array<PsMethod, 7> kAllPsMethods{
    PsMethod::Baseline, PsMethod::ENN, PsMethod::RNG, PsMethod::RMHC,
    PsMethod::SSMA,     PsMethod::GGA, PsMethod::CHC};

std::string_view to_string(PsMethod m);
PsMethod parse_ps_method(std::string_view name);

/// Hyper-parameters of every prototype-selection method; defaults are the
/// standard KEEL settings.
struct PsParams {
    double alpha = 0.5;
    std::size_t fitness_k = 1;
    std::size_t enn_k = 3;
    std::size_t rmhc_iterations = 10000;
    double rmhc_init_frac = 0.10;
    GaConfig ssma = GaConfig::ssma_defaults();
    GaConfig gga = GaConfig::gga_defaults();
    GaConfig chc = GaConfig::chc_defaults();
};

struct PsOutcome {
    SelectionMask mask;
    std::size_t evaluations = 0;       ///< fitness evaluations (searchers only)
    double fitness = 0.0;              ///< best fitness (searchers only)
    std::vector<TracePoint> trace;     ///< searchers only
};

/// Runs one prototype-selection method on `dsel`. Baseline is the identity
/// mask. The seed only matters for the stochastic searchers.
PsOutcome apply_ps(PsMethod method, const Dataset& dsel, const PsParams& params,
                   std::uint64_t seed, unsigned jobs = 1);

/// Where a dataset comes from: a delimited-text file or a generator.
struct DatasetSource {
    std::string name;
    std::optional<std::string> path;
    std::optional<SynthSpec> synth;

    Dataset load() const;
};

struct ExperimentConfig {
    std::vector<DatasetSource> datasets;
    std::vector<PsMethod> ps_methods;   ///< Baseline is always run in addition
    std::vector<DsMethod> ds_methods{kAllDsMethods.begin(), kAllDsMethods.end()};
    std::size_t replications = 20;
    std::size_t pool_size = 100;
    std::size_t k = 7;
    std::uint64_t master_seed = 0;
    std::string output_dir = "results";
    unsigned jobs = 1;
    std::size_t timing_repeats = 3;
    bool measure_time = true;
    SplitSpec split;                     ///< seed field unused; seeds derive from master_seed
    PerceptronParams perceptron;
    PsParams ps;
    DsParams ds;

    /// Baseline first, then ps_methods without duplicates.
    std::vector<PsMethod> ps_methods_with_baseline() const;
    void validate() const;
};

/// Sectioned key = value text:
///
///   [experiment]   replications, pool_size, k, seed, output_dir, jobs,
///                  ps_methods, ds_methods, timing_repeats, measure_time,
///                  train_frac, dsel_frac, test_frac
///   [dataset NAME] path = FILE | synth = KIND, n, noise, seed
///   [method NAME]  per-method hyper-parameters
///   [perceptron]   epochs, learning_rate
///   [ds]           mcb_similarity
///
/// Relative dataset paths resolve against `base_dir`. Throws DataError with
/// the offending line number.
ExperimentConfig parse_config(std::istream& in, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

enum class CellStatus { Ok, PsGuard, RegionTooLarge, LoadError, Failed };
std::string_view to_string(CellStatus s);
CellStatus parse_cell_status(std::string_view s);

/// One (dataset, ps_method, ds_method, replication) outcome.
struct RunRecord {
    std::string dataset;
    PsMethod ps_method = PsMethod::Baseline;
    DsMethod ds_method = DsMethod::OLA;
    std::size_t replication = 0;
    CellStatus status = CellStatus::Ok;
    double accuracy = 0.0;
    double reduction_rate = 0.0;
    double ps_seconds = 0.0;
    double generalization_seconds = 0.0;
    std::size_t dsel_before = 0;
    std::size_t dsel_after = 0;

    bool ok() const noexcept { return status == CellStatus::Ok; }
};

/// Called after each finished (dataset, replication) cell.
using ProgressFn = std::function<void(const std::string& dataset, std::size_t replication)>;

/// Full grid: for every dataset and replication, one stratified split, one
/// scaler and one pool shared by all PS methods; every PS method edits the
/// same DSEL and every DS method classifies the same test set. Failures are
/// recorded per cell, never thrown. Records come back in grid order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

/// Wall time of classifying `test` with one DS method: one untimed warm-up
/// pass, then the median of `repeats` timed passes.
std::chrono::duration<double> measure_generalization_time(const ClassifierPool& pool,
                                                          const Dataset& dsel_prime,
                                                          const Dataset& test, DsMethod method,
                                                          std::size_t k, std::size_t repeats = 3,
                                                          const DsParams& params = {});

// Records CSV: a "# dsedit-records v1" line, a header, one row per record.
inline constexpr std::string_view kRecordsMagic = "# dsedit-records v1";
void write_records(std::ostream& out, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records(std::istream& in);
void save_records(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> load_records(const std::string& path);

/// Stable 64-bit FNV-1a, used to key seeds by dataset name.
std::uint64_t stable_hash(std::string_view s);

} // namespace dsedit
