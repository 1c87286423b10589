#pragma once

#include "dsedit/harness.hpp"
#include "dsedit/stats.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dsedit {

/// Win/tie/loss of one PS method against Baseline, over all DS methods
/// (ds_method == "all") or over one of them.
struct WtlRow {
    std::string ps_method;
    std::string ds_method;
    WinTieLoss wtl;
    double n_c = 0.0;
    double n_c_reported = 0.0;
    bool significant = false;
};

struct RankSummary {
    FriedmanResult friedman;
    std::optional<double> q;   ///< empty when k is outside the Bonferroni-Dunn table
    std::optional<double> cd;
    std::size_t dropped_blocks = 0; ///< (dataset, DS method) blocks lacking some PS method
};

/// Per (dataset, PS method) accuracy across replications. Each replication
/// contributes its mean over the DS methods.
struct DatasetRow {
    std::string dataset;
    std::string ps_method;
    double mean = 0.0;
    double std_dev = 0.0;
    std::size_t n = 0;
    bool best = false;        ///< highest mean on this dataset (ties share)
    bool significant = false; ///< best non-baseline method beats Baseline under Kruskal-Wallis
};

struct DatasetTest {
    std::string dataset;
    std::string best_method; ///< best non-baseline PS method
    KruskalWallisResult kw;
    bool better = false;     ///< significant and above Baseline
};

struct ReductionRow {
    std::string ps_method;
    double mean_reduction = 0.0;      ///< 1 - |DSEL'|/|DSEL|
    double mean_time_reduction = 0.0; ///< 1 - t(DSEL')/t(DSEL), paired per record
    double mean_ps_seconds = 0.0;
    std::size_t n = 0;
};

struct Report {
    double alpha = 0.05;
    double z_alpha = 1.645;
    std::size_t total_records = 0;
    std::size_t excluded_records = 0;
    std::map<std::string, std::size_t> excluded_by_status;
    std::vector<WtlRow> wtl;
    RankSummary ranks;
    std::vector<DatasetRow> datasets;
    std::vector<DatasetTest> dataset_tests;
    std::vector<ReductionRow> reduction;
    std::map<std::string, std::size_t> best_counts;
};

/// Builds every summary from the records. Failed cells are excluded and
/// counted. Throws DataError when there are no usable Baseline records.
Report make_report(const std::vector<RunRecord>& records, double alpha = 0.05,
                   double tie_tolerance = kDefaultTieTolerance);

void write_summary(std::ostream& out, const Report& report);

/// Writes wtl.csv, ranks.csv, datasets.csv, reduction.csv, best_counts.csv
/// and summary.txt into `dir` (created if needed).
void write_report(const Report& report, const std::string& dir);

} // namespace dsedit
