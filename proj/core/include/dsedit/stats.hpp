#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace dsedit {

/// One accuracy observation of the comparison grid.
struct ComparisonRecord {
    std::string dataset;
    std::string ds_method;
    std::string ps_method;
    std::size_t replication = 0;
    double accuracy = 0.0;
};

/// Accuracy per (dataset, ds_method, ps_method, replication), unique keys.
class ComparisonTable {
public:
    /// Throws DataError on a duplicate key or a non-finite accuracy.
    void add(ComparisonRecord r);
    void add(std::string dataset, std::string ds_method, std::string ps_method,
             std::size_t replication, double accuracy);

    const std::vector<ComparisonRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }

    std::vector<std::string> datasets() const;
    std::vector<std::string> ds_methods() const;
    std::vector<std::string> ps_methods() const;

    /// (dataset, ds_method) blocks present in the table, sorted.
    std::vector<std::pair<std::string, std::string>> blocks() const;

    /// Mean accuracy over replications of one cell, if any records exist.
    std::optional<double> cell_mean(const std::string& dataset, const std::string& ds_method,
                                    const std::string& ps_method) const;

    /// Accuracies of one cell, ordered by replication.
    std::vector<double> cell_values(const std::string& dataset, const std::string& ds_method,
                                    const std::string& ps_method) const;

private:
    using Key = std::tuple<std::string, std::string, std::string, std::size_t>;
    std::vector<ComparisonRecord> records_;
    std::set<Key> keys_;
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::pair<std::size_t, double>>> cells_;
};

/// Sign-test critical win count n_exp / 2 + z * sqrt(n_exp) / 2.
double sign_test_critical(std::size_t n_exp, double z_alpha = 1.645);

/// Critical value as usually printed: rounded to one decimal
/// (101.03 -> 101, 19.505 -> 19.5).
double sign_test_reported(double n_c);

/// wins >= n_c, equivalently wins >= ceil(n_c) for integer win counts.
bool sign_test_significant(std::size_t wins, double n_c);

struct WinTieLoss {
    std::size_t wins = 0;
    std::size_t ties = 0;
    std::size_t losses = 0;
    std::size_t n_exp = 0;
};

inline constexpr double kDefaultTieTolerance = 1e-4;

/// Compares per-cell mean accuracies of `challenger` against `baseline` over
/// every (dataset, ds_method) block, optionally restricted to one ds_method.
/// Throws DataError naming the first block where either method is missing.
WinTieLoss win_tie_loss(const ComparisonTable& table, const std::string& challenger,
                        const std::string& baseline, double tolerance = kDefaultTieTolerance,
                        const std::optional<std::string>& ds_method = std::nullopt);

struct FriedmanResult {
    std::vector<std::string> methods;   ///< sorted method names
    std::vector<double> average_ranks;  ///< parallel to `methods`; 1 = best
    std::size_t n_blocks = 0;
};

/// Ranks every ps_method within each (dataset, ds_method) block by descending
/// mean accuracy, mid-ranks for ties. Throws when any block is incomplete.
FriedmanResult friedman_ranks(const ComparisonTable& table);

/// Mid-ranks of `values` in descending order (largest value gets rank 1).
std::vector<double> descending_ranks(const std::vector<double>& values);

/// Two-tailed Bonferroni-Dunn q_alpha for k compared methods
/// (2 <= k <= 10, alpha 0.05 or 0.10). Throws otherwise.
double bonferroni_dunn_q(std::size_t k, double alpha = 0.05);

/// q_alpha * sqrt(k (k + 1) / (6 n_blocks)).
double bonferroni_dunn_cd(std::size_t k, std::size_t n_blocks, double q_alpha);

struct KruskalWallisResult {
    double h = 0.0;
    std::size_t df = 0;
    double critical = 0.0; ///< chi-square quantile at 1 - alpha
    double p_value = 1.0;
    bool significant = false;
};

/// Kruskal-Wallis H with tie correction; significance from the chi-square
/// approximation with groups - 1 degrees of freedom. All-tied samples give
/// H = 0.
KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups,
                                   double alpha = 0.05);

} // namespace dsedit
