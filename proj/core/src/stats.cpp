#include "dsedit/stats.hpp"

#include "dsedit/dataset.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace dsedit {

void ComparisonTable::add(ComparisonRecord r) {
    if (!std::isfinite(r.accuracy)) throw DataError("comparison record with non-finite accuracy");
    Key key{r.dataset, r.ds_method, r.ps_method, r.replication};
    if (!keys_.insert(key).second)
        throw DataError("duplicate comparison record (" + r.dataset + ", " + r.ds_method + ", " +
                        r.ps_method + ", replication " + std::to_string(r.replication) + ")");
    auto& cell = cells_[{r.dataset, r.ds_method, r.ps_method}];
    cell.emplace_back(r.replication, r.accuracy);
    std::sort(cell.begin(), cell.end());
    records_.push_back(std::move(r));
}

void ComparisonTable::add(std::string dataset, std::string ds_method, std::string ps_method,
                          std::size_t replication, double accuracy) {
    add(ComparisonRecord{std::move(dataset), std::move(ds_method), std::move(ps_method), replication, accuracy});
}

namespace {

template <class F>
std::vector<std::string> distinct(const std::vector<ComparisonRecord>& records, F field) {
    std::set<std::string> s;
    for (const auto& r : records) s.insert(field(r));
    return {s.begin(), s.end()};
}

} // namespace

std::vector<std::string> ComparisonTable::datasets() const {
    return distinct(records_, [](const auto& r) { return r.dataset; });
}
std::vector<std::string> ComparisonTable::ds_methods() const {
    return distinct(records_, [](const auto& r) { return r.ds_method; });
}
std::vector<std::string> ComparisonTable::ps_methods() const {
    return distinct(records_, [](const auto& r) { return r.ps_method; });
}

std::vector<std::pair<std::string, std::string>> ComparisonTable::blocks() const {
    std::set<std::pair<std::string, std::string>> s;
    for (const auto& r : records_) s.emplace(r.dataset, r.ds_method);
    return {s.begin(), s.end()};
}

std::optional<double> ComparisonTable::cell_mean(const std::string& dataset, const std::string& ds_method,
                                                 const std::string& ps_method) const {
    auto it = cells_.find({dataset, ds_method, ps_method});
    if (it == cells_.end() || it->second.empty()) return std::nullopt;
    double s = 0.0;
    for (const auto& [rep, acc] : it->second) s += acc;
    return s / static_cast<double>(it->second.size());
}

std::vector<double> ComparisonTable::cell_values(const std::string& dataset, const std::string& ds_method,
                                                 const std::string& ps_method) const {
    std::vector<double> out;
    auto it = cells_.find({dataset, ds_method, ps_method});
    if (it == cells_.end()) return out;
    for (const auto& [rep, acc] : it->second) out.push_back(acc);
    return out;
}

// ---------------------------------------------------------------------------

double sign_test_critical(std::size_t n_exp, double z_alpha) {
    if (n_exp == 0) throw DataError("sign test needs at least one experiment");
    const auto n = static_cast<double>(n_exp);
    return n / 2.0 + z_alpha * std::sqrt(n) / 2.0;
}

double sign_test_reported(double n_c) { return std::round(n_c * 10.0) / 10.0; }

bool sign_test_significant(std::size_t wins, double n_c) {
    return static_cast<double>(wins) >= n_c;
}

WinTieLoss win_tie_loss(const ComparisonTable& table, const std::string& challenger,
                        const std::string& baseline, double tolerance,
                        const std::optional<std::string>& ds_method) {
    WinTieLoss out;
    for (const auto& [dataset, ds] : table.blocks()) {
        if (ds_method && ds != *ds_method) continue;
        const auto c = table.cell_mean(dataset, ds, challenger);
        const auto b = table.cell_mean(dataset, ds, baseline);
        if (!c || !b)
            throw DataError("win/tie/loss: cell (" + dataset + ", " + ds + ") lacks " +
                            (!c ? challenger : baseline));
        ++out.n_exp;
        if (*c > *b + tolerance)
            ++out.wins;
        else if (*c < *b - tolerance)
            ++out.losses;
        else
            ++out.ties;
    }
    return out;
}

std::vector<double> descending_ranks(const std::vector<double>& values) {
    const std::size_t k = values.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<double> ranks(k);
    for (std::size_t p = 0; p < k;) {
        std::size_t q = p;
        while (q + 1 < k && values[order[q + 1]] == values[order[p]]) ++q;
        const double mid = (static_cast<double>(p + 1) + static_cast<double>(q + 1)) / 2.0;
        for (std::size_t r = p; r <= q; ++r) ranks[order[r]] = mid;
        p = q + 1;
    }
    return ranks;
}

FriedmanResult friedman_ranks(const ComparisonTable& table) {
    FriedmanResult res;
    res.methods = table.ps_methods();
    const std::size_t k = res.methods.size();
    if (k == 0) throw DataError("friedman ranks: empty table");
    res.average_ranks.assign(k, 0.0);
    for (const auto& [dataset, ds] : table.blocks()) {
        std::vector<double> means(k);
        for (std::size_t m = 0; m < k; ++m) {
            const auto v = table.cell_mean(dataset, ds, res.methods[m]);
            if (!v)
                throw DataError("friedman ranks: block (" + dataset + ", " + ds + ") lacks " +
                                res.methods[m]);
            means[m] = *v;
        }
        const auto ranks = descending_ranks(means);
        for (std::size_t m = 0; m < k; ++m) res.average_ranks[m] += ranks[m];
        ++res.n_blocks;
    }
    for (auto& r : res.average_ranks) r /= static_cast<double>(res.n_blocks);
    return res;
}

double bonferroni_dunn_q(std::size_t k, double alpha) {
    // Critical values for the two-tailed Bonferroni-Dunn test (Demsar 2006).
    static constexpr std::array<double, 9> q05{1.960, 2.241, 2.394, 2.498, 2.576, 2.638, 2.690, 2.724, 2.773};
    static constexpr std::array<double, 9> q10{1.645, 1.960, 2.128, 2.241, 2.326, 2.394, 2.450, 2.498, 2.539};
    if (k < 2 || k > 10) throw DataError("Bonferroni-Dunn table covers 2..10 methods");
    if (std::abs(alpha - 0.05) < 1e-12) return q05[k - 2];
    if (std::abs(alpha - 0.10) < 1e-12) return q10[k - 2];
    throw DataError("Bonferroni-Dunn table covers alpha = 0.05 and 0.10 only");
}

double bonferroni_dunn_cd(std::size_t k, std::size_t n_blocks, double q_alpha) {
    if (k < 2 || n_blocks == 0) throw DataError("critical difference needs k >= 2 and n >= 1");
    const auto kk = static_cast<double>(k);
    return q_alpha * std::sqrt(kk * (kk + 1.0) / (6.0 * static_cast<double>(n_blocks)));
}

KruskalWallisResult kruskal_wallis(const std::vector<std::vector<double>>& groups, double alpha) {
    if (groups.size() < 2) throw DataError("Kruskal-Wallis needs at least two groups");
    std::vector<std::pair<double, std::size_t>> pooled;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty())
            throw DataError("Kruskal-Wallis group " + std::to_string(g) + " has no samples");
        for (double v : groups[g]) pooled.emplace_back(v, g);
    }
    const std::size_t n = pooled.size();
    std::sort(pooled.begin(), pooled.end());

    std::vector<double> rank_sum(groups.size(), 0.0);
    double tie_term = 0.0;
    for (std::size_t p = 0; p < n;) {
        std::size_t q = p;
        while (q + 1 < n && pooled[q + 1].first == pooled[p].first) ++q;
        const double mid = (static_cast<double>(p + 1) + static_cast<double>(q + 1)) / 2.0;
        for (std::size_t r = p; r <= q; ++r) rank_sum[pooled[r].second] += mid;
        const auto t = static_cast<double>(q - p + 1);
        tie_term += t * t * t - t;
        p = q + 1;
    }

    KruskalWallisResult res;
    res.df = groups.size() - 1;
    const auto nn = static_cast<double>(n);
    const double correction = 1.0 - tie_term / (nn * nn * nn - nn);
    if (correction <= 0.0) {
        res.h = 0.0;
    } else {
        double s = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g)
            s += rank_sum[g] * rank_sum[g] / static_cast<double>(groups[g].size());
        res.h = (12.0 / (nn * (nn + 1.0)) * s - 3.0 * (nn + 1.0)) / correction;
        res.h = std::max(0.0, res.h);
    }
    const boost::math::chi_squared dist(static_cast<double>(res.df));
    res.critical = boost::math::quantile(dist, 1.0 - alpha);
    res.p_value = res.h > 0.0 ? boost::math::cdf(boost::math::complement(dist, res.h)) : 1.0;
    res.significant = res.h > res.critical;
    return res;
}

} // namespace dsedit
