#include "dsedit/report.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace dsedit {

namespace {

constexpr const char* kBaseline = "Baseline";

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for fewer than two values.
double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Keeps the blocks in which every method of `methods` has a cell.
ComparisonTable restrict_blocks(const ComparisonTable& table, const std::vector<std::string>& methods,
                                std::size_t* dropped = nullptr) {
    std::set<std::pair<std::string, std::string>> keep;
    std::size_t n_dropped = 0;
    for (const auto& [dataset, ds] : table.blocks()) {
        bool complete = true;
        for (const auto& m : methods) complete = complete && table.cell_mean(dataset, ds, m).has_value();
        if (complete) keep.emplace(dataset, ds);
        else ++n_dropped;
    }
    ComparisonTable out;
    const std::set<std::string> wanted(methods.begin(), methods.end());
    for (const auto& r : table.records())
        if (keep.count({r.dataset, r.ds_method}) && wanted.count(r.ps_method)) out.add(r);
    if (dropped) *dropped = n_dropped;
    return out;
}

} // namespace

Report make_report(const std::vector<RunRecord>& records, double alpha, double tie_tolerance) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("alpha must lie in (0, 1)");
    Report rep;
    rep.alpha = alpha;
    rep.total_records = records.size();
    const boost::math::normal normal;
    rep.z_alpha = std::round(boost::math::quantile(normal, 1.0 - alpha) * 1000.0) / 1000.0;

    ComparisonTable table;
    std::vector<const RunRecord*> ok;
    for (const auto& r : records) {
        if (!r.ok()) {
            ++rep.excluded_records;
            ++rep.excluded_by_status[std::string(to_string(r.status))];
            continue;
        }
        ok.push_back(&r);
        table.add(r.dataset, std::string(to_string(r.ds_method)), std::string(to_string(r.ps_method)),
                  r.replication, r.accuracy);
    }
    const auto methods = table.ps_methods();
    if (std::find(methods.begin(), methods.end(), kBaseline) == methods.end())
        throw DataError("records contain no usable Baseline rows; nothing to compare against");

    // (a) win/tie/loss against Baseline.
    for (const auto& m : methods) {
        if (m == kBaseline) continue;
        const auto paired = restrict_blocks(table, {m, kBaseline});
        if (paired.size() == 0) continue;
        std::vector<std::optional<std::string>> scopes{std::nullopt};
        for (const auto& ds : paired.ds_methods()) scopes.emplace_back(ds);
        for (const auto& scope : scopes) {
            WtlRow row;
            row.ps_method = m;
            row.ds_method = scope.value_or("all");
            row.wtl = win_tie_loss(paired, m, kBaseline, tie_tolerance, scope);
            row.n_c = sign_test_critical(row.wtl.n_exp, rep.z_alpha);
            row.n_c_reported = sign_test_reported(row.n_c);
            row.significant = sign_test_significant(row.wtl.wins, row.n_c);
            rep.wtl.push_back(std::move(row));
        }
    }

    // (b) Friedman ranks over complete blocks, with the critical difference.
    const auto complete = restrict_blocks(table, methods, &rep.ranks.dropped_blocks);
    if (complete.size() > 0) {
        rep.ranks.friedman = friedman_ranks(complete);
        const std::size_t k = rep.ranks.friedman.methods.size();
        if (k >= 2 && k <= 10 && (std::abs(alpha - 0.05) < 1e-12 || std::abs(alpha - 0.10) < 1e-12)) {
            rep.ranks.q = bonferroni_dunn_q(k, alpha);
            rep.ranks.cd = bonferroni_dunn_cd(k, rep.ranks.friedman.n_blocks, *rep.ranks.q);
        }
    }

    // (c) per-dataset table; replication values are means over DS methods.
    std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<double>> per_rep;
    for (const auto* r : ok)
        per_rep[{r->dataset, std::string(to_string(r->ps_method)), r->replication}].push_back(r->accuracy);
    std::map<std::pair<std::string, std::string>, std::vector<double>> samples;
    for (const auto& [key, accs] : per_rep)
        samples[{std::get<0>(key), std::get<1>(key)}].push_back(mean_of(accs));

    for (const auto& dataset : table.datasets()) {
        std::vector<DatasetRow> rows;
        for (const auto& m : methods) {
            auto it = samples.find({dataset, m});
            if (it == samples.end()) continue;
            rows.push_back({dataset, m, mean_of(it->second), std_of(it->second), it->second.size(), false, false});
        }
        double top = -1.0;
        for (const auto& r : rows) top = std::max(top, r.mean);
        const DatasetRow* best_other = nullptr;
        for (auto& r : rows) {
            r.best = r.mean == top;
            if (r.ps_method != kBaseline && (!best_other || r.mean > best_other->mean)) best_other = &r;
        }
        for (const auto& r : rows)
            if (r.best) ++rep.best_counts[r.ps_method];

        auto base = samples.find({dataset, kBaseline});
        if (best_other && base != samples.end()) {
            DatasetTest t;
            t.dataset = dataset;
            t.best_method = best_other->ps_method;
            const auto& best_samples = samples.at({dataset, best_other->ps_method});
            t.kw = kruskal_wallis({best_samples, base->second}, alpha);
            t.better = t.kw.significant && mean_of(best_samples) > mean_of(base->second);
            if (t.better)
                for (auto& r : rows)
                    if (r.ps_method == t.best_method) r.significant = true;
            rep.dataset_tests.push_back(std::move(t));
        }
        for (auto& r : rows) rep.datasets.push_back(std::move(r));
    }

    // (d) reduction and generalization-time reduction, paired with Baseline.
    std::map<std::tuple<std::string, std::string, std::size_t>, double> base_time;
    for (const auto* r : ok)
        if (r->ps_method == PsMethod::Baseline)
            base_time[{r->dataset, std::string(to_string(r->ds_method)), r->replication}] = r->generalization_seconds;
    for (const auto& m : methods) {
        ReductionRow row;
        row.ps_method = m;
        std::vector<double> red, time_red, ps_secs;
        for (const auto* r : ok) {
            if (to_string(r->ps_method) != m) continue;
            red.push_back(r->reduction_rate);
            ps_secs.push_back(r->ps_seconds);
            auto it = base_time.find({r->dataset, std::string(to_string(r->ds_method)), r->replication});
            if (it != base_time.end() && it->second > 0.0)
                time_red.push_back(1.0 - r->generalization_seconds / it->second);
        }
        row.n = red.size();
        row.mean_reduction = mean_of(red);
        row.mean_time_reduction = mean_of(time_red);
        row.mean_ps_seconds = mean_of(ps_secs);
        rep.reduction.push_back(std::move(row));
    }
    return rep;
}

void write_summary(std::ostream& out, const Report& r) {
    out << std::fixed;
    out << "records: " << r.total_records << " (" << r.excluded_records << " failed cells excluded";
    for (const auto& [status, n] : r.excluded_by_status) out << "; " << status << ": " << n;
    out << ")\n";
    out << "alpha = " << std::setprecision(2) << r.alpha << ", z = " << std::setprecision(3) << r.z_alpha << "\n\n";

    out << "Win/tie/loss against Baseline\n";
    for (const auto& w : r.wtl) {
        out << "  " << std::left << std::setw(6) << w.ps_method << ' ' << std::setw(7) << w.ds_method << std::right
            << "  W " << w.wtl.wins << "  T " << w.wtl.ties << "  L " << w.wtl.losses << "  n = " << w.wtl.n_exp
            << "  n_c = " << std::setprecision(1) << w.n_c_reported << (w.significant ? "  significant" : "")
            << '\n';
    }

    out << "\nFriedman average ranks (" << r.ranks.friedman.n_blocks << " blocks";
    if (r.ranks.dropped_blocks) out << ", " << r.ranks.dropped_blocks << " incomplete blocks dropped";
    out << ")\n";
    std::vector<std::size_t> order(r.ranks.friedman.methods.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
        return r.ranks.friedman.average_ranks[a] < r.ranks.friedman.average_ranks[b];
    });
    const double best_rank = order.empty() ? 0.0 : r.ranks.friedman.average_ranks[order.front()];
    for (auto i : order) {
        const double rk = r.ranks.friedman.average_ranks[i];
        out << "  " << std::left << std::setw(9) << r.ranks.friedman.methods[i] << std::right
            << std::setprecision(3) << rk;
        if (r.ranks.cd && rk - best_rank > *r.ranks.cd) out << "  (worse than best beyond CD)";
        out << '\n';
    }
    if (r.ranks.cd)
        out << "  q = " << std::setprecision(3) << *r.ranks.q << ", CD = " << std::setprecision(4) << *r.ranks.cd
            << '\n';
    else
        out << "  CD unavailable for this method count / alpha\n";

    out << "\nPer-dataset accuracy (mean +- std over replications; * best, + significantly above Baseline)\n";
    for (const auto& d : r.datasets)
        out << "  " << std::left << std::setw(16) << d.dataset << ' ' << std::setw(9) << d.ps_method << std::right
            << std::setprecision(4) << d.mean << " +- " << d.std_dev << (d.best ? " *" : "")
            << (d.significant ? " +" : "") << '\n';

    out << "\nReduction (mean DSEL reduction, mean generalization-time reduction, mean PS seconds)\n";
    for (const auto& x : r.reduction)
        out << "  " << std::left << std::setw(9) << x.ps_method << std::right << std::setprecision(2)
            << 100.0 * x.mean_reduction << "%  " << 100.0 * x.mean_time_reduction << "%  "
            << std::setprecision(4) << x.mean_ps_seconds << "s\n";

    out << "\nBest-accuracy counts per dataset\n";
    for (const auto& [m, n] : r.best_counts) out << "  " << std::left << std::setw(9) << m << std::right << n << '\n';
}

void write_report(const Report& r, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(fs::path(dir) / name);
        if (!f) throw DataError("cannot write report file '" + (fs::path(dir) / name).string() + "'");
        f << std::setprecision(17);
        return f;
    };
    {
        auto f = open("wtl.csv");
        f << "ps_method,ds_method,wins,ties,losses,n_exp,n_c,n_c_reported,significant\n";
        for (const auto& w : r.wtl)
            f << w.ps_method << ',' << w.ds_method << ',' << w.wtl.wins << ',' << w.wtl.ties << ','
              << w.wtl.losses << ',' << w.wtl.n_exp << ',' << w.n_c << ',' << w.n_c_reported << ','
              << (w.significant ? 1 : 0) << '\n';
    }
    {
        auto f = open("ranks.csv");
        f << "ps_method,average_rank,n_blocks,q_alpha,cd\n";
        for (std::size_t i = 0; i < r.ranks.friedman.methods.size(); ++i) {
            f << r.ranks.friedman.methods[i] << ',' << r.ranks.friedman.average_ranks[i] << ','
              << r.ranks.friedman.n_blocks << ',';
            if (r.ranks.q) f << *r.ranks.q;
            f << ',';
            if (r.ranks.cd) f << *r.ranks.cd;
            f << '\n';
        }
    }
    {
        auto f = open("datasets.csv");
        f << "dataset,ps_method,mean,std,n,best,significant\n";
        for (const auto& d : r.datasets)
            f << d.dataset << ',' << d.ps_method << ',' << d.mean << ',' << d.std_dev << ',' << d.n << ','
              << (d.best ? 1 : 0) << ',' << (d.significant ? 1 : 0) << '\n';
    }
    {
        auto f = open("kruskal_wallis.csv");
        f << "dataset,best_method,h,critical,p_value,significant,better\n";
        for (const auto& t : r.dataset_tests)
            f << t.dataset << ',' << t.best_method << ',' << t.kw.h << ',' << t.kw.critical << ',' << t.kw.p_value
              << ',' << (t.kw.significant ? 1 : 0) << ',' << (t.better ? 1 : 0) << '\n';
    }
    {
        auto f = open("reduction.csv");
        f << "ps_method,mean_reduction,mean_time_reduction,mean_ps_seconds,n\n";
        for (const auto& x : r.reduction)
            f << x.ps_method << ',' << x.mean_reduction << ',' << x.mean_time_reduction << ',' << x.mean_ps_seconds
              << ',' << x.n << '\n';
    }
    {
        auto f = open("best_counts.csv");
        f << "ps_method,count\n";
        for (const auto& [m, n] : r.best_counts) f << m << ',' << n << '\n';
    }
    {
        auto f = open("summary.txt");
        write_summary(f, r);
    }
}

} // namespace dsedit
