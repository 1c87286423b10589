#include "dsedit/harness.hpp"

#include "dsedit/fitness.hpp"
#include "dsedit/parallel.hpp"
#include "dsedit/random.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

namespace dsedit {

std::string_view to_string(PsMethod m) {
    switch (m) {
    case PsMethod::Baseline: return "Baseline";
    case PsMethod::ENN: return "ENN";
    case PsMethod::RNG: return "RNG";
    case PsMethod::RMHC: return "RMHC";
    case PsMethod::SSMA: return "SSMA";
    case PsMethod::GGA: return "GGA";
    case PsMethod::CHC: return "CHC";
    }
    return "?";
}

PsMethod parse_ps_method(std::string_view name) {
    std::string key;
    for (char c : name) key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (auto m : kAllPsMethods) {
        std::string cand(to_string(m));
        for (auto& c : cand) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (cand == key) return m;
    }
    throw DataError("unknown PS method '" + std::string(name) + "'");
}

std::string_view to_string(CellStatus s) {
    switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::PsGuard: return "ps_guard";
    case CellStatus::RegionTooLarge: return "region_too_large";
    case CellStatus::LoadError: return "load_error";
    case CellStatus::Failed: return "failed";
    }
    return "?";
}

CellStatus parse_cell_status(std::string_view s) {
    for (auto st : {CellStatus::Ok, CellStatus::PsGuard, CellStatus::RegionTooLarge,
                    CellStatus::LoadError, CellStatus::Failed})
        if (to_string(st) == s) return st;
    throw DataError("unknown cell status '" + std::string(s) + "'");
}

std::uint64_t stable_hash(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

PsOutcome apply_ps(PsMethod method, const Dataset& dsel, const PsParams& params,
                   std::uint64_t seed, unsigned jobs) {
    PsOutcome out;
    auto from_search = [&](SearchResult r) {
        out.mask = std::move(r.mask);
        out.evaluations = r.evaluations;
        out.fitness = r.fitness;
        out.trace = std::move(r.trace);
    };
    switch (method) {
    case PsMethod::Baseline: out.mask = SelectionMask::full(dsel.size()); break;
    case PsMethod::ENN: out.mask = enn_edit(dsel, params.enn_k, jobs); break;
    case PsMethod::RNG: out.mask = rng_edit(dsel, jobs); break;
    case PsMethod::RMHC: {
        const FitnessEvaluator eval(dsel, params.alpha, params.fitness_k);
        RmhcConfig cfg;
        cfg.iterations = params.rmhc_iterations;
        cfg.init_frac = params.rmhc_init_frac;
        cfg.seed = seed;
        from_search(rmhc_edit(eval, cfg));
        break;
    }
    case PsMethod::SSMA:
    case PsMethod::GGA:
    case PsMethod::CHC: {
        const FitnessEvaluator eval(dsel, params.alpha, params.fitness_k);
        GaConfig cfg = method == PsMethod::SSMA ? params.ssma
                       : method == PsMethod::GGA ? params.gga
                                                 : params.chc;
        cfg.seed = seed;
        if (method == PsMethod::SSMA) from_search(ssma_edit(eval, cfg));
        else if (method == PsMethod::GGA) from_search(gga_edit(eval, cfg));
        else from_search(chc_edit(eval, cfg));
        break;
    }
    }
    return out;
}

Dataset DatasetSource::load() const {
    if (path) return load_dataset(*path).renamed(name);
    if (synth) return generate(*synth).renamed(name);
    throw DataError("dataset '" + name + "' has neither a path nor a generator");
}

std::chrono::duration<double> measure_generalization_time(const ClassifierPool& pool,
                                                          const Dataset& dsel_prime,
                                                          const Dataset& test, DsMethod method,
                                                          std::size_t k, std::size_t repeats,
                                                          const DsParams& params) {
    using clock = std::chrono::steady_clock;
    if (repeats == 0) repeats = 1;
    volatile std::size_t sink = 0;
    auto pass = [&] {
        for (std::size_t i = 0; i < test.size(); ++i)
            sink = sink + static_cast<std::size_t>(ds_predict(method, pool, dsel_prime, test.row(i), k, params));
    };
    pass();
    std::vector<double> times;
    times.reserve(repeats);
    for (std::size_t r = 0; r < repeats; ++r) {
        const auto t0 = clock::now();
        pass();
        times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t mid = times.size() / 2;
    const double median = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
    return std::chrono::duration<double>(median);
}

namespace {

using clock = std::chrono::steady_clock;

double seconds_since(clock::time_point t0) {
    return std::chrono::duration<double>(clock::now() - t0).count();
}

void fill_failed(std::vector<RunRecord>& out, const ExperimentConfig& cfg, const std::string& dataset,
                 std::size_t rep, PsMethod ps, CellStatus status, std::size_t before, std::size_t after) {
    for (auto ds : cfg.ds_methods) {
        RunRecord r;
        r.dataset = dataset;
        r.ps_method = ps;
        r.ds_method = ds;
        r.replication = rep;
        r.status = status;
        r.dsel_before = before;
        r.dsel_after = after;
        r.reduction_rate = before ? 1.0 - static_cast<double>(after) / static_cast<double>(before) : 0.0;
        out.push_back(std::move(r));
    }
}

std::vector<RunRecord> run_cell(const ExperimentConfig& cfg, const std::string& name, const Dataset& data,
                                std::size_t rep) {
    std::vector<RunRecord> out;
    const auto methods = cfg.ps_methods_with_baseline();
    const std::uint64_t cell_seed = derive_seed(cfg.master_seed, {stable_hash(name), rep});

    Split split;
    ClassifierPool pool;
    try {
        SplitSpec spec = cfg.split;
        spec.seed = derive_seed(cell_seed, {1});
        const auto raw = stratified_holdout(data, spec);
        const auto scaler = Scaler::fit(raw.train);
        split = {scaler.transform(raw.train), scaler.transform(raw.dsel), scaler.transform(raw.test)};
        pool = bagging_pool(split.train, cfg.pool_size, derive_seed(cell_seed, {2}), cfg.perceptron);
    } catch (const std::exception&) {
        for (auto ps : methods) fill_failed(out, cfg, name, rep, ps, CellStatus::Failed, 0, 0);
        return out;
    }

    const std::size_t before = split.dsel.size();
    for (auto ps : methods) {
        const auto ps_seed = derive_seed(cell_seed, {3, static_cast<std::uint64_t>(ps)});
        SelectionMask mask;
        double ps_seconds = 0.0;
        try {
            const auto t0 = clock::now();
            mask = apply_ps(ps, split.dsel, cfg.ps, ps_seed).mask;
            ps_seconds = seconds_since(t0);
        } catch (const DataError&) {
            fill_failed(out, cfg, name, rep, ps, CellStatus::PsGuard, before, 0);
            continue;
        } catch (const std::exception&) {
            fill_failed(out, cfg, name, rep, ps, CellStatus::Failed, before, 0);
            continue;
        }
        const std::size_t after = mask.retained_count();
        if (after == 0) {
            fill_failed(out, cfg, name, rep, ps, CellStatus::PsGuard, before, 0);
            continue;
        }
        if (after < cfg.k) {
            fill_failed(out, cfg, name, rep, ps, CellStatus::RegionTooLarge, before, after);
            continue;
        }

        const Dataset dsel_prime = mask.apply(split.dsel);
        const ClassifierPool cached = build_cache(pool, dsel_prime);
        for (auto ds : cfg.ds_methods) {
            RunRecord r;
            r.dataset = name;
            r.ps_method = ps;
            r.ds_method = ds;
            r.replication = rep;
            r.dsel_before = before;
            r.dsel_after = after;
            r.reduction_rate = mask.reduction_rate();
            r.ps_seconds = ps_seconds;
            try {
                const auto pred = ds_predict_all(ds, cached, dsel_prime, split.test, cfg.k, cfg.ds);
                r.accuracy = accuracy(pred, split.test.labels());
                if (cfg.measure_time)
                    r.generalization_seconds = measure_generalization_time(cached, dsel_prime, split.test, ds, cfg.k,
                                                                           cfg.timing_repeats, cfg.ds)
                                                   .count();
            } catch (const std::exception&) {
                r.status = CellStatus::Failed;
                r.accuracy = 0.0;
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
    cfg.validate();
    const std::size_t n_data = cfg.datasets.size();
    std::vector<std::optional<Dataset>> loaded(n_data);
    for (std::size_t d = 0; d < n_data; ++d) {
        try {
            loaded[d] = cfg.datasets[d].load();
        } catch (const std::exception&) {
            loaded[d].reset();
        }
    }

    const std::size_t n_cells = n_data * cfg.replications;
    std::vector<std::vector<RunRecord>> cells(n_cells);
    std::mutex progress_mutex;
    parallel_for(n_cells, cfg.jobs, [&](std::size_t c) {
        const std::size_t d = c / cfg.replications;
        const std::size_t rep = c % cfg.replications;
        const auto& name = cfg.datasets[d].name;
        if (!loaded[d]) {
            for (auto ps : cfg.ps_methods_with_baseline())
                fill_failed(cells[c], cfg, name, rep, ps, CellStatus::LoadError, 0, 0);
        } else {
            cells[c] = run_cell(cfg, name, *loaded[d], rep);
        }
        if (progress) {
            std::lock_guard lock(progress_mutex);
            progress(name, rep);
        }
    });

    std::vector<RunRecord> out;
    for (auto& cell : cells)
        for (auto& r : cell) out.push_back(std::move(r));
    return out;
}

// ---------------------------------------------------------------------------
// Records CSV

namespace {

constexpr std::string_view kRecordsHeader =
    "dataset,ps_method,ds_method,replication,status,accuracy,reduction_rate,ps_seconds,"
    "generalization_seconds,dsel_before,dsel_after";

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

template <class T>
T parse_number(std::string_view s, std::size_t line, const char* what) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw DataError("records line " + std::to_string(line) + ": bad " + what + " '" + std::string(s) + "'");
    return v;
}

} // namespace

void write_records(std::ostream& out, const std::vector<RunRecord>& records) {
    out << kRecordsMagic << '\n' << kRecordsHeader << '\n';
    for (const auto& r : records) {
        if (r.dataset.find_first_of(",\n\r") != std::string::npos)
            throw DataError("dataset name '" + r.dataset + "' cannot be written to records CSV");
        out << r.dataset << ',' << to_string(r.ps_method) << ',' << to_string(r.ds_method) << ','
            << r.replication << ',' << to_string(r.status) << ',' << format_double(r.accuracy) << ','
            << format_double(r.reduction_rate) << ',' << format_double(r.ps_seconds) << ','
            << format_double(r.generalization_seconds) << ',' << r.dsel_before << ',' << r.dsel_after << '\n';
    }
}

std::vector<RunRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsMagic)
        throw DataError("not a records file (missing '" + std::string(kRecordsMagic) + "' line)");
    if (!std::getline(in, line) || line != kRecordsHeader) throw DataError("records file has an unexpected header");
    std::vector<RunRecord> out;
    for (std::size_t line_no = 3; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> f;
        std::string_view rest(line);
        for (;;) {
            const auto pos = rest.find(',');
            f.push_back(rest.substr(0, pos));
            if (pos == std::string_view::npos) break;
            rest.remove_prefix(pos + 1);
        }
        if (f.size() != 11)
            throw DataError("records line " + std::to_string(line_no) + ": expected 11 fields, got " +
                            std::to_string(f.size()));
        RunRecord r;
        r.dataset = std::string(f[0]);
        r.ps_method = parse_ps_method(f[1]);
        r.ds_method = parse_ds_method(f[2]);
        r.replication = parse_number<std::size_t>(f[3], line_no, "replication");
        r.status = parse_cell_status(f[4]);
        r.accuracy = parse_number<double>(f[5], line_no, "accuracy");
        r.reduction_rate = parse_number<double>(f[6], line_no, "reduction rate");
        r.ps_seconds = parse_number<double>(f[7], line_no, "PS time");
        r.generalization_seconds = parse_number<double>(f[8], line_no, "generalization time");
        r.dsel_before = parse_number<std::size_t>(f[9], line_no, "DSEL size");
        r.dsel_after = parse_number<std::size_t>(f[10], line_no, "DSEL' size");
        out.push_back(std::move(r));
    }
    return out;
}

void save_records(const std::string& path, const std::vector<RunRecord>& records) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write records file '" + path + "'");
    write_records(out, records);
    if (!out) throw DataError("error while writing '" + path + "'");
}

std::vector<RunRecord> load_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open records file '" + path + "'");
    return read_records(in);
}

} // namespace dsedit
