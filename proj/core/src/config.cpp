#include "dsedit/harness.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <set>

namespace dsedit {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = v.find(',', start);
        auto item = trim(std::string_view(v).substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (!item.empty()) out.push_back(item);
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

class LineError {
public:
    explicit LineError(std::size_t line) : line_(line) {}
    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError("config line " + std::to_string(line_) + ": " + msg);
    }

private:
    std::size_t line_;
};

template <class T>
T to_unsigned(const std::string& v, const LineError& where) {
    T out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) where.fail("expected a non-negative integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& v, const LineError& where) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size()) where.fail("expected a number, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& v, const LineError& where) {
    const auto l = lower(v);
    if (l == "1" || l == "true" || l == "yes" || l == "on") return true;
    if (l == "0" || l == "false" || l == "no" || l == "off") return false;
    where.fail("expected a boolean, got '" + v + "'");
}

void set_ga(GaConfig& ga, const std::string& key, const std::string& v, const LineError& where) {
    if (key == "population_size") ga.population_size = to_unsigned<std::size_t>(v, where);
    else if (key == "max_evaluations") ga.max_evaluations = to_unsigned<std::size_t>(v, where);
    else if (key == "crossover_rate") ga.crossover_rate = to_double(v, where);
    else if (key == "mutation_1to0") ga.mutation_1to0 = to_double(v, where);
    else if (key == "mutation_0to1") ga.mutation_0to1 = to_double(v, where);
    else if (key == "restart_change") ga.restart_change = to_double(v, where);
    else where.fail("unknown search parameter '" + key + "'");
}

void set_method(PsParams& ps, PsMethod m, const std::string& key, const std::string& v,
                const LineError& where) {
    if (key == "alpha") {
        ps.alpha = to_double(v, where);
        return;
    }
    switch (m) {
    case PsMethod::ENN:
        if (key == "k") ps.enn_k = to_unsigned<std::size_t>(v, where);
        else where.fail("unknown ENN parameter '" + key + "'");
        break;
    case PsMethod::RMHC:
        if (key == "iterations") ps.rmhc_iterations = to_unsigned<std::size_t>(v, where);
        else if (key == "init_frac") ps.rmhc_init_frac = to_double(v, where);
        else if (key == "k") ps.fitness_k = to_unsigned<std::size_t>(v, where);
        else where.fail("unknown RMHC parameter '" + key + "'");
        break;
    case PsMethod::SSMA: set_ga(ps.ssma, key, v, where); break;
    case PsMethod::GGA: set_ga(ps.gga, key, v, where); break;
    case PsMethod::CHC: set_ga(ps.chc, key, v, where); break;
    case PsMethod::RNG:
    case PsMethod::Baseline: where.fail("method takes no parameters");
    }
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& base_dir) {
    ExperimentConfig cfg;
    enum class Section { None, Experiment, Dataset, Method, Perceptron, Ds } section = Section::None;
    PsMethod method = PsMethod::Baseline;
    std::size_t line_no = 0;
    std::set<std::string> dataset_names;

    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        const LineError where(line_no);
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const auto line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') where.fail("unterminated section header");
            const auto body = trim(std::string_view(line).substr(1, line.size() - 2));
            const auto space = body.find(' ');
            const auto head = lower(body.substr(0, space));
            const auto arg = space == std::string::npos ? std::string() : trim(std::string_view(body).substr(space));
            if (head == "experiment") {
                section = Section::Experiment;
            } else if (head == "dataset") {
                if (arg.empty()) where.fail("dataset section needs a name");
                if (!dataset_names.insert(arg).second) where.fail("duplicate dataset '" + arg + "'");
                section = Section::Dataset;
                cfg.datasets.push_back({arg, std::nullopt, std::nullopt});
            } else if (head == "method") {
                try {
                    method = parse_ps_method(arg);
                } catch (const DataError& e) {
                    where.fail(e.what());
                }
                section = Section::Method;
            } else if (head == "perceptron") {
                section = Section::Perceptron;
            } else if (head == "ds") {
                section = Section::Ds;
            } else {
                where.fail("unknown section '" + head + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) where.fail("expected key = value");
        const auto key = lower(trim(std::string_view(line).substr(0, eq)));
        const auto value = trim(std::string_view(line).substr(eq + 1));

        switch (section) {
        case Section::None: where.fail("key outside of any section");
        case Section::Experiment:
            if (key == "replications") cfg.replications = to_unsigned<std::size_t>(value, where);
            else if (key == "pool_size") cfg.pool_size = to_unsigned<std::size_t>(value, where);
            else if (key == "k") cfg.k = to_unsigned<std::size_t>(value, where);
            else if (key == "seed" || key == "master_seed") cfg.master_seed = to_unsigned<std::uint64_t>(value, where);
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "jobs") cfg.jobs = to_unsigned<unsigned>(value, where);
            else if (key == "timing_repeats") cfg.timing_repeats = to_unsigned<std::size_t>(value, where);
            else if (key == "measure_time") cfg.measure_time = to_bool(value, where);
            else if (key == "train_frac") cfg.split.train_frac = to_double(value, where);
            else if (key == "dsel_frac") cfg.split.dsel_frac = to_double(value, where);
            else if (key == "test_frac") cfg.split.test_frac = to_double(value, where);
            else if (key == "ps_methods") {
                cfg.ps_methods.clear();
                try {
                    for (const auto& m : split_list(value)) cfg.ps_methods.push_back(parse_ps_method(m));
                } catch (const DataError& e) {
                    where.fail(e.what());
                }
            } else if (key == "ds_methods") {
                cfg.ds_methods.clear();
                try {
                    for (const auto& m : split_list(value)) cfg.ds_methods.push_back(parse_ds_method(m));
                } catch (const DataError& e) {
                    where.fail(e.what());
                }
            } else {
                where.fail("unknown experiment key '" + key + "'");
            }
            break;
        case Section::Dataset: {
            auto& ds = cfg.datasets.back();
            if (key == "path") {
                std::filesystem::path p(value);
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                ds.path = p.lexically_normal().string();
            } else if (key == "synth" || key == "kind") {
                if (!ds.synth) ds.synth = SynthSpec{};
                try {
                    ds.synth->kind = parse_synth_kind(value);
                } catch (const DataError& e) {
                    where.fail(e.what());
                }
            } else if (key == "n" || key == "noise" || key == "seed") {
                if (!ds.synth) ds.synth = SynthSpec{};
                if (key == "n") ds.synth->n = to_unsigned<std::size_t>(value, where);
                else if (key == "noise") ds.synth->noise = to_double(value, where);
                else ds.synth->seed = to_unsigned<std::uint64_t>(value, where);
            } else {
                where.fail("unknown dataset key '" + key + "'");
            }
            break;
        }
        case Section::Method: set_method(cfg.ps, method, key, value, where); break;
        case Section::Perceptron:
            if (key == "epochs") cfg.perceptron.epochs = to_unsigned<std::size_t>(value, where);
            else if (key == "learning_rate") cfg.perceptron.learning_rate = to_double(value, where);
            else where.fail("unknown perceptron key '" + key + "'");
            break;
        case Section::Ds:
            if (key == "mcb_similarity") cfg.ds.mcb_similarity = to_double(value, where);
            else where.fail("unknown ds key '" + key + "'");
            break;
        }
    }
    for (const auto& ds : cfg.datasets)
        if (ds.path.has_value() == ds.synth.has_value())
            throw DataError("dataset '" + ds.name + "' needs exactly one of path or synth");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    auto dir = std::filesystem::path(path).parent_path().string();
    if (dir.empty()) dir = ".";
    return parse_config(in, dir);
}

std::vector<PsMethod> ExperimentConfig::ps_methods_with_baseline() const {
    std::vector<PsMethod> out{PsMethod::Baseline};
    for (auto m : ps_methods)
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    return out;
}

void ExperimentConfig::validate() const {
    if (datasets.empty()) throw DataError("experiment has no datasets");
    if (replications == 0) throw DataError("replications must be >= 1");
    if (pool_size == 0) throw DataError("pool_size must be >= 1");
    if (k == 0) throw DataError("K must be >= 1");
    if (ds_methods.empty()) throw DataError("experiment has no DS methods");
    if (timing_repeats == 0) throw DataError("timing_repeats must be >= 1");
    ps.ssma.validate();
    ps.gga.validate();
    ps.chc.validate();
}

} // namespace dsedit
