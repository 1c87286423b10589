#include "dsedit/dataset.hpp"

#include "dsedit/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace dsedit {

Dataset::Dataset(std::string name, std::size_t num_features, std::size_t num_classes,
                 std::vector<double> features, std::vector<ClassId> labels,
                 std::vector<std::string> class_names)
    : name_(std::move(name)),
      num_features_(num_features),
      num_classes_(num_classes),
      features_(std::move(features)),
      labels_(std::move(labels)),
      class_names_(std::move(class_names)) {
    validate();
}

Dataset Dataset::from_rows(std::string name, const std::vector<std::vector<double>>& rows,
                           const std::vector<ClassId>& labels, std::size_t num_classes) {
    if (rows.empty()) throw DataError("dataset '" + name + "' has no rows");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d)
            throw DataError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                            " features, expected " + std::to_string(d));
        flat.insert(flat.end(), rows[i].begin(), rows[i].end());
    }
    if (num_classes == 0 && !labels.empty())
        num_classes = static_cast<std::size_t>(*std::max_element(labels.begin(), labels.end())) + 1;
    return Dataset(std::move(name), d, num_classes, std::move(flat), labels);
}

void Dataset::validate() const {
    // An empty dataset is a legal intermediate value (e.g. an empty test
    // partition); shape checks still apply.
    if (num_features_ == 0 && !labels_.empty())
        throw DataError("dataset '" + name_ + "' has zero features");
    if (features_.size() != labels_.size() * num_features_)
        throw DataError("dataset '" + name_ + "': feature matrix has " +
                        std::to_string(features_.size()) + " values, expected " +
                        std::to_string(labels_.size() * num_features_));
    if (!labels_.empty() && num_classes_ == 0)
        throw DataError("dataset '" + name_ + "' declares zero classes");
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] < 0 || static_cast<std::size_t>(labels_[i]) >= num_classes_)
            throw DataError("dataset '" + name_ + "': label " + std::to_string(labels_[i]) +
                            " at row " + std::to_string(i) + " outside [0, " +
                            std::to_string(num_classes_) + ")");
    }
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (!std::isfinite(features_[i]))
            throw DataError("dataset '" + name_ + "': non-finite value at row " +
                            std::to_string(i / num_features_) + ", column " +
                            std::to_string(i % num_features_));
    }
    if (!class_names_.empty() && class_names_.size() != num_classes_)
        throw DataError("dataset '" + name_ + "': class name count does not match class count");
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> feats;
    feats.reserve(indices.size() * num_features_);
    std::vector<ClassId> labs;
    labs.reserve(indices.size());
    for (auto i : indices) {
        if (i >= size()) throw DataError("subset index " + std::to_string(i) + " out of range");
        auto r = row(i);
        feats.insert(feats.end(), r.begin(), r.end());
        labs.push_back(labels_[i]);
    }
    return Dataset(name_, num_features_, num_classes_, std::move(feats), std::move(labs),
                   class_names_);
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(num_classes_, 0);
    for (auto l : labels_) ++counts[static_cast<std::size_t>(l)];
    return counts;
}

Dataset Dataset::renamed(std::string name) const {
    Dataset copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

// ---------------------------------------------------------------------------
// Stratified holdout

namespace {

constexpr std::size_t kParts = 3;

// Largest-remainder apportionment of `total` into parts with the given
// fractions. Remainder ties go to the lower part index.
std::array<std::size_t, kParts> apportion(std::size_t total, const std::array<double, kParts>& frac) {
    std::array<std::size_t, kParts> out{};
    std::array<double, kParts> rem{};
    std::size_t assigned = 0;
    for (std::size_t p = 0; p < kParts; ++p) {
        const double q = frac[p] * static_cast<double>(total);
        out[p] = static_cast<std::size_t>(std::floor(q + 1e-9));
        rem[p] = q - static_cast<double>(out[p]);
        assigned += out[p];
    }
    std::array<std::size_t, kParts> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[order[k % kParts]];
    return out;
}

} // namespace

SplitIndices stratified_holdout_indices(const Dataset& data, const SplitSpec& spec) {
    const std::array<double, kParts> frac{spec.train_frac, spec.dsel_frac, spec.test_frac};
    for (double f : frac)
        if (!(f > 0.0)) throw DataError("split fractions must be positive");
    if (std::abs(frac[0] + frac[1] + frac[2] - 1.0) > 1e-9)
        throw DataError("split fractions must sum to 1");

    const auto counts = data.class_counts();
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0 && counts[c] < kParts) {
            const std::string cname =
                data.class_names().empty() ? std::to_string(c) : data.class_names()[c];
            throw DataError("class '" + cname + "' has " + std::to_string(counts[c]) +
                            " instance(s); stratified holdout needs at least 3");
        }
    }

    const std::size_t num_classes = counts.size();
    const auto targets = apportion(data.size(), frac);

    // Per-class floors, then hand out each class's leftover units to the
    // partitions still short of their global target, largest remainder first.
    std::vector<std::array<std::size_t, kParts>> quota(num_classes);
    std::vector<std::array<double, kParts>> rem(num_classes);
    std::array<long, kParts> deficit{};
    for (std::size_t p = 0; p < kParts; ++p) deficit[p] = static_cast<long>(targets[p]);
    for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t p = 0; p < kParts; ++p) {
            const double q = frac[p] * static_cast<double>(counts[c]);
            quota[c][p] = static_cast<std::size_t>(std::floor(q + 1e-9));
            rem[c][p] = std::max(0.0, q - static_cast<double>(quota[c][p]));
            deficit[p] -= static_cast<long>(quota[c][p]);
        }
    }
    for (std::size_t c = 0; c < num_classes; ++c) {
        std::size_t left = counts[c] - (quota[c][0] + quota[c][1] + quota[c][2]);
        std::array<bool, kParts> bumped{};
        while (left > 0) {
            int best = -1;
            for (int pass = 0; pass < 2 && best < 0; ++pass) {
                for (std::size_t p = 0; p < kParts; ++p) {
                    if (bumped[p]) continue;
                    if (pass == 0 && deficit[p] <= 0) continue;
                    if (best < 0 || rem[c][p] > rem[c][static_cast<std::size_t>(best)]) best = static_cast<int>(p);
                }
            }
            if (best < 0) best = 0; // every partition already bumped; cannot happen for 3 parts
            const auto b = static_cast<std::size_t>(best);
            ++quota[c][b];
            bumped[b] = true;
            --deficit[b];
            --left;
        }
        // Small classes: guarantee one row per partition.
        if (counts[c] >= kParts) {
            for (std::size_t p = 0; p < kParts; ++p) {
                if (quota[c][p] == 0) {
                    auto donor = static_cast<std::size_t>(
                        std::max_element(quota[c].begin(), quota[c].end()) - quota[c].begin());
                    --quota[c][donor];
                    ++quota[c][p];
                }
            }
        }
    }

    std::vector<std::vector<std::size_t>> by_class(num_classes);
    for (std::size_t i = 0; i < data.size(); ++i)
        by_class[static_cast<std::size_t>(data.label(i))].push_back(i);

    Rng rng(spec.seed);
    SplitIndices out;
    std::array<std::vector<std::size_t>*, kParts> parts{&out.train, &out.dsel, &out.test};
    for (std::size_t c = 0; c < num_classes; ++c) {
        auto& idx = by_class[c];
        shuffle(idx.begin(), idx.end(), rng);
        std::size_t pos = 0;
        for (std::size_t p = 0; p < kParts; ++p) {
            parts[p]->insert(parts[p]->end(), idx.begin() + static_cast<long>(pos),
                             idx.begin() + static_cast<long>(pos + quota[c][p]));
            pos += quota[c][p];
        }
    }
    for (auto* p : parts) shuffle(p->begin(), p->end(), rng);
    return out;
}

Split stratified_holdout(const Dataset& data, const SplitSpec& spec) {
    const auto idx = stratified_holdout_indices(data, spec);
    return {data.subset(idx.train).renamed(data.name() + ":train"),
            data.subset(idx.dsel).renamed(data.name() + ":dsel"),
            data.subset(idx.test).renamed(data.name() + ":test")};
}

// ---------------------------------------------------------------------------
// Scaler

Scaler Scaler::fit(const Dataset& train) {
    if (train.empty()) throw DataError("cannot fit a scaler on an empty dataset");
    const std::size_t d = train.num_features();
    const auto n = static_cast<double>(train.size());
    Scaler s;
    s.means.assign(d, 0.0);
    s.std_devs.assign(d, 0.0);
    for (std::size_t i = 0; i < train.size(); ++i) {
        auto r = train.row(i);
        for (std::size_t j = 0; j < d; ++j) s.means[j] += r[j];
    }
    for (auto& m : s.means) m /= n;
    for (std::size_t i = 0; i < train.size(); ++i) {
        auto r = train.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            const double dv = r[j] - s.means[j];
            s.std_devs[j] += dv * dv;
        }
    }
    for (auto& sd : s.std_devs) {
        sd = std::sqrt(sd / n);
        if (!(sd > 1e-12)) sd = 1.0;
    }
    return s;
}

void Scaler::transform_row(std::span<const double> in, std::span<double> out) const {
    if (in.size() != means.size() || out.size() != means.size())
        throw DataError("scaler dimension mismatch");
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - means[j]) / std_devs[j];
}

Dataset Scaler::transform(const Dataset& data) const {
    if (data.num_features() != means.size())
        throw DataError("scaler fitted on " + std::to_string(means.size()) +
                        " features, dataset has " + std::to_string(data.num_features()));
    std::vector<double> feats(data.features().size());
    const std::size_t d = data.num_features();
    for (std::size_t i = 0; i < data.size(); ++i)
        transform_row(data.row(i), std::span<double>(feats.data() + i * d, d));
    return Dataset(data.name(), d, data.num_classes(), std::move(feats), data.labels(),
                   data.class_names());
}

// ---------------------------------------------------------------------------
// Delimited text I/O

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(delim, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_number(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

Dataset read_dataset(std::istream& in, std::string name) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (trim(line).empty()) continue;
        lines.push_back(std::move(line));
    }
    if (lines.empty()) throw DataError("dataset '" + name + "' is empty");

    const char delim = lines.front().find(';') != std::string::npos ? ';' : ',';

    std::size_t first = 0;
    {
        auto f = split_fields(lines.front(), delim);
        bool numeric = f.size() >= 2;
        double tmp = 0;
        for (std::size_t j = 0; j + 1 < f.size() && numeric; ++j) numeric = parse_number(f[j], tmp);
        if (!numeric) first = 1;
    }
    if (first >= lines.size()) throw DataError("dataset '" + name + "' has a header but no rows");

    std::vector<double> feats;
    std::vector<ClassId> labels;
    std::vector<std::string> class_names;
    std::unordered_map<std::string, ClassId> class_ids;
    std::size_t d = 0;

    for (std::size_t li = first; li < lines.size(); ++li) {
        const auto fields = split_fields(lines[li], delim);
        const std::size_t row_no = li + 1; // 1-based file line
        if (fields.size() < 2)
            throw DataError(name + ": line " + std::to_string(row_no) +
                            " needs at least one feature and a label");
        if (d == 0) d = fields.size() - 1;
        if (fields.size() - 1 != d)
            throw DataError(name + ": line " + std::to_string(row_no) + " has " +
                            std::to_string(fields.size()) + " columns, expected " +
                            std::to_string(d + 1));
        for (std::size_t j = 0; j < d; ++j) {
            double v = 0;
            if (fields[j].empty() || fields[j] == "?" || !parse_number(fields[j], v))
                throw DataError(name + ": missing or non-numeric value at line " +
                                std::to_string(row_no) + ", column " + std::to_string(j + 1) +
                                " ('" + std::string(fields[j]) + "')");
            feats.push_back(v);
        }
        const std::string lab(fields[d]);
        if (lab.empty() || lab == "?")
            throw DataError(name + ": missing label at line " + std::to_string(row_no) +
                            ", column " + std::to_string(d + 1));
        auto [it, inserted] = class_ids.try_emplace(lab, static_cast<ClassId>(class_names.size()));
        if (inserted) class_names.push_back(lab);
        labels.push_back(it->second);
    }
    const std::size_t k = class_names.size();
    return Dataset(std::move(name), d, k, std::move(feats), std::move(labels), std::move(class_names));
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file '" + path + "'");
    auto stem = path;
    if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
    if (auto dot = stem.find_last_of('.'); dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    return read_dataset(in, stem);
}

void write_dataset(std::ostream& out, const Dataset& data, char delimiter) {
    const std::size_t d = data.num_features();
    for (std::size_t j = 0; j < d; ++j) out << 'x' << j << delimiter;
    out << "class\n";
    std::array<char, 64> buf{};
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r[j]);
            out.write(buf.data(), res.ptr - buf.data());
            out << delimiter;
        }
        const auto l = static_cast<std::size_t>(data.label(i));
        if (data.class_names().empty())
            out << l;
        else
            out << data.class_names()[l];
        out << '\n';
    }
}

void save_dataset(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write dataset file '" + path + "'");
    write_dataset(out, data);
}

} // namespace dsedit
