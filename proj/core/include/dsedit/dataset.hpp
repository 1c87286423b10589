#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsedit {

using ClassId = int;

/// Raised for malformed datasets, bad splits, and load failures.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense labelled dataset: an N x d row-major feature matrix plus class ids
/// in [0, num_classes).
class Dataset {
public:
    Dataset() = default;

    /// Validates on construction; throws DataError on any broken invariant.
    Dataset(std::string name, std::size_t num_features, std::size_t num_classes,
            std::vector<double> features, std::vector<ClassId> labels,
            std::vector<std::string> class_names = {});

    /// Builds from a list of rows. num_classes of 0 means max(label) + 1.
    static Dataset from_rows(std::string name,
                             const std::vector<std::vector<double>>& rows,
                             const std::vector<ClassId>& labels,
                             std::size_t num_classes = 0);

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    std::size_t num_features() const noexcept { return num_features_; }
    std::size_t num_classes() const noexcept { return num_classes_; }
    const std::string& name() const noexcept { return name_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * num_features_, num_features_};
    }
    ClassId label(std::size_t i) const { return labels_[i]; }

    const std::vector<double>& features() const noexcept { return features_; }
    const std::vector<ClassId>& labels() const noexcept { return labels_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    /// Rows in the given order; class metadata is kept so ids stay comparable.
    Dataset subset(std::span<const std::size_t> indices) const;

    std::vector<std::size_t> class_counts() const;

    Dataset renamed(std::string name) const;

private:
    void validate() const;

    std::string name_;
    std::size_t num_features_ = 0;
    std::size_t num_classes_ = 0;
    std::vector<double> features_;
    std::vector<ClassId> labels_;
    std::vector<std::string> class_names_;
};

struct SplitSpec {
    double train_frac = 0.50;
    double dsel_frac = 0.25;
    double test_frac = 0.25;
    std::uint64_t seed = 0;
};

struct Split {
    Dataset train;
    Dataset dsel;
    Dataset test;
};

/// Stratified three-way holdout. Per-class counts follow largest-remainder
/// apportionment, balanced across classes so partition totals also match
/// their global targets. Every class must have at least 3 rows.
Split stratified_holdout(const Dataset& data, const SplitSpec& spec);

/// Row indices per partition, in the order the rows are emitted.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> dsel;
    std::vector<std::size_t> test;
};
SplitIndices stratified_holdout_indices(const Dataset& data, const SplitSpec& spec);

/// z-score standardisation fitted on one dataset and applied to others.
/// Zero-variance dimensions use a divisor of 1.
struct Scaler {
    std::vector<double> means;
    std::vector<double> std_devs;

    static Scaler fit(const Dataset& train);
    Dataset transform(const Dataset& data) const;
    void transform_row(std::span<const double> in, std::span<double> out) const;
};

// Delimited-text I/O. The delimiter (',' or ';') is sniffed from the first
// line; a header is detected when the feature fields of the first line do
// not parse as numbers. The last column is the label.
Dataset read_dataset(std::istream& in, std::string name);
Dataset load_dataset(const std::string& path);
void write_dataset(std::ostream& out, const Dataset& data, char delimiter = ',');
void save_dataset(const std::string& path, const Dataset& data);

} // namespace dsedit
