#pragma once

#include "dsedit/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace dsedit {

/// Linear multi-class model: one weight row (d weights + bias) per class,
/// predicting the argmax score. Score ties go to the lower class id.
class LinearClassifier {
public:
    LinearClassifier() = default;
    LinearClassifier(std::size_t num_classes, std::size_t num_features);
    LinearClassifier(std::size_t num_classes, std::size_t num_features, std::vector<double> weights);

    std::size_t num_classes() const noexcept { return num_classes_; }
    std::size_t num_features() const noexcept { return num_features_; }

    /// Row-major num_classes x (num_features + 1); the last column is the bias.
    const std::vector<double>& weights() const noexcept { return weights_; }
    std::span<double> class_row(std::size_t c) {
        return {weights_.data() + c * (num_features_ + 1), num_features_ + 1};
    }
    std::span<const double> class_row(std::size_t c) const {
        return {weights_.data() + c * (num_features_ + 1), num_features_ + 1};
    }

    double score(std::span<const double> x, std::size_t c) const;
    void scores(std::span<const double> x, std::span<double> out) const;
    ClassId predict(std::span<const double> x) const;

    friend bool operator==(const LinearClassifier&, const LinearClassifier&) = default;

private:
    std::size_t num_classes_ = 0;
    std::size_t num_features_ = 0;
    std::vector<double> weights_;
};

struct PerceptronParams {
    std::size_t epochs = 100;
    double learning_rate = 0.01;
};

/// One-vs-all online Perceptron: every class row gets the error-driven update
/// w += lr * t * [x, 1] whenever t * score <= 0 (t = +1 for the row of the
/// true class, -1 otherwise). Rows are visited in a freshly shuffled order
/// each epoch.
LinearClassifier train_perceptron(const Dataset& train, const PerceptronParams& params,
                                  std::uint64_t seed);

/// N draws with replacement from [0, n).
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed);

/// Softmax of raw class scores, in place.
void normalize_scores(std::span<double> scores);

/// Bagged pool of linear classifiers and the precomputed outputs for the
/// current dynamic-selection set (DSEL or an edited DSEL').
struct ClassifierPool {
    std::vector<LinearClassifier> members;
    std::vector<std::uint64_t> bag_seeds;
    std::size_t num_classes = 0;
    std::size_t num_features = 0;

    // Cache over the current selection set; empty until build_cache.
    std::size_t cache_rows = 0;
    std::vector<ClassId> cache;        ///< M x N predicted class ids
    std::vector<double> score_cache;   ///< M x N x classes normalised supports
    std::vector<ClassId> cache_labels; ///< true labels of the cached rows

    std::size_t size() const noexcept { return members.size(); }
    bool has_cache() const noexcept { return cache_rows > 0; }

    ClassId cached_prediction(std::size_t member, std::size_t row) const {
        return cache[member * cache_rows + row];
    }
    bool cached_correct(std::size_t member, std::size_t row) const {
        return cache[member * cache_rows + row] == cache_labels[row];
    }
    double cached_support(std::size_t member, std::size_t row, std::size_t cls) const {
        return score_cache[(member * cache_rows + row) * num_classes + cls];
    }

    /// Every member's prediction for one query.
    std::vector<ClassId> predict_all(std::span<const double> x) const;

    friend bool operator==(const ClassifierPool&, const ClassifierPool&) = default;
};

/// Member i is trained on bootstrap_indices(N, bag_seeds[i]) with
/// train_perceptron(..., bag_seeds[i]); bag seeds derive from `seed`.
ClassifierPool bagging_pool(const Dataset& train, std::size_t pool_size, std::uint64_t seed,
                            const PerceptronParams& params = {}, unsigned jobs = 1);

/// Copy of the pool with its cache rebuilt over `dsel`.
ClassifierPool build_cache(ClassifierPool pool, const Dataset& dsel);

// Versioned text dump; doubles are written in shortest round-trip form so a
// load reproduces the pool exactly.
void write_pool(std::ostream& out, const ClassifierPool& pool);
ClassifierPool read_pool(std::istream& in);

} // namespace dsedit
