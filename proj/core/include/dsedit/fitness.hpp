#pragma once

#include "dsedit/dataset.hpp"
#include "dsedit/mask.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace dsedit {

inline constexpr double kEmptyMaskFitness = -std::numeric_limits<double>::infinity();

/// Prototype-selection objective over a fixed base set:
///
///   fitness = alpha * accuracy + (1 - alpha) * reduction
///
/// `accuracy` is the leave-one-out kNN accuracy over every row of the base
/// set using only retained rows as references (a retained row never votes for
/// itself); `reduction` is 1 - retained / N. Empty masks score
/// kEmptyMaskFitness.
///
/// Construction precomputes, for each row, its nearest other rows in
/// (distance, index) order, truncated to `list_length`; rows whose truncated
/// list holds too few retained rows fall back to a brute-force scan, so
/// results never depend on the truncation.
class FitnessEvaluator {
public:
    explicit FitnessEvaluator(Dataset base, double alpha = 0.5, std::size_t knn_k = 1,
                              std::size_t list_length = 256);

    double fitness(const SelectionMask& mask) const;
    double operator()(const SelectionMask& mask) const { return fitness(mask); }

    /// Fraction of base rows classified correctly by the retained rows.
    double accuracy(const SelectionMask& mask) const;
    std::size_t correct_count(const SelectionMask& mask) const;
    double reduction(const SelectionMask& mask) const;

    /// alpha * correct / N + (1 - alpha) * (1 - retained / N).
    double combine(std::size_t correct, std::size_t retained) const;

    const Dataset& base_set() const noexcept { return base_; }
    std::size_t size() const noexcept { return base_.size(); }
    double alpha() const noexcept { return alpha_; }
    std::size_t knn_k() const noexcept { return k_; }

    /// Truncated neighbour list of row i (never contains i).
    std::span<const std::uint32_t> neighbours(std::size_t i) const {
        return {order_.data() + i * list_length_, list_length_};
    }
    std::size_t list_length() const noexcept { return list_length_; }

    /// Predicted label of row i from the retained rows, or -1 when no other
    /// row is retained.
    ClassId classify_row(std::size_t i, const SelectionMask& mask) const;

    /// Nearest retained row of i other than i and `skip`, or -1 when there is
    /// none. Used by incremental 1-NN updates.
    long nearest_retained(std::size_t i, const SelectionMask& mask, long skip = -1) const;

private:
    ClassId brute_force_classify(std::size_t i, const SelectionMask& mask) const;

    Dataset base_;
    double alpha_;
    std::size_t k_;
    std::size_t list_length_;
    std::vector<std::uint32_t> order_;
};

/// Incremental 1-NN bookkeeping for greedy removal moves: holds the current
/// mask and each row's nearest retained neighbour so the fitness after
/// removing one row is computed in O(N) without a full re-evaluation.
/// Requires an evaluator with knn_k == 1.
class RemovalState {
public:
    RemovalState(const FitnessEvaluator& eval, SelectionMask mask);

    const SelectionMask& mask() const noexcept { return mask_; }
    double fitness() const;
    std::size_t correct() const noexcept { return correct_; }

    /// Fitness after removing retained row j; the state is left unchanged.
    double fitness_without(std::size_t j) const;
    void remove(std::size_t j);

private:
    bool row_correct(std::size_t i, long nn) const;

    const FitnessEvaluator* eval_;
    SelectionMask mask_;
    std::vector<long> nearest_;
    std::size_t correct_ = 0;
};

} // namespace dsedit
