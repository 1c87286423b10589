#include "dsedit/fitness.hpp"

#include "dsedit/knn.hpp"

#include <algorithm>
#include <utility>

namespace dsedit {

FitnessEvaluator::FitnessEvaluator(Dataset base, double alpha, std::size_t knn_k,
                                   std::size_t list_length)
    : base_(std::move(base)), alpha_(alpha), k_(knn_k) {
    if (!(alpha_ >= 0.0 && alpha_ <= 1.0)) throw DataError("fitness alpha must lie in [0, 1]");
    if (k_ == 0) throw DataError("fitness kNN needs k >= 1");
    if (base_.empty()) throw DataError("fitness evaluator needs a non-empty base set");

    const std::size_t n = base_.size();
    list_length_ = std::min(std::max<std::size_t>(list_length, 1), n - 1);
    order_.assign(n * list_length_, 0);
    if (list_length_ == 0) return;

    std::vector<std::pair<double, std::uint32_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        cand.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(euclidean(base_.row(i), base_.row(j)), static_cast<std::uint32_t>(j));
        auto mid = cand.begin() + static_cast<long>(list_length_);
        std::partial_sort(cand.begin(), mid, cand.end());
        for (std::size_t p = 0; p < list_length_; ++p) order_[i * list_length_ + p] = cand[p].second;
    }
}

double FitnessEvaluator::combine(std::size_t correct, std::size_t retained) const {
    const auto n = static_cast<double>(base_.size());
    return alpha_ * (static_cast<double>(correct) / n) +
           (1.0 - alpha_) * (1.0 - static_cast<double>(retained) / n);
}

double FitnessEvaluator::reduction(const SelectionMask& mask) const {
    if (mask.size() != base_.size()) throw DataError("mask length does not match the base set");
    return mask.reduction_rate();
}

long FitnessEvaluator::nearest_retained(std::size_t i, const SelectionMask& mask, long skip) const {
    for (auto j : neighbours(i))
        if (mask.test(j) && static_cast<long>(j) != skip) return static_cast<long>(j);

    // Truncated list exhausted: scan everything.
    long best = -1;
    double best_d = 0.0;
    for (std::size_t j = 0; j < base_.size(); ++j) {
        if (j == i || !mask.test(j) || static_cast<long>(j) == skip) continue;
        const double d = euclidean(base_.row(i), base_.row(j));
        if (best < 0 || d < best_d) {
            best = static_cast<long>(j);
            best_d = d;
        }
    }
    return best;
}

ClassId FitnessEvaluator::brute_force_classify(std::size_t i, const SelectionMask& mask) const {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < base_.size(); ++j)
        if (j != i && mask.test(j)) cand.emplace_back(euclidean(base_.row(i), base_.row(j)), j);
    if (cand.empty()) return -1;
    const std::size_t k = std::min(k_, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(k), cand.end());
    std::vector<ClassId> labels;
    for (std::size_t p = 0; p < k; ++p) labels.push_back(base_.label(cand[p].second));
    return vote_nearest_tiebreak(labels, base_.num_classes());
}

ClassId FitnessEvaluator::classify_row(std::size_t i, const SelectionMask& mask) const {
    if (k_ == 1) {
        const long nn = nearest_retained(i, mask);
        return nn < 0 ? -1 : base_.label(static_cast<std::size_t>(nn));
    }
    const std::size_t others = mask.retained_count() - (mask.test(i) ? 1 : 0);
    if (others == 0) return -1;
    const std::size_t k = std::min(k_, others);
    std::vector<ClassId> labels;
    labels.reserve(k);
    for (auto j : neighbours(i)) {
        if (!mask.test(j)) continue;
        labels.push_back(base_.label(j));
        if (labels.size() == k) return vote_nearest_tiebreak(labels, base_.num_classes());
    }
    return brute_force_classify(i, mask);
}

std::size_t FitnessEvaluator::correct_count(const SelectionMask& mask) const {
    if (mask.size() != base_.size()) throw DataError("mask length does not match the base set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < base_.size(); ++i)
        correct += classify_row(i, mask) == base_.label(i) ? 1 : 0;
    return correct;
}

double FitnessEvaluator::accuracy(const SelectionMask& mask) const {
    return static_cast<double>(correct_count(mask)) / static_cast<double>(base_.size());
}

double FitnessEvaluator::fitness(const SelectionMask& mask) const {
    if (mask.size() != base_.size()) throw DataError("mask length does not match the base set");
    if (mask.empty_selection()) return kEmptyMaskFitness;
    return combine(correct_count(mask), mask.retained_count());
}

// ---------------------------------------------------------------------------

RemovalState::RemovalState(const FitnessEvaluator& eval, SelectionMask mask)
    : eval_(&eval), mask_(std::move(mask)) {
    if (eval.knn_k() != 1) throw DataError("incremental removal requires a 1-NN evaluator");
    if (mask_.size() != eval.size()) throw DataError("mask length does not match the base set");
    nearest_.resize(eval.size());
    for (std::size_t i = 0; i < eval.size(); ++i) {
        nearest_[i] = eval.nearest_retained(i, mask_);
        correct_ += row_correct(i, nearest_[i]) ? 1 : 0;
    }
}

bool RemovalState::row_correct(std::size_t i, long nn) const {
    const auto& base = eval_->base_set();
    return nn >= 0 && base.label(static_cast<std::size_t>(nn)) == base.label(i);
}

double RemovalState::fitness() const {
    if (mask_.empty_selection()) return kEmptyMaskFitness;
    return eval_->combine(correct_, mask_.retained_count());
}

double RemovalState::fitness_without(std::size_t j) const {
    if (!mask_.test(j)) return fitness();
    if (mask_.retained_count() == 1) return kEmptyMaskFitness;
    long delta = 0;
    // Row j keeps its own prediction: it never used itself as a reference.
    for (std::size_t i = 0; i < nearest_.size(); ++i) {
        if (nearest_[i] != static_cast<long>(j)) continue;
        const long nn = eval_->nearest_retained(i, mask_, static_cast<long>(j));
        delta += (row_correct(i, nn) ? 1 : 0) - (row_correct(i, nearest_[i]) ? 1 : 0);
    }
    const auto correct = static_cast<std::size_t>(static_cast<long>(correct_) + delta);
    return eval_->combine(correct, mask_.retained_count() - 1);
}

void RemovalState::remove(std::size_t j) {
    if (!mask_.test(j)) return;
    mask_.set(j, false);
    for (std::size_t i = 0; i < nearest_.size(); ++i) {
        if (nearest_[i] != static_cast<long>(j)) continue;
        const bool was = row_correct(i, nearest_[i]);
        nearest_[i] = eval_->nearest_retained(i, mask_);
        const bool now = row_correct(i, nearest_[i]);
        if (was && !now) --correct_;
        if (!was && now) ++correct_;
    }
}

} // namespace dsedit
