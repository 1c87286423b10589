#pragma once

#include "dsedit/dataset.hpp"

#include <optional>
#include <span>
#include <vector>

namespace dsedit {

double euclidean(std::span<const double> a, std::span<const double> b);

/// K nearest reference rows of a query: ascending distance, ties broken by
/// lower row index.
struct RegionOfCompetence {
    std::vector<std::size_t> indices;
    std::vector<double> distances;

    std::size_t size() const noexcept { return indices.size(); }
};

/// Brute-force k-nearest neighbours. `exclude` drops one reference row
/// (leave-one-out). Throws DataError when fewer than k rows are usable or the
/// dimensions differ.
RegionOfCompetence knn(std::span<const double> query, const Dataset& reference, std::size_t k,
                       std::optional<std::size_t> exclude = std::nullopt);

/// Majority vote over the k neighbours. Vote ties go to the tied class whose
/// closest member is nearest to the query.
ClassId knn_classify(std::span<const double> query, const Dataset& reference, std::size_t k,
                     std::optional<std::size_t> exclude = std::nullopt);

/// The vote rule of knn_classify applied to neighbour labels already sorted
/// by ascending distance.
ClassId vote_nearest_tiebreak(std::span<const ClassId> sorted_labels, std::size_t num_classes);

/// Full symmetric N x N distance matrix, row-major.
std::vector<double> pairwise_distances(const Dataset& data);

} // namespace dsedit
