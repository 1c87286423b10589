#include "dsedit/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace dsedit {

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw DataError("distance between vectors of dimension " + std::to_string(a.size()) +
                        " and " + std::to_string(b.size()));
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return std::sqrt(s);
}

RegionOfCompetence knn(std::span<const double> query, const Dataset& reference, std::size_t k,
                       std::optional<std::size_t> exclude) {
    if (k == 0) throw DataError("knn requires k >= 1");
    if (query.size() != reference.num_features())
        throw DataError("query has " + std::to_string(query.size()) + " features, reference has " +
                        std::to_string(reference.num_features()));
    const std::size_t n = reference.size();
    const bool drop = exclude.has_value() && *exclude < n;
    const std::size_t usable = n - (drop ? 1 : 0);
    if (k > usable)
        throw DataError("knn: k = " + std::to_string(k) + " exceeds the " + std::to_string(usable) +
                        " usable reference rows");

    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(usable);
    for (std::size_t i = 0; i < n; ++i) {
        if (drop && i == *exclude) continue;
        cand.emplace_back(euclidean(query, reference.row(i)), i);
    }
    auto mid = cand.begin() + static_cast<long>(k);
    std::partial_sort(cand.begin(), mid, cand.end());

    RegionOfCompetence out;
    out.indices.reserve(k);
    out.distances.reserve(k);
    for (auto it = cand.begin(); it != mid; ++it) {
        out.distances.push_back(it->first);
        out.indices.push_back(it->second);
    }
    return out;
}

ClassId vote_nearest_tiebreak(std::span<const ClassId> sorted_labels, std::size_t num_classes) {
    std::vector<std::size_t> votes(num_classes, 0);
    std::size_t top = 0;
    for (auto l : sorted_labels) top = std::max(top, ++votes[static_cast<std::size_t>(l)]);
    // Labels are in distance order, so the first label reaching the top
    // count belongs to the nearest tied class.
    for (auto l : sorted_labels)
        if (votes[static_cast<std::size_t>(l)] == top) return l;
    return 0;
}

ClassId knn_classify(std::span<const double> query, const Dataset& reference, std::size_t k,
                     std::optional<std::size_t> exclude) {
    const auto region = knn(query, reference, k, exclude);
    std::vector<ClassId> labels;
    labels.reserve(region.size());
    for (auto i : region.indices) labels.push_back(reference.label(i));
    return vote_nearest_tiebreak(labels, reference.num_classes());
}

std::vector<double> pairwise_distances(const Dataset& data) {
    const std::size_t n = data.size();
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = euclidean(data.row(i), data.row(j));
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    return dist;
}

} // namespace dsedit
