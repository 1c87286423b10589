#include "dsedit/edition.hpp"

#include "dsedit/knn.hpp"
#include "dsedit/parallel.hpp"
#include "dsedit/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsedit {

SelectionMask enn_edit(const Dataset& dsel, std::size_t k, unsigned jobs) {
    if (dsel.size() <= k)
        throw DataError("ENN needs more than k = " + std::to_string(k) + " rows, got " +
                        std::to_string(dsel.size()));
    std::vector<std::uint8_t> keep(dsel.size(), 1);
    parallel_for(dsel.size(), jobs, [&](std::size_t i) {
        keep[i] = knn_classify(dsel.row(i), dsel, k, i) == dsel.label(i) ? 1 : 0;
    });
    SelectionMask mask(std::move(keep));
    if (mask.empty_selection()) throw DataError("ENN would remove every row");
    return mask;
}

bool RngGraph::has_edge(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

RngGraph build_rng_graph(const Dataset& dsel, unsigned jobs) {
    const std::size_t n = dsel.size();
    if (n < 2) throw DataError("RNG graph needs at least 2 rows");
    const auto dist = pairwise_distances(dsel);

    // Only rows closer to i than j can block (i, j), so walk i's neighbours
    // in ascending distance and stop at d(i, j).
    std::vector<std::vector<std::size_t>> by_distance(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        auto& order = by_distance[i];
        order.resize(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return dist[i * n + a] < dist[i * n + b] || (dist[i * n + a] == dist[i * n + b] && a < b);
        });
    });

    std::vector<std::vector<std::size_t>> upper(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = dist[i * n + j];
            bool blocked = false;
            for (auto k : by_distance[i]) {
                if (dist[i * n + k] >= dij) break;
                if (k == i || k == j) continue;
                if (dist[j * n + k] < dij) {
                    blocked = true;
                    break;
                }
            }
            if (!blocked) upper[i].push_back(j);
        }
    });

    RngGraph g;
    g.num_vertices = n;
    g.adjacency.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j : upper[i]) {
            g.edges.emplace_back(i, j);
            g.adjacency[i].push_back(j);
            g.adjacency[j].push_back(i);
        }
    }
    for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
    return g;
}

SelectionMask rng_edit(const Dataset& dsel, const RngGraph& graph) {
    if (graph.num_vertices != dsel.size()) throw DataError("RNG graph does not match the dataset");
    std::vector<std::uint8_t> keep(dsel.size(), 1);
    for (std::size_t i = 0; i < dsel.size(); ++i) {
        const auto& nb = graph.adjacency[i];
        std::size_t other = 0;
        for (auto j : nb) other += dsel.label(j) != dsel.label(i) ? 1 : 0;
        if (2 * other > nb.size()) keep[i] = 0;
    }
    SelectionMask mask(std::move(keep));
    if (mask.empty_selection()) throw DataError("RNG editing would remove every row");
    return mask;
}

SelectionMask rng_edit(const Dataset& dsel, unsigned jobs) {
    return rng_edit(dsel, build_rng_graph(dsel, jobs));
}

SearchResult rmhc_edit(const FitnessEvaluator& eval, const RmhcConfig& cfg) {
    if (cfg.iterations == 0) throw DataError("RMHC needs at least one iteration");
    if (!(cfg.init_frac > 0.0 && cfg.init_frac <= 1.0))
        throw DataError("RMHC initial fraction must lie in (0, 1]");
    const std::size_t n = eval.size();
    Rng rng(cfg.seed);

    SelectionMask current;
    if (cfg.initial) {
        if (cfg.initial->size() != n) throw DataError("RMHC initial mask has the wrong length");
        current = *cfg.initial;
    } else {
        current = SelectionMask(n, false);
        const auto want = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::lround(cfg.init_frac * static_cast<double>(n))), 1, n);
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t k = 0; k < want; ++k) {
            const auto j = k + static_cast<std::size_t>(uniform_index(rng, n - k));
            std::swap(idx[k], idx[j]);
            current.set(idx[k], true);
        }
    }

    SearchResult res;
    res.trace.reserve(cfg.iterations + 1);
    double best = eval.fitness(current);
    res.evaluations = 1;
    res.trace.push_back({1, best, current.retained_count(), best});
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const auto bit = static_cast<std::size_t>(uniform_index(rng, n));
        current.flip(bit);
        const double f = eval.fitness(current);
        const std::size_t retained = current.retained_count();
        ++res.evaluations;
        if (f > best)
            best = f;
        else
            current.flip(bit);
        res.trace.push_back({res.evaluations, f, retained, best});
    }
    res.mask = std::move(current);
    res.fitness = best;
    return res;
}

GuardedMask guard_min_retained(SelectionMask mask, std::size_t min_rows) {
    if (mask.retained_count() >= min_rows) return {std::move(mask), false};
    return {SelectionMask::full(mask.size()), true};
}

} // namespace dsedit
