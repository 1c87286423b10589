#pragma once

#include "dsedit/dataset.hpp"
#include "dsedit/fitness.hpp"
#include "dsedit/mask.hpp"
#include "dsedit/search.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace dsedit {

/// Wilson editing: every row misclassified by leave-one-out kNN over the
/// original set is removed, all at once after the full pass. Throws when
/// nothing would survive.
SelectionMask enn_edit(const Dataset& dsel, std::size_t k = 3, unsigned jobs = 1);

/// Relative neighbourhood graph: i and j are adjacent iff no third row k has
/// both d(i,k) < d(i,j) and d(j,k) < d(i,j).
struct RngGraph {
    std::size_t num_vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; ///< i < j, sorted
    std::vector<std::vector<std::size_t>> adjacency;

    bool has_edge(std::size_t i, std::size_t j) const;
};

RngGraph build_rng_graph(const Dataset& dsel, unsigned jobs = 1);

/// Removes rows whose graph neighbours are strictly more than half of another
/// class. Isolated rows and exact ties are kept. Throws when nothing survives.
SelectionMask rng_edit(const Dataset& dsel, unsigned jobs = 1);
SelectionMask rng_edit(const Dataset& dsel, const RngGraph& graph);

struct RmhcConfig {
    std::size_t iterations = 10000;
    double init_frac = 0.10;
    std::uint64_t seed = 0;
    /// Starting subset; a random init_frac sample when absent.
    std::optional<SelectionMask> initial;
};

/// Random mutation hill climbing: flip one uniformly chosen bit per
/// iteration, keep the flip only on strictly better fitness.
SearchResult rmhc_edit(const FitnessEvaluator& eval, const RmhcConfig& cfg);

/// Rejects masks that keep fewer than `min_rows` rows by substituting the
/// identity mask.
struct GuardedMask {
    SelectionMask mask;
    bool fell_back = false;
};
GuardedMask guard_min_retained(SelectionMask mask, std::size_t min_rows);

} // namespace dsedit
