#pragma once

#include "dsedit/fitness.hpp"
#include "dsedit/mask.hpp"
#include "dsedit/random.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dsedit {

/// One fitness evaluation as seen by a searcher.
struct TracePoint {
    std::size_t evaluation = 0; ///< 1-based evaluation index
    double fitness = 0.0;       ///< fitness of the evaluated candidate
    std::size_t retained = 0;   ///< retained rows of the evaluated candidate
    double best_fitness = 0.0;  ///< best fitness seen so far (monotone)
};

struct SearchResult {
    SelectionMask mask;  ///< best-ever mask
    double fitness = kEmptyMaskFitness;
    std::size_t evaluations = 0;
    std::vector<TracePoint> trace;
};

/// Trace file: header line, then "evaluation,fitness,retained,best_fitness".
void write_trace(std::ostream& out, const std::vector<TracePoint>& trace);

/// Hyper-parameters shared by the evolutionary searchers.
struct GaConfig {
    std::size_t population_size = 50;
    std::size_t max_evaluations = 10000;
    double crossover_rate = 1.0;
    double mutation_1to0 = 0.01;
    double mutation_0to1 = 0.001;
    double restart_change = 0.35; ///< CHC: fraction of bits flipped on restart
    std::uint64_t seed = 0;

    void validate() const;

    static GaConfig ssma_defaults();
    static GaConfig gga_defaults();
    static GaConfig chc_defaults();
};

/// Generational GA: roulette-wheel selection, uniform crossover with
/// probability crossover_rate, asymmetric per-bit mutation. The previous
/// generation's best chromosome fills the unpaired slot unchanged.
SearchResult gga_edit(const FitnessEvaluator& eval, const GaConfig& cfg);

/// CHC: random pairing, HUX crossover behind an incest threshold that starts
/// at L/4, elitist (mu + lambda) survival, and a cataclysmic restart around
/// the best chromosome when the threshold reaches zero. No mutation.
SearchResult chc_edit(const FitnessEvaluator& eval, const GaConfig& cfg);

/// Steady-state memetic algorithm: binary tournaments, half-uniform gene
/// inheritance, asymmetric mutation, a greedy removal local search on
/// promising offspring, and replacement of the two worst members.
SearchResult ssma_edit(const FitnessEvaluator& eval, const GaConfig& cfg);

namespace detail {

/// HUX: swaps exactly floor(h / 2) of the h differing positions, chosen at
/// random. Returns false (and leaves the children as copies) when h == 0.
bool hux_crossover(const SelectionMask& a, const SelectionMask& b, SelectionMask& child_a,
                   SelectionMask& child_b, Rng& rng);

/// Copy of `model` with exactly floor(fraction * L) distinct bits flipped.
SelectionMask restart_from(const SelectionMask& model, double fraction, Rng& rng);

std::size_t hamming(const SelectionMask& a, const SelectionMask& b);

} // namespace detail

} // namespace dsedit
