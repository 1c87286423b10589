#pragma once

#include "dsedit/dataset.hpp"
#include "dsedit/knn.hpp"
#include "dsedit/pool.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dsedit {

enum class DsMethod { OLA, LCA, APriori, MCB, KNORAE, KNORAU };

inline constexpr std::array<DsMethod, 6> kAllDsMethods{
    DsMethod::OLA, DsMethod::LCA, DsMethod::APriori, DsMethod::MCB, DsMethod::KNORAE, DsMethod::KNORAU};

std::string_view to_string(DsMethod m);
/// Case-insensitive; accepts "KNORA-E" and "KNORAE" forms. Throws DataError.
DsMethod parse_ds_method(std::string_view name);

/// One competence estimate in [0, 1] per pool member.
using CompetenceVector = std::vector<double>;

struct DsParams {
    double mcb_similarity = 0.7;
    double distance_epsilon = 1e-12;
};

/// K nearest rows of the (edited) selection set. Rejects K > |DSEL'|.
RegionOfCompetence region_of_competence(std::span<const double> query, const Dataset& dsel_prime,
                                        std::size_t k);

// Competence estimators. All read the pool's cache, which must have been
// built over the same selection set the region indexes into.

CompetenceVector ola_competence(const ClassifierPool& pool, const RegionOfCompetence& region);

/// `predicted[i]` is member i's label for the query.
CompetenceVector lca_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                std::span<const ClassId> predicted);

CompetenceVector apriori_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                    double epsilon = 1e-12);

/// Region rows whose pool-output signature agrees with the query's on at
/// least `similarity` of the members; the whole region when none does.
std::vector<std::size_t> mcb_filter(const ClassifierPool& pool, const RegionOfCompetence& region,
                                    std::span<const ClassId> query_signature, double similarity);

CompetenceVector mcb_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                std::span<const ClassId> query_signature, double similarity = 0.7);

enum class KnoraMode { Eliminate, Union };

struct KnoraSelection {
    std::vector<std::size_t> members;
    std::vector<std::size_t> weights; ///< votes per selected member, parallel to `members`
    std::size_t region_used = 0;      ///< neighbours kept after E-mode shrinking
};

KnoraSelection knora_select(const ClassifierPool& pool, const RegionOfCompetence& region,
                            KnoraMode mode);

/// Lowest index of the maximum value.
std::size_t argmax_lowest(std::span<const double> values);

/// Classifies one query. The pool cache must cover `dsel_prime`.
ClassId ds_predict(DsMethod method, const ClassifierPool& pool, const Dataset& dsel_prime,
                   std::span<const double> query, std::size_t k, const DsParams& params = {});

/// ds_predict over every row of `queries`.
std::vector<ClassId> ds_predict_all(DsMethod method, const ClassifierPool& pool,
                                    const Dataset& dsel_prime, const Dataset& queries,
                                    std::size_t k, const DsParams& params = {});

double accuracy(std::span<const ClassId> predicted, std::span<const ClassId> truth);

} // namespace dsedit
