#include "dsedit/dynselect.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace dsedit {

std::string_view to_string(DsMethod m) {
    switch (m) {
    case DsMethod::OLA: return "OLA";
    case DsMethod::LCA: return "LCA";
    case DsMethod::APriori: return "APriori";
    case DsMethod::MCB: return "MCB";
    case DsMethod::KNORAE: return "KNORA-E";
    case DsMethod::KNORAU: return "KNORA-U";
    }
    return "?";
}

DsMethod parse_ds_method(std::string_view name) {
    std::string key;
    for (char c : name)
        if (c != '-' && c != '_' && c != ' ') key.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (key == "OLA") return DsMethod::OLA;
    if (key == "LCA") return DsMethod::LCA;
    if (key == "APRIORI") return DsMethod::APriori;
    if (key == "MCB") return DsMethod::MCB;
    if (key == "KNORAE") return DsMethod::KNORAE;
    if (key == "KNORAU") return DsMethod::KNORAU;
    throw DataError("unknown dynamic selection method '" + std::string(name) + "'");
}

RegionOfCompetence region_of_competence(std::span<const double> query, const Dataset& dsel_prime,
                                        std::size_t k) {
    if (k > dsel_prime.size())
        throw DataError("region of competence: K = " + std::to_string(k) +
                        " exceeds the selection set size " + std::to_string(dsel_prime.size()));
    return knn(query, dsel_prime, k);
}

namespace {

void require_cache(const ClassifierPool& pool, const RegionOfCompetence& region) {
    if (!pool.has_cache()) throw DataError("pool cache has not been built");
    for (auto j : region.indices)
        if (j >= pool.cache_rows)
            throw DataError("region index " + std::to_string(j) + " outside the cached selection set");
}

} // namespace

CompetenceVector ola_competence(const ClassifierPool& pool, const RegionOfCompetence& region) {
    require_cache(pool, region);
    CompetenceVector out(pool.size(), 0.0);
    if (region.size() == 0) return out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        std::size_t hits = 0;
        for (auto j : region.indices) hits += pool.cached_correct(i, j) ? 1 : 0;
        out[i] = static_cast<double>(hits) / static_cast<double>(region.size());
    }
    return out;
}

CompetenceVector lca_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                std::span<const ClassId> predicted) {
    require_cache(pool, region);
    if (predicted.size() != pool.size()) throw DataError("lca: one prediction per member required");
    CompetenceVector out(pool.size(), 0.0);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        std::size_t total = 0;
        std::size_t hits = 0;
        for (auto j : region.indices) {
            if (pool.cache_labels[j] != predicted[i]) continue;
            ++total;
            hits += pool.cached_correct(i, j) ? 1 : 0;
        }
        out[i] = total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    }
    return out;
}

CompetenceVector apriori_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                    double epsilon) {
    require_cache(pool, region);
    CompetenceVector out(pool.size(), 0.0);
    if (region.size() == 0) return out;
    std::vector<double> w(region.size());
    double wsum = 0.0;
    for (std::size_t k = 0; k < region.size(); ++k) {
        w[k] = 1.0 / (region.distances[k] + epsilon);
        wsum += w[k];
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < region.size(); ++k) {
            const auto j = region.indices[k];
            acc += w[k] * pool.cached_support(i, j, static_cast<std::size_t>(pool.cache_labels[j]));
        }
        out[i] = std::clamp(acc / wsum, 0.0, 1.0);
    }
    return out;
}

std::vector<std::size_t> mcb_filter(const ClassifierPool& pool, const RegionOfCompetence& region,
                                    std::span<const ClassId> query_signature, double similarity) {
    require_cache(pool, region);
    if (query_signature.size() != pool.size())
        throw DataError("mcb: query signature must have one entry per member");
    std::vector<std::size_t> kept;
    const auto m = static_cast<double>(pool.size());
    for (auto j : region.indices) {
        std::size_t agree = 0;
        for (std::size_t i = 0; i < pool.size(); ++i)
            agree += pool.cached_prediction(i, j) == query_signature[i] ? 1 : 0;
        if (static_cast<double>(agree) >= similarity * m) kept.push_back(j);
    }
    if (kept.empty()) kept = region.indices;
    return kept;
}

CompetenceVector mcb_competence(const ClassifierPool& pool, const RegionOfCompetence& region,
                                std::span<const ClassId> query_signature, double similarity) {
    const auto kept = mcb_filter(pool, region, query_signature, similarity);
    CompetenceVector out(pool.size(), 0.0);
    if (kept.empty()) return out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        std::size_t hits = 0;
        for (auto j : kept) hits += pool.cached_correct(i, j) ? 1 : 0;
        out[i] = static_cast<double>(hits) / static_cast<double>(kept.size());
    }
    return out;
}

KnoraSelection knora_select(const ClassifierPool& pool, const RegionOfCompetence& region,
                            KnoraMode mode) {
    require_cache(pool, region);
    KnoraSelection sel;
    const std::size_t m = pool.size();
    if (mode == KnoraMode::Union) {
        sel.region_used = region.size();
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t hits = 0;
            for (auto j : region.indices) hits += pool.cached_correct(i, j) ? 1 : 0;
            if (hits > 0) {
                sel.members.push_back(i);
                sel.weights.push_back(hits);
            }
        }
    } else {
        // Number of leading neighbours each member gets right in a row.
        std::vector<std::size_t> streak(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            while (streak[i] < region.size() && pool.cached_correct(i, region.indices[streak[i]]))
                ++streak[i];
        }
        for (std::size_t used = region.size(); used > 0; --used) {
            for (std::size_t i = 0; i < m; ++i) {
                if (streak[i] >= used) {
                    sel.members.push_back(i);
                    sel.weights.push_back(1);
                }
            }
            if (!sel.members.empty()) {
                sel.region_used = used;
                break;
            }
        }
    }
    if (sel.members.empty()) {
        sel.region_used = 0;
        for (std::size_t i = 0; i < m; ++i) {
            sel.members.push_back(i);
            sel.weights.push_back(1);
        }
    }
    return sel;
}

std::size_t argmax_lowest(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return best;
}

namespace {

ClassId weighted_vote(const KnoraSelection& sel, std::span<const ClassId> predictions,
                      std::size_t num_classes) {
    std::vector<std::size_t> votes(num_classes, 0);
    for (std::size_t s = 0; s < sel.members.size(); ++s)
        votes[static_cast<std::size_t>(predictions[sel.members[s]])] += sel.weights[s];
    std::size_t best = 0;
    for (std::size_t c = 1; c < num_classes; ++c)
        if (votes[c] > votes[best]) best = c;
    return static_cast<ClassId>(best);
}

} // namespace

ClassId ds_predict(DsMethod method, const ClassifierPool& pool, const Dataset& dsel_prime,
                   std::span<const double> query, std::size_t k, const DsParams& params) {
    if (pool.cache_rows != dsel_prime.size())
        throw DataError("pool cache covers " + std::to_string(pool.cache_rows) +
                        " rows but the selection set has " + std::to_string(dsel_prime.size()));
    const auto region = region_of_competence(query, dsel_prime, k);
    const auto predictions = pool.predict_all(query);

    CompetenceVector comp;
    switch (method) {
    case DsMethod::OLA: comp = ola_competence(pool, region); break;
    case DsMethod::LCA: comp = lca_competence(pool, region, predictions); break;
    case DsMethod::APriori: comp = apriori_competence(pool, region, params.distance_epsilon); break;
    case DsMethod::MCB: comp = mcb_competence(pool, region, predictions, params.mcb_similarity); break;
    case DsMethod::KNORAE:
        return weighted_vote(knora_select(pool, region, KnoraMode::Eliminate), predictions, pool.num_classes);
    case DsMethod::KNORAU:
        return weighted_vote(knora_select(pool, region, KnoraMode::Union), predictions, pool.num_classes);
    }
    return predictions[argmax_lowest(comp)];
}

std::vector<ClassId> ds_predict_all(DsMethod method, const ClassifierPool& pool,
                                    const Dataset& dsel_prime, const Dataset& queries,
                                    std::size_t k, const DsParams& params) {
    std::vector<ClassId> out(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q)
        out[q] = ds_predict(method, pool, dsel_prime, queries.row(q), k, params);
    return out;
}

double accuracy(std::span<const ClassId> predicted, std::span<const ClassId> truth) {
    if (predicted.size() != truth.size()) throw DataError("accuracy: length mismatch");
    if (truth.empty()) return 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

} // namespace dsedit
