#include "dsedit/search.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

namespace dsedit {

void write_trace(std::ostream& out, const std::vector<TracePoint>& trace) {
    out << "evaluation,fitness,retained,best_fitness\n";
    for (const auto& t : trace)
        out << t.evaluation << ',' << t.fitness << ',' << t.retained << ',' << t.best_fitness << '\n';
}

void GaConfig::validate() const {
    auto prob = [](double p, const char* what) {
        if (!(p >= 0.0 && p <= 1.0)) throw DataError(std::string(what) + " must lie in [0, 1]");
    };
    prob(crossover_rate, "crossover rate");
    prob(mutation_1to0, "1->0 mutation probability");
    prob(mutation_0to1, "0->1 mutation probability");
    prob(restart_change, "restart change fraction");
    if (population_size < 2) throw DataError("population size must be at least 2");
    if (max_evaluations == 0) throw DataError("evaluation budget must be at least 1");
}

GaConfig GaConfig::ssma_defaults() {
    GaConfig c;
    c.population_size = 50;
    c.crossover_rate = 1.0;
    return c;
}

GaConfig GaConfig::gga_defaults() {
    GaConfig c;
    c.population_size = 51;
    c.crossover_rate = 0.6;
    return c;
}

GaConfig GaConfig::chc_defaults() {
    GaConfig c;
    c.population_size = 50;
    c.restart_change = 0.35;
    return c;
}

namespace detail {

std::size_t hamming(const SelectionMask& a, const SelectionMask& b) {
    std::size_t h = 0;
    for (std::size_t i = 0; i < a.size(); ++i) h += a.test(i) != b.test(i) ? 1 : 0;
    return h;
}

bool hux_crossover(const SelectionMask& a, const SelectionMask& b, SelectionMask& child_a,
                   SelectionMask& child_b, Rng& rng) {
    child_a = a;
    child_b = b;
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.test(i) != b.test(i)) diff.push_back(i);
    if (diff.empty()) return false;
    shuffle(diff.begin(), diff.end(), rng);
    const std::size_t swaps = diff.size() / 2;
    for (std::size_t s = 0; s < swaps; ++s) {
        const auto i = diff[s];
        child_a.set(i, b.test(i));
        child_b.set(i, a.test(i));
    }
    return true;
}

SelectionMask restart_from(const SelectionMask& model, double fraction, Rng& rng) {
    SelectionMask out = model;
    const auto flips = static_cast<std::size_t>(fraction * static_cast<double>(model.size()) + 1e-9);
    std::vector<std::size_t> idx(model.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // Partial Fisher-Yates: the first `flips` positions are a uniform sample.
    for (std::size_t k = 0; k < flips && k < idx.size(); ++k) {
        const auto j = k + static_cast<std::size_t>(uniform_index(rng, idx.size() - k));
        std::swap(idx[k], idx[j]);
        out.flip(idx[k]);
    }
    return out;
}

} // namespace detail

namespace {

/// Counts evaluations, records the trace and keeps the best-ever mask.
class Tracker {
public:
    Tracker(const FitnessEvaluator& eval, std::size_t budget) : eval_(eval), budget_(budget) {
        result_.trace.reserve(std::min<std::size_t>(budget, 1u << 16));
    }

    bool exhausted() const noexcept { return result_.evaluations >= budget_; }

    double evaluate(const SelectionMask& m) {
        const double f = eval_.fitness(m);
        if (offer(f, m.retained_count())) set_best(m);
        return f;
    }

    /// Records an evaluation computed elsewhere; true when it beats the best.
    bool offer(double f, std::size_t retained) {
        ++result_.evaluations;
        const bool improved = result_.mask.size() == 0 || f > result_.fitness;
        if (improved) result_.fitness = f;
        result_.trace.push_back({result_.evaluations, f, retained, result_.fitness});
        return improved;
    }

    void set_best(const SelectionMask& m) { result_.mask = m; }

    SearchResult finish() && { return std::move(result_); }

private:
    const FitnessEvaluator& eval_;
    std::size_t budget_;
    SearchResult result_;
};

SelectionMask random_chromosome(std::size_t n, Rng& rng) {
    SelectionMask m(n, false);
    while (m.empty_selection())
        for (std::size_t i = 0; i < n; ++i) m.set(i, uniform01(rng) < 0.5);
    return m;
}

void reseed_if_empty(SelectionMask& m, Rng& rng) {
    if (m.empty_selection()) m = random_chromosome(m.size(), rng);
}

void mutate(SelectionMask& m, double p10, double p01, Rng& rng) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double u = uniform01(rng);
        if (m.test(i)) {
            if (u < p10) m.set(i, false);
        } else if (u < p01) {
            m.set(i, true);
        }
    }
}

void uniform_crossover(const SelectionMask& a, const SelectionMask& b, SelectionMask& ca,
                       SelectionMask& cb, Rng& rng) {
    ca = a;
    cb = b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (uniform01(rng) < 0.5) {
            ca.set(i, b.test(i));
            cb.set(i, a.test(i));
        }
    }
}

void check_inputs(const FitnessEvaluator& eval, const GaConfig& cfg) {
    cfg.validate();
    if (eval.size() < 2) throw DataError("prototype search needs at least 2 rows");
}

struct Population {
    std::vector<SelectionMask> members;
    std::vector<double> fitness;

    std::size_t worst() const {
        return static_cast<std::size_t>(std::min_element(fitness.begin(), fitness.end()) - fitness.begin());
    }
    std::size_t best() const {
        return static_cast<std::size_t>(std::max_element(fitness.begin(), fitness.end()) - fitness.begin());
    }
};

Population initial_population(const FitnessEvaluator& eval, std::size_t size, Tracker& tracker, Rng& rng) {
    Population pop;
    for (std::size_t p = 0; p < size && !tracker.exhausted(); ++p) {
        pop.members.push_back(random_chromosome(eval.size(), rng));
        pop.fitness.push_back(tracker.evaluate(pop.members.back()));
    }
    return pop;
}

std::size_t roulette(const std::vector<double>& fitness, double total, Rng& rng) {
    if (!(total > 0.0)) return static_cast<std::size_t>(uniform_index(rng, fitness.size()));
    const double r = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < fitness.size(); ++i) {
        acc += std::max(0.0, fitness[i]);
        if (r < acc) return i;
    }
    return fitness.size() - 1;
}

} // namespace

SearchResult gga_edit(const FitnessEvaluator& eval, const GaConfig& cfg) {
    check_inputs(eval, cfg);
    Rng rng(cfg.seed);
    Tracker tracker(eval, cfg.max_evaluations);
    Population pop = initial_population(eval, cfg.population_size, tracker, rng);

    while (!tracker.exhausted()) {
        const std::size_t size = pop.members.size();
        Population next;
        const auto elite = pop.best();
        next.members.push_back(pop.members[elite]);
        next.fitness.push_back(pop.fitness[elite]);

        double total = 0.0;
        for (double f : pop.fitness) total += std::max(0.0, f);
        const std::size_t slots = size - 1;
        std::vector<std::size_t> chosen(slots);
        for (auto& c : chosen) c = roulette(pop.fitness, total, rng);

        for (std::size_t s = 0; s < slots && !tracker.exhausted(); s += 2) {
            if (s + 1 == slots) { // unpaired: copied through
                next.members.push_back(pop.members[chosen[s]]);
                next.fitness.push_back(pop.fitness[chosen[s]]);
                break;
            }
            SelectionMask a = pop.members[chosen[s]];
            SelectionMask b = pop.members[chosen[s + 1]];
            if (uniform01(rng) < cfg.crossover_rate) {
                SelectionMask ca, cb;
                uniform_crossover(a, b, ca, cb, rng);
                a = std::move(ca);
                b = std::move(cb);
            }
            for (auto* child : {&a, &b}) {
                mutate(*child, cfg.mutation_1to0, cfg.mutation_0to1, rng);
                reseed_if_empty(*child, rng);
            }
            for (auto* child : {&a, &b}) {
                if (tracker.exhausted()) break;
                next.fitness.push_back(tracker.evaluate(*child));
                next.members.push_back(std::move(*child));
            }
        }
        if (next.members.size() < size) break; // budget ran out mid-generation
        pop = std::move(next);
    }
    return std::move(tracker).finish();
}

SearchResult chc_edit(const FitnessEvaluator& eval, const GaConfig& cfg) {
    check_inputs(eval, cfg);
    Rng rng(cfg.seed);
    Tracker tracker(eval, cfg.max_evaluations);
    Population pop = initial_population(eval, cfg.population_size, tracker, rng);

    const long initial_threshold = static_cast<long>(eval.size() / 4);
    long threshold = initial_threshold;

    while (!tracker.exhausted()) {
        const std::size_t size = pop.members.size();
        std::vector<std::size_t> order(size);
        std::iota(order.begin(), order.end(), std::size_t{0});
        shuffle(order.begin(), order.end(), rng);

        Population offspring;
        for (std::size_t p = 0; p + 1 < size && !tracker.exhausted(); p += 2) {
            const auto& a = pop.members[order[p]];
            const auto& b = pop.members[order[p + 1]];
            const auto h = static_cast<long>(detail::hamming(a, b));
            if (h / 2 <= threshold) continue;
            SelectionMask ca, cb;
            detail::hux_crossover(a, b, ca, cb, rng);
            for (auto* child : {&ca, &cb}) {
                if (tracker.exhausted()) break;
                reseed_if_empty(*child, rng);
                offspring.fitness.push_back(tracker.evaluate(*child));
                offspring.members.push_back(std::move(*child));
            }
        }

        bool survived = false;
        if (!offspring.members.empty()) {
            // (mu + lambda): parents first so equal-fitness parents win ties.
            std::vector<std::pair<double, std::size_t>> ranked;
            for (std::size_t i = 0; i < size; ++i) ranked.emplace_back(pop.fitness[i], i);
            for (std::size_t i = 0; i < offspring.members.size(); ++i)
                ranked.emplace_back(offspring.fitness[i], size + i);
            std::stable_sort(ranked.begin(), ranked.end(),
                             [](const auto& x, const auto& y) { return x.first > y.first; });
            Population next;
            for (std::size_t r = 0; r < size; ++r) {
                const auto id = ranked[r].second;
                if (id < size) {
                    next.members.push_back(pop.members[id]);
                    next.fitness.push_back(pop.fitness[id]);
                } else {
                    survived = true;
                    next.members.push_back(offspring.members[id - size]);
                    next.fitness.push_back(offspring.fitness[id - size]);
                }
            }
            pop = std::move(next);
        }

        if (!survived && --threshold <= 0) {
            // Cataclysmic restart around the best chromosome (survival is elitist,
            // so it is also the best ever seen).
            const auto best = pop.best();
            const SelectionMask model = pop.members[best];
            const double model_fitness = pop.fitness[best];
            Population next;
            next.members.push_back(model);
            next.fitness.push_back(model_fitness);
            for (std::size_t i = 1; i < size && !tracker.exhausted(); ++i) {
                SelectionMask m = detail::restart_from(model, cfg.restart_change, rng);
                reseed_if_empty(m, rng);
                next.fitness.push_back(tracker.evaluate(m));
                next.members.push_back(std::move(m));
            }
            pop = std::move(next);
            threshold = initial_threshold;
        }
    }
    return std::move(tracker).finish();
}

SearchResult ssma_edit(const FitnessEvaluator& eval, const GaConfig& cfg) {
    check_inputs(eval, cfg);
    Rng rng(cfg.seed);
    Tracker tracker(eval, cfg.max_evaluations);
    Population pop = initial_population(eval, cfg.population_size, tracker, rng);
    if (pop.members.size() < 2) return std::move(tracker).finish();

    auto tournament = [&](long skip) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < pop.members.size(); ++i)
            if (static_cast<long>(i) != skip) pool.push_back(i);
        if (pool.size() == 1) return pool.front();
        const auto x = uniform_index(rng, pool.size());
        auto y = uniform_index(rng, pool.size() - 1);
        if (y >= x) ++y;
        const auto a = pool[x];
        const auto b = pool[y];
        return pop.fitness[b] > pop.fitness[a] ? b : a;
    };

    // Greedy removal local search. Each tested flip is one evaluation.
    auto meme = [&](SelectionMask& child, double& f) {
        std::vector<std::size_t> candidates = child.retained_indices();
        shuffle(candidates.begin(), candidates.end(), rng);
        if (eval.knn_k() == 1) {
            RemovalState state(eval, child);
            for (auto j : candidates) {
                if (tracker.exhausted()) break;
                const double g = state.fitness_without(j);
                const bool improved = tracker.offer(g, state.mask().retained_count() - 1);
                if (g >= f) {
                    state.remove(j);
                    f = g;
                    if (improved) tracker.set_best(state.mask());
                }
            }
            child = state.mask();
        } else {
            for (auto j : candidates) {
                if (tracker.exhausted()) break;
                child.set(j, false);
                const double g = tracker.evaluate(child);
                if (g >= f)
                    f = g;
                else
                    child.set(j, true);
            }
        }
    };

    while (!tracker.exhausted()) {
        const auto p1 = tournament(-1);
        const auto p2 = tournament(static_cast<long>(p1));
        SelectionMask c1 = pop.members[p1];
        SelectionMask c2 = pop.members[p2];
        if (uniform01(rng) < cfg.crossover_rate) {
            SelectionMask a, b;
            uniform_crossover(pop.members[p1], pop.members[p2], a, b, rng);
            c1 = std::move(a);
            c2 = std::move(b);
        }

        std::vector<std::pair<SelectionMask, double>> children;
        for (auto* child : {&c1, &c2}) {
            mutate(*child, cfg.mutation_1to0, cfg.mutation_0to1, rng);
            reseed_if_empty(*child, rng);
        }
        for (auto* child : {&c1, &c2}) {
            if (tracker.exhausted()) break;
            double f = tracker.evaluate(*child);
            if (f >= pop.fitness[pop.worst()]) meme(*child, f);
            children.emplace_back(std::move(*child), f);
        }

        std::stable_sort(children.begin(), children.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        for (auto& [mask, f] : children) {
            const auto w = pop.worst();
            if (f > pop.fitness[w]) {
                pop.members[w] = std::move(mask);
                pop.fitness[w] = f;
            }
        }
    }
    return std::move(tracker).finish();
}

} // namespace dsedit
