#include "dsedit/fitness.hpp"
#include "dsedit/random.hpp"
#include "dsedit/search.hpp"
#include "dsedit/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace dsedit;

namespace {

std::vector<bool> to_bools(const SelectionMask& m) {
    std::vector<bool> out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) out[i] = m.test(i);
    return out;
}

SelectionMask random_mask(std::size_t n, Rng& rng) {
    SelectionMask m(n, false);
    for (std::size_t i = 0; i < n; ++i) m.set(i, uniform01(rng) < 0.5);
    return m;
}

void check_trace(const SearchResult& r) {
    REQUIRE_FALSE(r.trace.empty());
    CHECK(r.trace.size() == r.evaluations);
    for (std::size_t t = 0; t < r.trace.size(); ++t) {
        CHECK(r.trace[t].evaluation == t + 1);
        CHECK(r.trace[t].best_fitness >= r.trace[t].fitness);
        if (t) CHECK(r.trace[t].best_fitness >= r.trace[t - 1].best_fitness);
    }
    CHECK(r.trace.back().best_fitness == r.fitness);
}

} // namespace

TEST_CASE("fitness arithmetic") {
    const auto sep = generate({SynthKind::SeparableGaussians, 100, 0.0, 1});
    const FitnessEvaluator eval(sep);
    CHECK(eval(SelectionMask::full(100)) == doctest::Approx(0.5));
    CHECK(eval.reduction(SelectionMask::full(100)) == 0.0);
    CHECK(eval(SelectionMask(100, false)) == kEmptyMaskFitness);
    CHECK(eval.combine(80, 40) == doctest::Approx(0.5 * 0.8 + 0.5 * 0.6));
    CHECK_THROWS_AS(eval(SelectionMask(99, true)), DataError);
    CHECK_THROWS_AS(FitnessEvaluator(sep, 1.5), DataError);
}

TEST_CASE("fitness agrees with the brute-force definition") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto d = oracle::random_dataset(seed, 8 + seed * 3, 2, 2 + seed % 3, seed % 5 == 0);
        // A short neighbour list forces the brute-force fallback too.
        const FitnessEvaluator full(d);
        const FitnessEvaluator truncated(d, 0.5, 1, 2);
        Rng rng(seed);
        for (int t = 0; t < 20; ++t) {
            const auto m = random_mask(d.size(), rng);
            const double expect = oracle::fitness(d, to_bools(m));
            CHECK(full(m) == doctest::Approx(expect).epsilon(1e-12));
            CHECK(truncated(m) == full(m));
            if (!m.empty_selection()) {
                CHECK(full(m) >= 0.0);
                CHECK(full(m) <= 1.0);
            }
        }
    }
}

TEST_CASE("k > 1 fitness matches the oracle vote") {
    const auto d = oracle::random_dataset(4, 25, 2, 3);
    const FitnessEvaluator eval(d, 0.5, 3, 4);
    Rng rng(2);
    for (int t = 0; t < 30; ++t) {
        const auto m = random_mask(d.size(), rng);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            std::vector<std::pair<double, std::size_t>> cand;
            for (std::size_t j = 0; j < d.size(); ++j)
                if (j != i && m.test(j)) cand.emplace_back(oracle::dist(d, i, d, j), j);
            std::sort(cand.begin(), cand.end());
            std::vector<ClassId> labels;
            for (std::size_t p = 0; p < cand.size() && p < 3; ++p) labels.push_back(d.label(cand[p].second));
            correct += !labels.empty() && oracle::vote(labels) == d.label(i) ? 1 : 0;
        }
        CHECK(eval.correct_count(m) == correct);
    }
}

TEST_CASE("incremental removal matches full evaluation") {
    const auto d = generate({SynthKind::Banana, 150, 1.0, 2});
    const FitnessEvaluator eval(d, 0.5, 1, 8);
    Rng rng(5);
    RemovalState st(eval, SelectionMask::full(d.size()));
    for (int step = 0; step < 140; ++step) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, d.size()));
        auto probe = st.mask();
        probe.set(j, false);
        CHECK(st.fitness_without(j) == doctest::Approx(eval(probe)).epsilon(1e-12));
        st.remove(j);
        CHECK(st.fitness() == doctest::Approx(eval(st.mask())).epsilon(1e-12));
    }
}

TEST_CASE("HUX swaps exactly half of the differing bits") {
    Rng rng(1);
    const auto a = SelectionMask::from_bitstring("0000");
    const auto b = SelectionMask::from_bitstring("1111");
    SelectionMask ca, cb;
    REQUIRE(detail::hux_crossover(a, b, ca, cb, rng));
    CHECK(detail::hamming(ca, a) == 2);
    CHECK(detail::hamming(ca, b) == 2);
    CHECK(detail::hamming(cb, a) == 2);
    CHECK(detail::hamming(cb, b) == 2);

    CHECK_FALSE(detail::hux_crossover(a, a, ca, cb, rng));

    for (int t = 0; t < 50; ++t) {
        const auto x = random_mask(31, rng), y = random_mask(31, rng);
        const auto h = detail::hamming(x, y);
        if (!detail::hux_crossover(x, y, ca, cb, rng)) {
            CHECK(h == 0);
            continue;
        }
        CHECK(detail::hamming(ca, x) == h / 2);
        CHECK(detail::hamming(cb, y) == h / 2);
        for (std::size_t i = 0; i < 31; ++i)
            if (x.test(i) == y.test(i)) CHECK((ca.test(i) == x.test(i) && cb.test(i) == x.test(i)));
    }
}

TEST_CASE("CHC restart flips floor(35%) of the bits") {
    Rng rng(2);
    const auto model = random_mask(10, rng);
    for (int t = 0; t < 20; ++t) CHECK(detail::hamming(detail::restart_from(model, 0.35, rng), model) == 3);
    const auto big = random_mask(101, rng);
    CHECK(detail::hamming(detail::restart_from(big, 0.35, rng), big) == 35);
}

TEST_CASE("GA configuration") {
    CHECK(GaConfig::ssma_defaults().population_size == 50);
    CHECK(GaConfig::ssma_defaults().max_evaluations == 10000);
    CHECK(GaConfig::ssma_defaults().mutation_1to0 == 0.01);
    CHECK(GaConfig::ssma_defaults().mutation_0to1 == 0.001);
    CHECK(GaConfig::gga_defaults().population_size == 51);
    CHECK(GaConfig::gga_defaults().crossover_rate == 0.6);
    CHECK(GaConfig::chc_defaults().population_size == 50);
    CHECK(GaConfig::chc_defaults().restart_change == 0.35);
    GaConfig bad;
    bad.population_size = 1;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = {};
    bad.mutation_0to1 = 1.5;
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("searchers stay below the exhaustive optimum with monotone traces") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto d = oracle::random_dataset(seed, 4 + seed % 9, 2, 2);
        const double opt = oracle::exhaustive_optimum(d);
        const FitnessEvaluator eval(d);
        GaConfig cfg;
        cfg.max_evaluations = 2000;
        cfg.seed = seed;
        for (auto* search : {&gga_edit, &chc_edit, &ssma_edit}) {
            auto c = cfg;
            if (search == &gga_edit) c = GaConfig::gga_defaults(), c.max_evaluations = 2000, c.seed = seed;
            const auto r = (*search)(eval, c);
            CHECK(r.fitness <= opt + 1e-12);
            CHECK(r.fitness == doctest::Approx(oracle::fitness(d, to_bools(r.mask))).epsilon(1e-12));
            CHECK(r.evaluations <= c.max_evaluations);
            check_trace(r);
        }
    }
}

TEST_CASE("searchers are reproducible under a seed") {
    const auto d = generate({SynthKind::Banana, 120, 1.0, 4});
    const FitnessEvaluator eval(d);
    GaConfig cfg;
    cfg.max_evaluations = 1500;
    cfg.seed = 99;
    for (auto* search : {&gga_edit, &chc_edit, &ssma_edit}) {
        const auto a = (*search)(eval, cfg);
        const auto b = (*search)(eval, cfg);
        CHECK(a.mask == b.mask);
        CHECK(a.fitness == b.fitness);
        CHECK(a.evaluations == b.evaluations);
    }
}

TEST_CASE("one GGA generation returns the best initial chromosome") {
    const auto d = generate({SynthKind::GaussianOverlap, 60, 0.5, 5});
    const FitnessEvaluator eval(d);
    auto cfg = GaConfig::gga_defaults();
    cfg.max_evaluations = cfg.population_size;
    cfg.seed = 3;
    const auto r = gga_edit(eval, cfg);
    CHECK(r.evaluations == cfg.population_size);
    double best = kEmptyMaskFitness;
    for (const auto& p : r.trace) best = std::max(best, p.fitness);
    CHECK(r.fitness == best);
}

TEST_CASE("SSMA with a population of two") {
    const auto d = oracle::planted_noise_6();
    const FitnessEvaluator eval(d);
    auto cfg = GaConfig::ssma_defaults();
    cfg.population_size = 2;
    cfg.max_evaluations = 4;
    const auto r = ssma_edit(eval, cfg);
    CHECK(r.evaluations <= 4);
    CHECK(r.evaluations >= 3);
    check_trace(r);
}

TEST_CASE("SSMA reaches the optimum on the planted 6-point set") {
    const auto d = oracle::planted_noise_6();
    const double opt = oracle::exhaustive_optimum(d);
    const FitnessEvaluator eval(d);
    auto cfg = GaConfig::ssma_defaults();
    cfg.seed = 1;
    const auto r = ssma_edit(eval, cfg);
    CHECK(r.fitness >= opt - 0.02);
    CHECK(r.fitness >= eval(SelectionMask::full(d.size())));

    auto g = GaConfig::gga_defaults();
    g.seed = 1;
    CHECK(gga_edit(eval, g).fitness >= eval(SelectionMask::full(d.size())));
}

TEST_CASE("trace file format") {
    std::ostringstream out;
    write_trace(out, {{1, 0.5, 3, 0.5}, {2, 0.25, 2, 0.5}});
    CHECK(out.str() == "evaluation,fitness,retained,best_fitness\n1,0.5,3,0.5\n2,0.25,2,0.5\n");
}
