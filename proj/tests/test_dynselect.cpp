#include "dsedit/dynselect.hpp"
#include "dsedit/random.hpp"
#include "dsedit/synth.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace dsedit;

namespace {

// Member whose prediction is `cls` everywhere.
LinearClassifier constant(std::size_t classes, std::size_t features, ClassId cls) {
    std::vector<double> w(classes * (features + 1), 0.0);
    w[static_cast<std::size_t>(cls) * (features + 1) + features] = 1.0;
    return LinearClassifier(classes, features, std::move(w));
}

// Hand-built cache: members predict `query_pred` for any query and
// `table[m][j]` on DSEL row j.
ClassifierPool hand_pool(const Dataset& dsel, const std::vector<ClassId>& query_pred,
                         const std::vector<std::vector<ClassId>>& table) {
    ClassifierPool p;
    p.num_classes = dsel.num_classes();
    p.num_features = dsel.num_features();
    for (auto c : query_pred) {
        p.members.push_back(constant(p.num_classes, p.num_features, c));
        p.bag_seeds.push_back(0);
    }
    p.cache_rows = dsel.size();
    p.cache_labels = dsel.labels();
    for (const auto& row : table)
        for (auto c : row) p.cache.push_back(c);
    p.score_cache.assign(p.size() * p.cache_rows * p.num_classes, 0.0);
    for (std::size_t m = 0; m < p.size(); ++m)
        for (std::size_t j = 0; j < p.cache_rows; ++j)
            p.score_cache[(m * p.cache_rows + j) * p.num_classes + static_cast<std::size_t>(table[m][j])] = 1.0;
    return p;
}

// Seven DSEL rows on a line; the query at -0.5 orders the region 0..6.
struct Scenario {
    Dataset dsel = Dataset::from_rows("line", {{0}, {1}, {2}, {3}, {4}, {5}, {6}}, {0, 0, 1, 0, 1, 1, 0}, 2);
    ClassifierPool pool = hand_pool(dsel, {0, 1, 1},
                                    {{0, 0, 1, 0, 1, 1, 1},   // right on the nearest 6
                                     {1, 0, 1, 0, 1, 1, 0},   // wrong only on the nearest
                                     {0, 1, 0, 1, 1, 1, 1}}); // right on 0, 4, 5
    std::vector<double> query{-0.5};
};

} // namespace

TEST_CASE("region of competence") {
    const auto dsel = generate({SynthKind::Banana, 250, 1.0, 1});
    const std::vector<double> q{0.0, 0.0};
    CHECK(region_of_competence(q, dsel, 7).size() == 7);
    const auto small = dsel.subset(std::vector<std::size_t>{0, 1, 2});
    CHECK(region_of_competence(q, small, 3).size() == 3);
    CHECK_THROWS_AS(region_of_competence(q, small, 8), DataError);
}

TEST_CASE("hand-built 3x7 scenario, every method") {
    Scenario s;
    const auto region = region_of_competence(s.query, s.dsel, 7);
    CHECK(region.indices == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6});

    const auto ola = ola_competence(s.pool, region);
    CHECK(ola == std::vector<double>{6.0 / 7, 6.0 / 7, 3.0 / 7});

    const std::vector<ClassId> pred{0, 1, 1};
    const auto lca = lca_competence(s.pool, region, pred);
    CHECK(lca[0] == doctest::Approx(0.75));
    CHECK(lca[1] == 1.0);
    CHECK(lca[2] == doctest::Approx(2.0 / 3));

    const auto e = knora_select(s.pool, region, KnoraMode::Eliminate);
    CHECK(e.members == std::vector<std::size_t>{0});
    CHECK(e.region_used == 6);

    const auto u = knora_select(s.pool, region, KnoraMode::Union);
    CHECK(u.members == std::vector<std::size_t>{0, 1, 2});
    CHECK(u.weights == std::vector<std::size_t>{6, 6, 3});

    // Nothing agrees with (0,1,1) on 70% of members, so MCB keeps the region.
    CHECK(mcb_competence(s.pool, region, pred, 0.7) == ola);

    CHECK(ds_predict(DsMethod::OLA, s.pool, s.dsel, s.query, 7) == 0);     // tie -> member 0
    CHECK(ds_predict(DsMethod::LCA, s.pool, s.dsel, s.query, 7) == 1);     // member 1
    CHECK(ds_predict(DsMethod::MCB, s.pool, s.dsel, s.query, 7) == 0);
    CHECK(ds_predict(DsMethod::KNORAE, s.pool, s.dsel, s.query, 7) == 0);  // member 0 after a shrink
    CHECK(ds_predict(DsMethod::KNORAU, s.pool, s.dsel, s.query, 7) == 1);  // 9 votes to 6
    CHECK(ds_predict(DsMethod::APriori, s.pool, s.dsel, s.query, 7) == 0); // hard supports = OLA, weighted
}

TEST_CASE("OLA and LCA counting rules") {
    Scenario s;
    const auto region = region_of_competence(s.query, s.dsel, 7);
    // Member 0 over the nearest 4 only: 4 of 4.
    RegionOfCompetence four{{0, 1, 2, 3}, {0.5, 1.5, 2.5, 3.5}};
    CHECK(ola_competence(s.pool, four)[0] == 1.0);
    CHECK(ola_competence(s.pool, four)[2] == 0.25);

    // No region row carries the predicted label -> 0.
    RegionOfCompetence zeros{{0, 1}, {0.5, 1.5}};
    const std::vector<ClassId> pred{1, 1, 1};
    CHECK(lca_competence(s.pool, zeros, pred) == std::vector<double>{0.0, 0.0, 0.0});
    (void)region;
}

TEST_CASE("MCB with a single matching signature") {
    Scenario s;
    RegionOfCompetence three{{0, 1, 2}, {0.5, 1.5, 2.5}};
    const std::vector<ClassId> sig{1, 1, 0}; // row 2's signature
    CHECK(mcb_filter(s.pool, three, sig, 1.0) == std::vector<std::size_t>{2});
    CHECK(mcb_competence(s.pool, three, sig, 1.0) == std::vector<double>{1.0, 1.0, 0.0});
    // sigma = 0 keeps everything and equals OLA.
    CHECK(mcb_competence(s.pool, three, sig, 0.0) == ola_competence(s.pool, three));
}

TEST_CASE("A Priori distance weighting") {
    const auto dsel = Dataset::from_rows("ap", {{1.0}, {3.0}}, {0, 0}, 2);
    auto pool = hand_pool(dsel, {0}, {{0, 0}});
    pool.score_cache = {0.9, 0.1, 0.3, 0.7};
    const std::vector<double> q{0.0};
    const auto region = region_of_competence(q, dsel, 2);
    CHECK(apriori_competence(pool, region)[0] == doctest::Approx(0.75).epsilon(1e-9));

    pool.score_cache = {0.5, 0.5, 0.5, 0.5};
    CHECK(apriori_competence(pool, region)[0] == doctest::Approx(0.5));
    pool.score_cache = {1.0, 0.0, 1.0, 0.0};
    CHECK(apriori_competence(pool, region)[0] == doctest::Approx(1.0));
}

TEST_CASE("degenerate pools") {
    const auto train = generate({SynthKind::Banana, 300, 1.0, 2});
    const auto dsel = generate({SynthKind::Banana, 100, 1.0, 3});
    const auto test = generate({SynthKind::Banana, 50, 1.0, 4});
    const auto one = build_cache(bagging_pool(train, 1, 1), dsel);
    for (auto m : kAllDsMethods)
        for (std::size_t i = 0; i < test.size(); ++i)
            CHECK(ds_predict(m, one, dsel, test.row(i), 7) == one.members[0].predict(test.row(i)));

    auto same = one;
    for (int r = 0; r < 4; ++r) same.members.push_back(one.members[0]);
    same.bag_seeds.assign(5, one.bag_seeds[0]);
    same = build_cache(same, dsel);
    for (auto m : kAllDsMethods)
        for (std::size_t i = 0; i < test.size(); ++i)
            CHECK(ds_predict(m, same, dsel, test.row(i), 7) == one.members[0].predict(test.row(i)));
}

TEST_CASE("competences agree with a cache-free recomputation and stay in [0,1]") {
    const auto train = generate({SynthKind::Banana, 300, 1.0, 5});
    const auto dsel = generate({SynthKind::Banana, 120, 1.0, 6});
    const auto test = generate({SynthKind::Banana, 40, 1.0, 7});
    const auto pool = build_cache(bagging_pool(train, 15, 2), dsel);
    for (std::size_t q = 0; q < test.size(); ++q) {
        const auto region = region_of_competence(test.row(q), dsel, 7);
        const auto pred = pool.predict_all(test.row(q));
        const auto ola = ola_competence(pool, region);
        for (std::size_t m = 0; m < pool.size(); ++m) {
            std::size_t hits = 0;
            for (auto j : region.indices) hits += pool.members[m].predict(dsel.row(j)) == dsel.label(j) ? 1 : 0;
            CHECK(ola[m] == static_cast<double>(hits) / 7.0);

            std::size_t tot = 0, lh = 0;
            for (auto j : region.indices) {
                if (dsel.label(j) != pred[m]) continue;
                ++tot;
                lh += pool.members[m].predict(dsel.row(j)) == dsel.label(j) ? 1 : 0;
            }
            CHECK(lca_competence(pool, region, pred)[m] ==
                  (tot ? static_cast<double>(lh) / static_cast<double>(tot) : 0.0));
        }
        for (const auto& v : {ola, lca_competence(pool, region, pred), apriori_competence(pool, region),
                              mcb_competence(pool, region, pred)})
            for (double c : v) {
                CHECK(c >= 0.0);
                CHECK(c <= 1.0);
            }
        const auto e = knora_select(pool, region, KnoraMode::Eliminate);
        const auto u = knora_select(pool, region, KnoraMode::Union);
        if (e.region_used == 7)
            for (auto m : e.members) CHECK(std::find(u.members.begin(), u.members.end(), m) != u.members.end());
    }
}

TEST_CASE("ds_predict ignores DSEL row order") {
    const auto train = generate({SynthKind::Banana, 300, 1.0, 8});
    const auto dsel = generate({SynthKind::Banana, 120, 1.0, 9});
    const auto test = generate({SynthKind::Banana, 60, 1.0, 10});
    const auto pool = bagging_pool(train, 20, 3);
    std::vector<std::size_t> perm(dsel.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(1);
    shuffle(perm.begin(), perm.end(), rng);
    const auto shuffled = dsel.subset(perm);
    const auto a = build_cache(pool, dsel);
    const auto b = build_cache(pool, shuffled);
    for (auto m : kAllDsMethods)
        CHECK(ds_predict_all(m, a, dsel, test, 7) == ds_predict_all(m, b, shuffled, test, 7));
}

TEST_CASE("OLA over the whole DSEL is static selection") {
    const auto train = generate({SynthKind::GaussianOverlap, 200, 0.5, 1});
    const auto dsel = generate({SynthKind::GaussianOverlap, 60, 0.5, 2});
    const auto pool = build_cache(bagging_pool(train, 10, 4), dsel);
    std::vector<double> global(pool.size());
    for (std::size_t m = 0; m < pool.size(); ++m) {
        std::size_t hits = 0;
        for (std::size_t j = 0; j < dsel.size(); ++j) hits += pool.cached_correct(m, j) ? 1 : 0;
        global[m] = static_cast<double>(hits);
    }
    const auto best = argmax_lowest(global);
    const std::vector<double> q{0.3, 0.1};
    CHECK(ds_predict(DsMethod::OLA, pool, dsel, q, dsel.size()) == pool.members[best].predict(q));
}

TEST_CASE("ds_predict rejects a stale cache and unknown names") {
    Scenario s;
    const auto smaller = s.dsel.subset(std::vector<std::size_t>{0, 1, 2});
    CHECK_THROWS_AS(ds_predict(DsMethod::OLA, s.pool, smaller, s.query, 3), DataError);
    CHECK(parse_ds_method("knora-e") == DsMethod::KNORAE);
    CHECK(parse_ds_method("OLA") == DsMethod::OLA);
    CHECK_THROWS_AS(parse_ds_method("META-DES"), DataError);
}
