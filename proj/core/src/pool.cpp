#include "dsedit/pool.hpp"

#include "dsedit/parallel.hpp"
#include "dsedit/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

namespace dsedit {

LinearClassifier::LinearClassifier(std::size_t num_classes, std::size_t num_features)
    : num_classes_(num_classes),
      num_features_(num_features),
      weights_(num_classes * (num_features + 1), 0.0) {}

LinearClassifier::LinearClassifier(std::size_t num_classes, std::size_t num_features,
                                   std::vector<double> weights)
    : num_classes_(num_classes), num_features_(num_features), weights_(std::move(weights)) {
    if (weights_.size() != num_classes_ * (num_features_ + 1))
        throw DataError("linear classifier weight matrix has the wrong shape");
    for (double w : weights_)
        if (!std::isfinite(w)) throw DataError("linear classifier has a non-finite weight");
}

double LinearClassifier::score(std::span<const double> x, std::size_t c) const {
    const auto w = class_row(c);
    double s = w[num_features_];
    for (std::size_t j = 0; j < num_features_; ++j) s += w[j] * x[j];
    return s;
}

void LinearClassifier::scores(std::span<const double> x, std::span<double> out) const {
    if (x.size() != num_features_)
        throw DataError("classifier expects " + std::to_string(num_features_) + " features, got " +
                        std::to_string(x.size()));
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] = score(x, c);
}

ClassId LinearClassifier::predict(std::span<const double> x) const {
    if (x.size() != num_features_)
        throw DataError("classifier expects " + std::to_string(num_features_) + " features, got " +
                        std::to_string(x.size()));
    std::size_t best = 0;
    double best_score = score(x, 0);
    for (std::size_t c = 1; c < num_classes_; ++c) {
        const double s = score(x, c);
        if (s > best_score) {
            best_score = s;
            best = c;
        }
    }
    return static_cast<ClassId>(best);
}

LinearClassifier train_perceptron(const Dataset& train, const PerceptronParams& params,
                                  std::uint64_t seed) {
    if (train.empty()) throw DataError("cannot train a perceptron on an empty dataset");
    if (params.epochs == 0) throw DataError("perceptron needs at least one epoch");
    if (!(params.learning_rate > 0.0)) throw DataError("perceptron learning rate must be positive");

    const std::size_t d = train.num_features();
    const std::size_t k = train.num_classes();
    LinearClassifier model(k, d);
    Rng rng(seed);
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        shuffle(order.begin(), order.end(), rng);
        bool any_update = false;
        for (auto i : order) {
            const auto x = train.row(i);
            const auto y = static_cast<std::size_t>(train.label(i));
            for (std::size_t c = 0; c < k; ++c) {
                const double t = c == y ? 1.0 : -1.0;
                if (t * model.score(x, c) > 0.0) continue;
                auto w = model.class_row(c);
                const double step = params.learning_rate * t;
                for (std::size_t j = 0; j < d; ++j) w[j] += step * x[j];
                w[d] += step;
                any_update = true;
            }
        }
        if (!any_update) break;
    }
    return model;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::size_t> idx(n);
    for (auto& i : idx) i = static_cast<std::size_t>(uniform_index(rng, n));
    return idx;
}

void normalize_scores(std::span<double> scores) {
    if (scores.empty()) return;
    const double top = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (auto& s : scores) {
        s = std::exp(s - top);
        sum += s;
    }
    for (auto& s : scores) s /= sum;
}

std::vector<ClassId> ClassifierPool::predict_all(std::span<const double> x) const {
    std::vector<ClassId> out(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) out[i] = members[i].predict(x);
    return out;
}

ClassifierPool bagging_pool(const Dataset& train, std::size_t pool_size, std::uint64_t seed,
                            const PerceptronParams& params, unsigned jobs) {
    if (pool_size == 0) throw DataError("pool size must be at least 1");
    if (train.empty()) throw DataError("cannot train a pool on an empty dataset");
    ClassifierPool pool;
    pool.num_classes = train.num_classes();
    pool.num_features = train.num_features();
    pool.bag_seeds.resize(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) pool.bag_seeds[i] = derive_seed(seed, {i});
    pool.members.resize(pool_size);
    parallel_for(pool_size, jobs, [&](std::size_t i) {
        const auto bag = bootstrap_indices(train.size(), pool.bag_seeds[i]);
        pool.members[i] = train_perceptron(train.subset(bag), params, pool.bag_seeds[i]);
    });
    return pool;
}

ClassifierPool build_cache(ClassifierPool pool, const Dataset& dsel) {
    if (dsel.empty()) throw DataError("cannot build a prediction cache over an empty set");
    if (dsel.num_features() != pool.num_features)
        throw DataError("pool expects " + std::to_string(pool.num_features) +
                        " features, selection set has " + std::to_string(dsel.num_features()));
    if (dsel.num_classes() > pool.num_classes)
        throw DataError("selection set has more classes than the pool");

    const std::size_t m = pool.members.size();
    const std::size_t n = dsel.size();
    const std::size_t k = pool.num_classes;
    pool.cache_rows = n;
    pool.cache.assign(m * n, 0);
    pool.score_cache.assign(m * n * k, 0.0);
    pool.cache_labels = dsel.labels();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto x = dsel.row(j);
            pool.cache[i * n + j] = pool.members[i].predict(x);
            std::span<double> s(pool.score_cache.data() + (i * n + j) * k, k);
            pool.members[i].scores(x, s);
            normalize_scores(s);
        }
    }
    return pool;
}

// ---------------------------------------------------------------------------
// Serialisation

namespace {

constexpr const char* kPoolMagic = "dsedit-pool";
constexpr int kPoolVersion = 1;

void put_double(std::ostream& out, double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    out.write(buf.data(), res.ptr - buf.data());
}

double get_double(std::istream& in) {
    std::string tok;
    if (!(in >> tok)) throw DataError("pool file truncated");
    double v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw DataError("pool file: bad number '" + tok + "'");
    return v;
}

template <class T>
T get_int(std::istream& in) {
    T v{};
    if (!(in >> v)) throw DataError("pool file truncated");
    return v;
}

void expect(std::istream& in, const std::string& word) {
    std::string tok;
    if (!(in >> tok) || tok != word)
        throw DataError("pool file: expected '" + word + "', found '" + tok + "'");
}

} // namespace

void write_pool(std::ostream& out, const ClassifierPool& pool) {
    out << kPoolMagic << ' ' << kPoolVersion << '\n';
    out << "members " << pool.members.size() << " classes " << pool.num_classes << " features "
        << pool.num_features << '\n';
    for (std::size_t i = 0; i < pool.members.size(); ++i) {
        out << "member " << pool.bag_seeds[i];
        for (double w : pool.members[i].weights()) {
            out << ' ';
            put_double(out, w);
        }
        out << '\n';
    }
    out << "cache " << pool.cache_rows << '\n';
    if (pool.cache_rows == 0) return;
    out << "labels";
    for (auto l : pool.cache_labels) out << ' ' << l;
    out << '\n';
    const std::size_t n = pool.cache_rows;
    const std::size_t k = pool.num_classes;
    for (std::size_t i = 0; i < pool.members.size(); ++i) {
        out << "pred";
        for (std::size_t j = 0; j < n; ++j) out << ' ' << pool.cache[i * n + j];
        out << "\nsupport";
        for (std::size_t j = 0; j < n * k; ++j) {
            out << ' ';
            put_double(out, pool.score_cache[i * n * k + j]);
        }
        out << '\n';
    }
}

ClassifierPool read_pool(std::istream& in) {
    expect(in, kPoolMagic);
    if (const int version = get_int<int>(in); version != kPoolVersion)
        throw DataError("unsupported pool file version " + std::to_string(version));
    ClassifierPool pool;
    expect(in, "members");
    const auto m = get_int<std::size_t>(in);
    expect(in, "classes");
    pool.num_classes = get_int<std::size_t>(in);
    expect(in, "features");
    pool.num_features = get_int<std::size_t>(in);
    const std::size_t per_member = pool.num_classes * (pool.num_features + 1);
    for (std::size_t i = 0; i < m; ++i) {
        expect(in, "member");
        pool.bag_seeds.push_back(get_int<std::uint64_t>(in));
        std::vector<double> w(per_member);
        for (auto& v : w) v = get_double(in);
        pool.members.emplace_back(pool.num_classes, pool.num_features, std::move(w));
    }
    expect(in, "cache");
    pool.cache_rows = get_int<std::size_t>(in);
    if (pool.cache_rows == 0) return pool;
    const std::size_t n = pool.cache_rows;
    const std::size_t k = pool.num_classes;
    expect(in, "labels");
    pool.cache_labels.resize(n);
    for (auto& l : pool.cache_labels) l = get_int<ClassId>(in);
    pool.cache.resize(m * n);
    pool.score_cache.resize(m * n * k);
    for (std::size_t i = 0; i < m; ++i) {
        expect(in, "pred");
        for (std::size_t j = 0; j < n; ++j) pool.cache[i * n + j] = get_int<ClassId>(in);
        expect(in, "support");
        for (std::size_t j = 0; j < n * k; ++j) pool.score_cache[i * n * k + j] = get_double(in);
    }
    return pool;
}

} // namespace dsedit
