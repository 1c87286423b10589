#include "dsedit/synth.hpp"

#include "dsedit/random.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace dsedit {

std::string_view to_string(SynthKind k) {
    switch (k) {
    case SynthKind::Banana: return "banana";
    case SynthKind::GaussianOverlap: return "gaussian_overlap";
    case SynthKind::SeparableGaussians: return "separable_gaussians";
    case SynthKind::NoisyRing: return "noisy_ring";
    }
    return "?";
}

SynthKind parse_synth_kind(std::string_view name) {
    std::string key;
    for (char c : name) key.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (key == "banana") return SynthKind::Banana;
    if (key == "gaussian_overlap") return SynthKind::GaussianOverlap;
    if (key == "separable_gaussians") return SynthKind::SeparableGaussians;
    if (key == "noisy_ring") return SynthKind::NoisyRing;
    throw DataError("unknown synthetic dataset kind '" + std::string(name) + "'");
}

Dataset generate(const SynthSpec& spec) {
    if (spec.n < 10) throw DataError("synthetic datasets need n >= 10");
    if (!(spec.noise >= 0.0) || !std::isfinite(spec.noise)) throw DataError("synthetic noise must be >= 0");
    if (spec.kind == SynthKind::NoisyRing && spec.noise >= 1.0)
        throw DataError("noisy_ring label-noise fraction must be < 1");

    Rng rng(spec.seed);
    constexpr double pi = std::numbers::pi;
    std::vector<double> feats;
    feats.reserve(spec.n * 2);
    std::vector<ClassId> labels(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) labels[i] = static_cast<ClassId>(i % 2);
    shuffle(labels.begin(), labels.end(), rng);

    for (std::size_t i = 0; i < spec.n; ++i) {
        const bool b = labels[i] == 1;
        double x = 0.0, y = 0.0;
        switch (spec.kind) {
        case SynthKind::Banana: {
            constexpr double r = 5.0;
            if (!b) {
                const double t = 0.125 * pi + uniform01(rng) * 1.25 * pi;
                x = r * std::sin(t);
                y = r * std::cos(t);
            } else {
                const double t = 0.375 * pi - uniform01(rng) * 1.25 * pi;
                x = r * std::sin(t) - 0.75 * r;
                y = r * std::cos(t) - 0.75 * r;
            }
            x += spec.noise * standard_normal(rng);
            y += spec.noise * standard_normal(rng);
            break;
        }
        case SynthKind::GaussianOverlap:
        case SynthKind::SeparableGaussians: {
            const double centre = spec.kind == SynthKind::GaussianOverlap ? 1.0 : 5.0;
            const double s = 1.0 + spec.noise;
            x = (b ? centre : -centre) + s * standard_normal(rng);
            y = s * standard_normal(rng);
            break;
        }
        case SynthKind::NoisyRing: {
            const double t = 2.0 * pi * uniform01(rng);
            // Area-uniform radius in each region.
            const double r = b ? std::sqrt(1.5 * 1.5 + uniform01(rng) * (2.5 * 2.5 - 1.5 * 1.5))
                               : std::sqrt(uniform01(rng));
            x = r * std::cos(t);
            y = r * std::sin(t);
            if (uniform01(rng) < spec.noise) labels[i] = b ? 0 : 1;
            break;
        }
        }
        feats.push_back(x);
        feats.push_back(y);
    }
    return Dataset(std::string(to_string(spec.kind)), 2, 2, std::move(feats), std::move(labels), {"0", "1"});
}

} // namespace dsedit
