#pragma once

#include "dsedit/dataset.hpp"

#include <cstdint>
#include <string_view>

namespace dsedit {

enum class SynthKind { Banana, GaussianOverlap, SeparableGaussians, NoisyRing };

std::string_view to_string(SynthKind k);
SynthKind parse_synth_kind(std::string_view name);

/// Two-class, two-dimensional generators. `noise` means:
///  - Banana: standard deviation of the Gaussian jitter around two
///    interleaved arcs of radius 5 (the usual setting is 1).
///  - GaussianOverlap: extra spread; classes are N((-1,0), s) and N((1,0), s)
///    with s = 1 + noise.
///  - SeparableGaussians: classes at (-5,0) and (5,0) with s = 1 + noise.
///  - NoisyRing: fraction of flipped labels; class 0 fills the unit disc,
///    class 1 the annulus 1.5 <= r <= 2.5.
struct SynthSpec {
    SynthKind kind = SynthKind::Banana;
    std::size_t n = 1000;
    double noise = 1.0;
    std::uint64_t seed = 0;
};

/// Deterministic under the seed; class sizes differ by at most one.
Dataset generate(const SynthSpec& spec);

} // namespace dsedit
