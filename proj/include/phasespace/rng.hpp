#pragma once

#include <cstdint>

namespace phasespace {

/// PCG64 (XSL-RR 128/64). Distinct `stream` values give statistically
/// independent sequences for the same seed, which is how per-chain RNGs
/// are derived.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(uint64_t seed, uint64_t stream);

    uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on (0, 1]; never returns zero, safe under log().
    double uniform_pos();

    /// Standard normal via Box-Muller, one value cached.
    double normal();

private:
    unsigned __int128 state_;
    unsigned __int128 inc_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

/// SplitMix64; used to expand a user seed into stream/state material.
uint64_t splitmix64(uint64_t& state);

}  // namespace phasespace
