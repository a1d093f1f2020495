#include "phasespace/rng.hpp"

#include <cmath>

namespace phasespace {

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {
constexpr unsigned __int128 kMult =
    (static_cast<unsigned __int128>(2549297995355413924ull) << 64) | 4865540595714422341ull;

unsigned __int128 make128(uint64_t hi, uint64_t lo) {
    return (static_cast<unsigned __int128>(hi) << 64) | lo;
}
}  // namespace

Rng::Rng(uint64_t seed, uint64_t stream) {
    uint64_t sm = seed;
    uint64_t s0 = splitmix64(sm);
    uint64_t s1 = splitmix64(sm);
    uint64_t sm2 = stream ^ 0xda3e39cb94b95bdbull;
    uint64_t i0 = splitmix64(sm2);
    uint64_t i1 = splitmix64(sm2);
    inc_ = (make128(i0, i1) << 1) | 1;
    state_ = 0;
    next_u64();
    state_ += make128(s0, s1);
    next_u64();
}

uint64_t Rng::next_u64() {
    unsigned __int128 old = state_;
    state_ = old * kMult + inc_;
    uint64_t xored = static_cast<uint64_t>(old >> 64) ^ static_cast<uint64_t>(old);
    unsigned rot = static_cast<unsigned>(old >> 122);
    return (xored >> rot) | (xored << ((64u - rot) & 63u));
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_pos() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::normal() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    double u1 = uniform_pos();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * 3.141592653589793238462643383279502884 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
}

}  // namespace phasespace
