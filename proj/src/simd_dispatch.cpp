#include "phasespace/simd.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace phasespace::simd {

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma") &&
           avx2_ops() != nullptr;
#else
    return false;
#endif
}

namespace {
const Ops* select() {
    if (const char* env = std::getenv("PHASESPACE_SIMD")) {
        std::string want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2") {
            if (!avx2_supported())
                throw std::runtime_error("PHASESPACE_SIMD=avx2 requested but AVX2 is unavailable");
            return avx2_ops();
        }
        if (!want.empty())
            throw std::runtime_error("unknown PHASESPACE_SIMD value: " + want);
    }
    if (avx2_supported()) return avx2_ops();
    return &scalar_ops();
}
}  // namespace

const Ops& ops() {
    static const Ops* active = select();
    return *active;
}

std::string active_name() { return ops().name; }

}  // namespace phasespace::simd
