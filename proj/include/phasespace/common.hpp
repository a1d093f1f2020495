#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace phasespace {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised when a configuration, model, or file is structurally invalid.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when ansatz parameters become unusable (degenerate covariance,
/// non-integrable tails, non-finite entries).
class AnsatzError : public std::runtime_error {
public:
    explicit AnsatzError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a sampler cannot make progress (all proposals rejected,
/// non-finite log-density).
class SamplerError : public std::runtime_error {
public:
    explicit SamplerError(const std::string& msg) : std::runtime_error(msg) {}
};

class CompileError : public std::runtime_error {
public:
    explicit CompileError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// FNV-1a 64-bit running hash; used for content hashes of models and grids.
struct Fnv1a {
    unsigned long long state = 1469598103934665603ull;
    void feed(const void* data, size_t n) {
        const unsigned char* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < n; ++i) {
            state ^= p[i];
            state *= 1099511628211ull;
        }
    }
    void feed(const std::string& s) { feed(s.data(), s.size()); }
    void feed(double v) { feed(&v, sizeof v); }
    void feed(int v) { feed(&v, sizeof v); }
    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(16, '0');
        unsigned long long v = state;
        for (int i = 15; i >= 0; --i) {
            out[i] = digits[v & 0xf];
            v >>= 4;
        }
        return out;
    }
};

/// Round-trip decimal formatting for doubles written to text artifacts.
std::string format_double(double v);

}  // namespace phasespace
