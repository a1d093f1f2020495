#include <cmath>
#include <cstddef>

#include "phasespace/detail/kernel_polys.hpp"
#include "phasespace/simd.hpp"

namespace phasespace::simd {
namespace {

using namespace detail;

double tanh_small(double x) {
    double x2 = x * x;
    double p = kTanhOdd[9];
    for (int k = 8; k >= 0; --k) p = p * x2 + kTanhOdd[k];
    return x * p;
}

double logcosh_small(double x) {
    double x2 = x * x;
    double p = kLogcoshEven[9];
    for (int k = 8; k >= 0; --k) p = p * x2 + kLogcoshEven[k];
    return x2 * p;
}

void exp_batch(const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = std::exp(x[i]);
}

void sincos_batch(const double* x, double* s, double* c, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        s[i] = std::sin(x[i]);
        c[i] = std::cos(x[i]);
    }
}

double tanh_one(double x) {
    if (std::abs(x) <= kSmallX) return tanh_small(x);
    return std::tanh(x);
}

void tanh_batch(const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] = tanh_one(x[i]);
}

void logcosh_batch(const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double a = std::abs(x[i]);
        if (a <= kSmallX) {
            y[i] = logcosh_small(a);
        } else {
            y[i] = a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453094172321214581766;
        }
    }
}

void tanh_sech2_batch(const double* x, double* t, double* d, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double a = std::abs(x[i]);
        double u = std::exp(-2.0 * a);
        double opu = 1.0 + u;
        d[i] = 4.0 * u / (opu * opu);
        t[i] = tanh_one(x[i]);
    }
}

double dot(const double* a, const double* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double a, const double* x, double* y, size_t n) {
    for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void sym_rank_update(double* S, size_t n, const double* rows, const double* w, size_t batch) {
    for (size_t b = 0; b < batch; ++b) {
        const double* o = rows + b * n;
        double wb = w[b];
        for (size_t i = 0; i < n; ++i) {
            double f = wb * o[i];
            double* Si = S + i * n;
            for (size_t j = 0; j <= i; ++j) Si[j] += f * o[j];
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table = {
        "scalar",  exp_batch, sincos_batch,    tanh_batch,
        logcosh_batch, tanh_sech2_batch, dot, axpy, sym_rank_update,
    };
    return table;
}

}  // namespace phasespace::simd
