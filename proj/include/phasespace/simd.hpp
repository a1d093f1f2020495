#pragma once

#include <cstddef>
#include <string>

namespace phasespace::simd {

/// Batched numeric kernels behind a runtime-dispatched function table.
/// The scalar table is the reference; vector tables must agree with it to
/// tight relative tolerance (see equivalence tests). Per-process the active
/// table is fixed, so runs are bitwise reproducible for a given selection.
struct Ops {
    const char* name;

    void (*exp_batch)(const double* x, double* y, size_t n);
    // s[i] = sin(x[i]), c[i] = cos(x[i])
    void (*sincos_batch)(const double* x, double* s, double* c, size_t n);
    void (*tanh_batch)(const double* x, double* y, size_t n);
    // y[i] = log(cosh(x[i]))
    void (*logcosh_batch)(const double* x, double* y, size_t n);
    // t[i] = tanh(x[i]), d[i] = sech^2(x[i])
    void (*tanh_sech2_batch)(const double* x, double* t, double* d, size_t n);

    double (*dot)(const double* a, const double* b, size_t n);
    void (*axpy)(double a, const double* x, double* y, size_t n);

    // S (n x n, row-major) += sum_b w[b] * rows[b] rows[b]^T, lower triangle
    // (i >= j) only; entries above the diagonal are scratch. rows is
    // batch x n row-major.
    void (*sym_rank_update)(double* S, size_t n, const double* rows, const double* w,
                            size_t batch);
};

/// Active table: best available instruction set, overridable with
/// PHASESPACE_SIMD=scalar|avx2 (read once).
const Ops& ops();

const Ops& scalar_ops();

/// Null unless compiled in and supported by the CPU.
const Ops* avx2_ops();

bool avx2_supported();

/// Name of the active table ("scalar", "avx2").
std::string active_name();

}  // namespace phasespace::simd
