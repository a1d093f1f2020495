// AVX2+FMA variants of the batched kernels. This translation unit is the
// only one compiled with -mavx2 -mfma; everything else must stay generic.

#include "phasespace/simd.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "phasespace/detail/kernel_polys.hpp"

namespace phasespace::simd {
namespace {

using namespace detail;

inline __m256d exp4(__m256d x) {
    const __m256d lo = _mm256_set1_pd(kExpLo);
    const __m256d hi = _mm256_set1_pd(kExpHi);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kLog2E)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kLn2Lo), r);

    __m256d p = _mm256_set1_pd(kExpTaylor[13]);
    for (int i = 12; i >= 0; --i)
        p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpTaylor[i]));

    __m128i ki = _mm256_cvtpd_epi32(k);
    __m256i kq = _mm256_cvtepi32_epi64(ki);
    __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(kq, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline void sincos4(__m256d x, __m256d* sout, __m256d* cout) {
    __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPiO2Hi), x);
    r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPiO2Mid), r);
    r = _mm256_fnmadd_pd(k, _mm256_set1_pd(kPiO2Lo), r);

    __m256d r2 = _mm256_mul_pd(r, r);
    __m256d sp = _mm256_set1_pd(kSinOdd[7]);
    for (int i = 6; i >= 0; --i)
        sp = _mm256_fmadd_pd(sp, r2, _mm256_set1_pd(kSinOdd[i]));
    sp = _mm256_mul_pd(sp, r);
    __m256d cp = _mm256_set1_pd(kCosEven[8]);
    for (int i = 7; i >= 0; --i)
        cp = _mm256_fmadd_pd(cp, r2, _mm256_set1_pd(kCosEven[i]));

    __m128i ki = _mm256_cvtpd_epi32(k);
    __m128i one = _mm_and_si128(ki, _mm_set1_epi32(1));
    __m128i two = _mm_srli_epi32(_mm_and_si128(ki, _mm_set1_epi32(2)), 1);
    __m128i twop = _mm_srli_epi32(_mm_and_si128(_mm_add_epi32(ki, _mm_set1_epi32(1)),
                                                _mm_set1_epi32(2)),
                                  1);

    __m256d swap = _mm256_castsi256_pd(
        _mm256_cvtepi32_epi64(_mm_sub_epi32(_mm_setzero_si128(), one)));
    __m256d sbase = _mm256_blendv_pd(sp, cp, swap);
    __m256d cbase = _mm256_blendv_pd(cp, sp, swap);

    __m256d ssign = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_cvtepi32_epi64(two), 63));
    __m256d csign = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_cvtepi32_epi64(twop), 63));
    *sout = _mm256_xor_pd(sbase, ssign);
    *cout = _mm256_xor_pd(cbase, csign);
}

const __m256d kAbsMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
const __m256d kSignMask =
    _mm256_castsi256_pd(_mm256_set1_epi64x(0x8000000000000000ull));

inline __m256d tanh_small4(__m256d x) {
    __m256d x2 = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(kTanhOdd[9]);
    for (int i = 8; i >= 0; --i)
        p = _mm256_fmadd_pd(p, x2, _mm256_set1_pd(kTanhOdd[i]));
    return _mm256_mul_pd(x, p);
}

inline __m256d tanh4(__m256d x) {
    __m256d a = _mm256_and_pd(x, kAbsMask);
    __m256d small = _mm256_cmp_pd(a, _mm256_set1_pd(kSmallX), _CMP_LE_OQ);

    __m256d u = exp4(_mm256_mul_pd(a, _mm256_set1_pd(-2.0)));
    __m256d big = _mm256_div_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), u),
                                _mm256_add_pd(_mm256_set1_pd(1.0), u));
    big = _mm256_or_pd(big, _mm256_and_pd(x, kSignMask));

    return _mm256_blendv_pd(big, tanh_small4(x), small);
}

inline __m256d log1p4(__m256d u) {
    __m256d z = _mm256_div_pd(u, _mm256_add_pd(_mm256_set1_pd(2.0), u));
    __m256d z2 = _mm256_mul_pd(z, z);
    __m256d p = _mm256_set1_pd(1.0 / (2.0 * kLog1pTerms - 1.0));
    for (int i = kLog1pTerms - 2; i >= 0; --i)
        p = _mm256_fmadd_pd(p, z2, _mm256_set1_pd(1.0 / (2.0 * i + 1.0)));
    return _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), z), p);
}

inline __m256d logcosh4(__m256d x) {
    __m256d a = _mm256_and_pd(x, kAbsMask);
    __m256d small = _mm256_cmp_pd(a, _mm256_set1_pd(kSmallX), _CMP_LE_OQ);

    __m256d a2 = _mm256_mul_pd(a, a);
    __m256d q = _mm256_set1_pd(kLogcoshEven[9]);
    for (int i = 8; i >= 0; --i)
        q = _mm256_fmadd_pd(q, a2, _mm256_set1_pd(kLogcoshEven[i]));
    __m256d smallv = _mm256_mul_pd(a2, q);

    __m256d u = exp4(_mm256_mul_pd(a, _mm256_set1_pd(-2.0)));
    __m256d bigv = _mm256_sub_pd(
        _mm256_add_pd(a, log1p4(u)),
        _mm256_set1_pd(0.6931471805599453094172321214581766));

    return _mm256_blendv_pd(bigv, smallv, small);
}

void exp_batch(const double* x, double* y, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
    if (i < n) {
        double bx[4] = {0, 0, 0, 0}, by[4];
        for (size_t k = i; k < n; ++k) bx[k - i] = x[k];
        _mm256_storeu_pd(by, exp4(_mm256_loadu_pd(bx)));
        for (size_t k = i; k < n; ++k) y[k] = by[k - i];
    }
}

void sincos_batch(const double* x, double* s, double* c, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d sv, cv;
        sincos4(_mm256_loadu_pd(x + i), &sv, &cv);
        _mm256_storeu_pd(s + i, sv);
        _mm256_storeu_pd(c + i, cv);
    }
    if (i < n) {
        double bx[4] = {0, 0, 0, 0}, bs[4], bc[4];
        for (size_t k = i; k < n; ++k) bx[k - i] = x[k];
        __m256d sv, cv;
        sincos4(_mm256_loadu_pd(bx), &sv, &cv);
        _mm256_storeu_pd(bs, sv);
        _mm256_storeu_pd(bc, cv);
        for (size_t k = i; k < n; ++k) {
            s[k] = bs[k - i];
            c[k] = bc[k - i];
        }
    }
}

void tanh_batch(const double* x, double* y, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, tanh4(_mm256_loadu_pd(x + i)));
    if (i < n) {
        double bx[4] = {0, 0, 0, 0}, by[4];
        for (size_t k = i; k < n; ++k) bx[k - i] = x[k];
        _mm256_storeu_pd(by, tanh4(_mm256_loadu_pd(bx)));
        for (size_t k = i; k < n; ++k) y[k] = by[k - i];
    }
}

void logcosh_batch(const double* x, double* y, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, logcosh4(_mm256_loadu_pd(x + i)));
    if (i < n) {
        double bx[4] = {0, 0, 0, 0}, by[4];
        for (size_t k = i; k < n; ++k) bx[k - i] = x[k];
        _mm256_storeu_pd(by, logcosh4(_mm256_loadu_pd(bx)));
        for (size_t k = i; k < n; ++k) y[k] = by[k - i];
    }
}

void tanh_sech2_batch(const double* x, double* t, double* d, size_t n) {
    size_t i = 0;
    auto block = [](__m256d xv, __m256d* tv, __m256d* dv) {
        __m256d a = _mm256_and_pd(xv, kAbsMask);
        __m256d u = exp4(_mm256_mul_pd(a, _mm256_set1_pd(-2.0)));
        __m256d opu = _mm256_add_pd(_mm256_set1_pd(1.0), u);
        *dv = _mm256_div_pd(_mm256_mul_pd(_mm256_set1_pd(4.0), u),
                            _mm256_mul_pd(opu, opu));
        __m256d small = _mm256_cmp_pd(a, _mm256_set1_pd(kSmallX), _CMP_LE_OQ);
        __m256d big = _mm256_div_pd(_mm256_sub_pd(_mm256_set1_pd(1.0), u), opu);
        big = _mm256_or_pd(big, _mm256_and_pd(xv, kSignMask));
        *tv = _mm256_blendv_pd(big, tanh_small4(xv), small);
    };
    for (; i + 4 <= n; i += 4) {
        __m256d tv, dv;
        block(_mm256_loadu_pd(x + i), &tv, &dv);
        _mm256_storeu_pd(t + i, tv);
        _mm256_storeu_pd(d + i, dv);
    }
    if (i < n) {
        double bx[4] = {0, 0, 0, 0}, bt[4], bd[4];
        for (size_t k = i; k < n; ++k) bx[k - i] = x[k];
        __m256d tv, dv;
        block(_mm256_loadu_pd(bx), &tv, &dv);
        _mm256_storeu_pd(bt, tv);
        _mm256_storeu_pd(bd, dv);
        for (size_t k = i; k < n; ++k) {
            t[k] = bt[k - i];
            d[k] = bd[k - i];
        }
    }
}

double dot(const double* a, const double* b, size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    double lanes[4];
    _mm256_storeu_pd(lanes, acc0);
    double acc = lanes[0] + lanes[1] + lanes[2] + lanes[3];
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double a, const double* x, double* y, size_t n) {
    __m256d av = _mm256_set1_pd(a);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

// Four samples at a time, 8-wide column panels, full row updates from the
// panel's diagonal block downward. Entries above the diagonal inside the
// panel corner are scratch per the contract.
void rank_panel4(double* S, size_t n, const double* rows, const double* w) {
    const double* o0 = rows;
    const double* o1 = rows + n;
    const double* o2 = rows + 2 * n;
    const double* o3 = rows + 3 * n;
    __m256d w0 = _mm256_set1_pd(w[0]);
    __m256d w1 = _mm256_set1_pd(w[1]);
    __m256d w2 = _mm256_set1_pd(w[2]);
    __m256d w3 = _mm256_set1_pd(w[3]);

    size_t j0 = 0;
    for (; j0 + 8 <= n; j0 += 8) {
        __m256d wo0a = _mm256_mul_pd(w0, _mm256_loadu_pd(o0 + j0));
        __m256d wo0b = _mm256_mul_pd(w0, _mm256_loadu_pd(o0 + j0 + 4));
        __m256d wo1a = _mm256_mul_pd(w1, _mm256_loadu_pd(o1 + j0));
        __m256d wo1b = _mm256_mul_pd(w1, _mm256_loadu_pd(o1 + j0 + 4));
        __m256d wo2a = _mm256_mul_pd(w2, _mm256_loadu_pd(o2 + j0));
        __m256d wo2b = _mm256_mul_pd(w2, _mm256_loadu_pd(o2 + j0 + 4));
        __m256d wo3a = _mm256_mul_pd(w3, _mm256_loadu_pd(o3 + j0));
        __m256d wo3b = _mm256_mul_pd(w3, _mm256_loadu_pd(o3 + j0 + 4));
        for (size_t i = j0; i < n; ++i) {
            double* Si = S + i * n + j0;
            __m256d sa = _mm256_loadu_pd(Si);
            __m256d sb = _mm256_loadu_pd(Si + 4);
            __m256d bi;
            bi = _mm256_broadcast_sd(o0 + i);
            sa = _mm256_fmadd_pd(bi, wo0a, sa);
            sb = _mm256_fmadd_pd(bi, wo0b, sb);
            bi = _mm256_broadcast_sd(o1 + i);
            sa = _mm256_fmadd_pd(bi, wo1a, sa);
            sb = _mm256_fmadd_pd(bi, wo1b, sb);
            bi = _mm256_broadcast_sd(o2 + i);
            sa = _mm256_fmadd_pd(bi, wo2a, sa);
            sb = _mm256_fmadd_pd(bi, wo2b, sb);
            bi = _mm256_broadcast_sd(o3 + i);
            sa = _mm256_fmadd_pd(bi, wo3a, sa);
            sb = _mm256_fmadd_pd(bi, wo3b, sb);
            _mm256_storeu_pd(Si, sa);
            _mm256_storeu_pd(Si + 4, sb);
        }
    }
    if (j0 < n) {
        size_t jw = n - j0;
        for (int s = 0; s < 4; ++s) {
            const double* o = rows + s * n;
            double ws = w[s];
            for (size_t i = j0; i < n; ++i) {
                double f = ws * o[i];
                double* Si = S + i * n;
                for (size_t j = j0; j < j0 + jw; ++j) Si[j] += f * o[j];
            }
        }
    }
}

void rank_panel1(double* S, size_t n, const double* o, double ws) {
    __m256d wv = _mm256_set1_pd(ws);
    size_t j0 = 0;
    for (; j0 + 8 <= n; j0 += 8) {
        __m256d woa = _mm256_mul_pd(wv, _mm256_loadu_pd(o + j0));
        __m256d wob = _mm256_mul_pd(wv, _mm256_loadu_pd(o + j0 + 4));
        for (size_t i = j0; i < n; ++i) {
            double* Si = S + i * n + j0;
            __m256d bi = _mm256_broadcast_sd(o + i);
            _mm256_storeu_pd(Si, _mm256_fmadd_pd(bi, woa, _mm256_loadu_pd(Si)));
            _mm256_storeu_pd(Si + 4, _mm256_fmadd_pd(bi, wob, _mm256_loadu_pd(Si + 4)));
        }
    }
    if (j0 < n) {
        for (size_t i = j0; i < n; ++i) {
            double f = ws * o[i];
            double* Si = S + i * n;
            for (size_t j = j0; j < n; ++j) Si[j] += f * o[j];
        }
    }
}

void sym_rank_update(double* S, size_t n, const double* rows, const double* w, size_t batch) {
    size_t b = 0;
    for (; b + 4 <= batch; b += 4) rank_panel4(S, n, rows + b * n, w + b);
    for (; b < batch; ++b) rank_panel1(S, n, rows + b * n, w[b]);
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops table = {
        "avx2",    exp_batch, sincos_batch,    tanh_batch,
        logcosh_batch, tanh_sech2_batch, dot, axpy, sym_rank_update,
    };
    return &table;
}

}  // namespace phasespace::simd

#else  // !(__AVX2__ && __FMA__)

namespace phasespace::simd {
const Ops* avx2_ops() { return nullptr; }
}  // namespace phasespace::simd

#endif
