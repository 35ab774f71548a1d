// AVX2+FMA variants. This translation unit is compiled with -mavx2 -mfma, so
// it deliberately touches complex data only through double pointers and calls
// no inline library templates that could leak AVX code into other TUs.

#include <immintrin.h>

#include <cmath>

#include "rotirs/kernels.hpp"

namespace rotirs::kernels {

namespace {

// pi/2 split in three parts so that q * kPio2a is exact for |q| < 2^29.
constexpr double kPio2a = 1.57079625129699707031e+00;
constexpr double kPio2b = 7.54978941586159635336e-08;
constexpr double kPio2c = 5.39030285815811905290e-15;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

// Minimax coefficients for sin and cos on [-pi/4, pi/4] (Cephes).
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-08,
                            2.75573136213857245213e-06, -1.98412698295895385996e-04,
                            8.33333333332211858878e-03, -1.66666666666666307295e-01};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-09,
                            -2.75573141792967388112e-07, 2.48015872888517045348e-05,
                            -1.38888888888730564116e-03, 4.16666666666665929218e-02};

inline __m256d polevl5(__m256d z, const double* c) {
    __m256d p = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 6; ++i) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[i]));
    return p;
}

// sin and cos of four doubles at once.
inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
    const __m256d q = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2a), x);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2b), r);
    r = _mm256_fnmadd_pd(q, _mm256_set1_pd(kPio2c), r);

    const __m256d z = _mm256_mul_pd(r, r);
    const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(r, z), polevl5(z, kSin), r);
    const __m256d c = _mm256_fmadd_pd(_mm256_mul_pd(z, z), polevl5(z, kCos),
                                      _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0)));

    // quadrant = q mod 4 in {0,1,2,3}
    const __m256d quarter = _mm256_floor_pd(_mm256_mul_pd(q, _mm256_set1_pd(0.25)));
    const __m256d quad = _mm256_fnmadd_pd(quarter, _mm256_set1_pd(4.0), q);

    const __m256d is1 = _mm256_cmp_pd(quad, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d is2 = _mm256_cmp_pd(quad, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    const __m256d is3 = _mm256_cmp_pd(quad, _mm256_set1_pd(3.0), _CMP_EQ_OQ);
    const __m256d odd = _mm256_or_pd(is1, is3);
    const __m256d sign_bit = _mm256_set1_pd(-0.0);

    __m256d sx = _mm256_blendv_pd(s, c, odd);
    __m256d cx = _mm256_blendv_pd(c, s, odd);
    sx = _mm256_xor_pd(sx, _mm256_and_pd(_mm256_or_pd(is2, is3), sign_bit));
    cx = _mm256_xor_pd(cx, _mm256_and_pd(_mm256_or_pd(is1, is2), sign_bit));
    s_out = sx;
    c_out = cx;
}

// Interleave (c0..c3), (s0..s3) into two registers of (re, im) pairs scaled by amp.
inline void store_interleaved(double* out, __m256d c, __m256d s, __m256d amp) {
    c = _mm256_mul_pd(c, amp);
    s = _mm256_mul_pd(s, amp);
    const __m256d lo = _mm256_unpacklo_pd(c, s);  // c0 s0 c2 s2
    const __m256d hi = _mm256_unpackhi_pd(c, s);  // c1 s1 c3 s3
    _mm256_storeu_pd(out, _mm256_permute2f128_pd(lo, hi, 0x20));      // c0 s0 c1 s1
    _mm256_storeu_pd(out + 4, _mm256_permute2f128_pd(lo, hi, 0x31));  // c2 s2 c3 s3
}

// (a.re*b.re - a.im*b.im, a.re*b.im + a.im*b.re) for two packed complex pairs.
inline __m256d cmul2(__m256d a, __m256d b) {
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_swap = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_swap, b_im));
}

void phasors_avx2(const double* phase, std::size_t n, double amplitude, cplx* out_c) {
    double* out = reinterpret_cast<double*>(out_c);
    const __m256d amp = _mm256_set1_pd(amplitude);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s, c;
        sincos4(_mm256_loadu_pd(phase + i), s, c);
        store_interleaved(out + 2 * i, c, s, amp);
    }
    for (; i < n; ++i) {
        out[2 * i] = amplitude * std::cos(phase[i]);
        out[2 * i + 1] = amplitude * std::sin(phase[i]);
    }
}

void distance_phasors_avx2(const double* xs, const double* ys, const double* zs, std::size_t n,
                           const double* from, double wavenumber, double amplitude, cplx* out_c) {
    double* out = reinterpret_cast<double*>(out_c);
    const __m256d amp = _mm256_set1_pd(amplitude);
    const __m256d fx = _mm256_set1_pd(from[0]);
    const __m256d fy = _mm256_set1_pd(from[1]);
    const __m256d fz = _mm256_set1_pd(from[2]);
    const __m256d neg_k = _mm256_set1_pd(-wavenumber);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), fx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), fy);
        const __m256d dz = _mm256_sub_pd(_mm256_loadu_pd(zs + i), fz);
        __m256d d2 = _mm256_mul_pd(dx, dx);
        d2 = _mm256_fmadd_pd(dy, dy, d2);
        d2 = _mm256_fmadd_pd(dz, dz, d2);
        const __m256d phase = _mm256_mul_pd(neg_k, _mm256_sqrt_pd(d2));
        __m256d s, c;
        sincos4(phase, s, c);
        store_interleaved(out + 2 * i, c, s, amp);
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - from[0];
        const double dy = ys[i] - from[1];
        const double dz = zs[i] - from[2];
        const double phase = -wavenumber * std::sqrt(dx * dx + dy * dy + dz * dz);
        out[2 * i] = amplitude * std::cos(phase);
        out[2 * i + 1] = amplitude * std::sin(phase);
    }
}

void matvec_avx2(const cplx* a_c, std::size_t rows, std::size_t cols, const cplx* x_c, cplx* y_c) {
    const double* a = reinterpret_cast<const double*>(a_c);
    const double* x = reinterpret_cast<const double*>(x_c);
    double* y = reinterpret_cast<double*>(y_c);
    for (std::size_t r = 0; r < 2 * rows; ++r) y[r] = 0.0;
    const std::size_t pairs = rows / 2;
    for (std::size_t c = 0; c < cols; ++c) {
        const double* col = a + 2 * c * rows;
        const __m256d xr = _mm256_set1_pd(x[2 * c]);
        const __m256d xi = _mm256_set1_pd(x[2 * c + 1]);
        for (std::size_t p = 0; p < pairs; ++p) {
            const __m256d av = _mm256_loadu_pd(col + 4 * p);
            const __m256d a_swap = _mm256_permute_pd(av, 0x5);
            const __m256d prod = _mm256_fmaddsub_pd(av, xr, _mm256_mul_pd(a_swap, xi));
            _mm256_storeu_pd(y + 4 * p, _mm256_add_pd(_mm256_loadu_pd(y + 4 * p), prod));
        }
        if (rows % 2 != 0) {
            const std::size_t r = rows - 1;
            const double ar = col[2 * r], ai = col[2 * r + 1];
            y[2 * r] += ar * x[2 * c] - ai * x[2 * c + 1];
            y[2 * r + 1] += ar * x[2 * c + 1] + ai * x[2 * c];
        }
    }
}

void dotc_avx2(const cplx* a_c, const cplx* b_c, std::size_t n, cplx* out_c) {
    const double* a = reinterpret_cast<const double*>(a_c);
    const double* b = reinterpret_cast<const double*>(b_c);
    // acc_re lanes: a.re*b.re, a.im*b.im ; acc_im lanes: a.re*b.im, a.im*b.re
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d av = _mm256_loadu_pd(a + 2 * i);
        const __m256d bv = _mm256_loadu_pd(b + 2 * i);
        acc_re = _mm256_fmadd_pd(av, bv, acc_re);
        acc_im = _mm256_fmadd_pd(av, _mm256_permute_pd(bv, 0x5), acc_im);
    }
    alignas(32) double re[4];
    alignas(32) double im[4];
    _mm256_store_pd(re, acc_re);
    _mm256_store_pd(im, acc_im);
    double sum_re = (re[0] + re[1]) + (re[2] + re[3]);
    double sum_im = (im[0] - im[1]) + (im[2] - im[3]);
    for (; i < n; ++i) {
        sum_re += a[2 * i] * b[2 * i] + a[2 * i + 1] * b[2 * i + 1];
        sum_im += a[2 * i] * b[2 * i + 1] - a[2 * i + 1] * b[2 * i];
    }
    double* out = reinterpret_cast<double*>(out_c);
    out[0] = sum_re;
    out[1] = sum_im;
}

void hadamard_avx2(const cplx* a_c, const cplx* b_c, std::size_t n, cplx* out_c) {
    const double* a = reinterpret_cast<const double*>(a_c);
    const double* b = reinterpret_cast<const double*>(b_c);
    double* out = reinterpret_cast<double*>(out_c);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        _mm256_storeu_pd(out + 2 * i, cmul2(_mm256_loadu_pd(a + 2 * i), _mm256_loadu_pd(b + 2 * i)));
    }
    for (; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1], br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ar * bi + ai * br;
    }
}

}  // namespace

const KernelTable& avx2_kernel_table() {
    static const KernelTable table{
        "avx2", phasors_avx2, distance_phasors_avx2, matvec_avx2, dotc_avx2, hadamard_avx2,
    };
    return table;
}

}  // namespace rotirs::kernels
