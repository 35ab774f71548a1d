#pragma once

// Data-parallel inner loops used by channel synthesis and SNR evaluation.
//
// Every kernel has a scalar reference implementation; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Complex data is interleaved
// (re, im) exactly as std::complex<double> / Eigen::MatrixXcd store it, and
// matrices are column-major.
//
// ROTIRS_KERNELS=scalar|avx2 in the environment overrides the automatic choice.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace rotirs::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    const char* name;

    // out[i] = amplitude * exp(j * phase[i])
    void (*phasors)(const double* phase, std::size_t n, double amplitude, cplx* out);

    // out[i] = amplitude * exp(-j * wavenumber * |p_i - from|), p_i = (xs[i], ys[i], zs[i])
    void (*distance_phasors)(const double* xs, const double* ys, const double* zs, std::size_t n,
                             const double* from, double wavenumber, double amplitude, cplx* out);

    // y = A x, A is rows x cols column-major
    void (*matvec)(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y);

    // *out = sum_i conj(a[i]) * b[i]
    void (*dotc)(const cplx* a, const cplx* b, std::size_t n, cplx* out);

    // out[i] = a[i] * b[i]
    void (*hadamard)(const cplx* a, const cplx* b, std::size_t n, cplx* out);
};

const KernelTable& scalar_kernels();

/// nullptr when the build or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

/// Table chosen once per process.
const KernelTable& active_kernels();

/// Switch the process-wide table by name ("scalar", "avx2"); returns false if unavailable.
bool select_kernels(std::string_view name);

// Span conveniences over the active table.
void phasors(std::span<const double> phase, double amplitude, std::span<cplx> out);
void matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols, std::span<const cplx> x,
            std::span<cplx> y);
cplx dotc(std::span<const cplx> a, std::span<const cplx> b);
void hadamard(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out);

}  // namespace rotirs::kernels
