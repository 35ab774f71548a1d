#include <cmath>

#include "rotirs/kernels.hpp"

namespace rotirs::kernels {

namespace {

void phasors_scalar(const double* phase, std::size_t n, double amplitude, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = cplx(amplitude * std::cos(phase[i]), amplitude * std::sin(phase[i]));
    }
}

void distance_phasors_scalar(const double* xs, const double* ys, const double* zs, std::size_t n,
                             const double* from, double wavenumber, double amplitude, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - from[0];
        const double dy = ys[i] - from[1];
        const double dz = zs[i] - from[2];
        const double phase = -wavenumber * std::sqrt(dx * dx + dy * dy + dz * dz);
        out[i] = cplx(amplitude * std::cos(phase), amplitude * std::sin(phase));
    }
}

void matvec_scalar(const cplx* a, std::size_t rows, std::size_t cols, const cplx* x, cplx* y) {
    for (std::size_t r = 0; r < rows; ++r) y[r] = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
        const cplx xc = x[c];
        const cplx* col = a + c * rows;
        for (std::size_t r = 0; r < rows; ++r) y[r] += col[r] * xc;
    }
}

void dotc_scalar(const cplx* a, const cplx* b, std::size_t n, cplx* out) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::conj(a[i]) * b[i];
    *out = acc;
}

void hadamard_scalar(const cplx* a, const cplx* b, std::size_t n, cplx* out) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        "scalar", phasors_scalar, distance_phasors_scalar, matvec_scalar, dotc_scalar, hadamard_scalar,
    };
    return table;
}

}  // namespace rotirs::kernels
