#include <atomic>
#include <cstdlib>
#include <string>

#include "rotirs/kernels.hpp"

namespace rotirs::kernels {

#if defined(ROTIRS_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(ROTIRS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() {
    if (const char* env = std::getenv("ROTIRS_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2" && avx2_kernels() != nullptr) return avx2_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable* avx2_kernels() {
#if defined(ROTIRS_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels() { return *current().load(std::memory_order_acquire); }

bool select_kernels(std::string_view name) {
    if (name == "scalar") {
        current().store(&scalar_kernels(), std::memory_order_release);
        return true;
    }
    if (name == "avx2" && avx2_kernels() != nullptr) {
        current().store(avx2_kernels(), std::memory_order_release);
        return true;
    }
    return false;
}

void phasors(std::span<const double> phase, double amplitude, std::span<cplx> out) {
    active_kernels().phasors(phase.data(), phase.size(), amplitude, out.data());
}

void matvec(std::span<const cplx> a, std::size_t rows, std::size_t cols, std::span<const cplx> x,
            std::span<cplx> y) {
    active_kernels().matvec(a.data(), rows, cols, x.data(), y.data());
}

cplx dotc(std::span<const cplx> a, std::span<const cplx> b) {
    cplx out;
    active_kernels().dotc(a.data(), b.data(), a.size(), &out);
    return out;
}

void hadamard(std::span<const cplx> a, std::span<const cplx> b, std::span<cplx> out) {
    active_kernels().hadamard(a.data(), b.data(), a.size(), out.data());
}

}  // namespace rotirs::kernels
