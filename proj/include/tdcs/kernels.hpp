#pragma once

// Data-parallel inner loops used by the transform, modem and channel code.
//
// Every kernel exists as a portable scalar reference and, on x86-64, as an
// AVX2/FMA variant. The variant is picked once at runtime from CPUID and can
// be overridden with TDCS_KERNELS=scalar or through select(). The two variants
// agree to within FMA rounding (a few ulp); the argmax kernel agrees exactly.

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace tdcs::kernels {

using cd = std::complex<double>;

struct KernelTable {
    std::string_view name;

    // out[i] = a[i] * b[i]
    void (*mul)(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
    // out[i] = a[i] * conj(b[i])
    void (*mul_conj)(std::span<const cd> a, std::span<const cd> b, std::span<cd> out);
    // Radix-2 butterflies on one block: t = w[j]*hi[j]; hi[j] = lo[j]-t; lo[j] += t.
    void (*butterfly)(cd* lo, cd* hi, const cd* twiddle, std::size_t half);
    // x[i] *= s
    void (*scale)(std::span<cd> x, double s);
    // y[i] += s * x[i]
    void (*axpy)(std::span<cd> y, std::span<const cd> x, double s);
    // sum |x[i]|^2
    double (*energy)(std::span<const cd> x);
    // Index of the largest real part among x[0], x[stride], x[2*stride], ...
    // counted in candidates (not samples). Ties resolve to the smallest index.
    std::size_t (*argmax_real)(std::span<const cd> x, std::size_t stride);
    // max Re{x[i]} and max |x[i]|^2 over the span (span must be non-empty).
    void (*max_real_and_norm)(std::span<const cd> x, double& max_real, double& max_norm);
    // out[i] = r[i] * conj(h[i]) / (|h[i]|^2 + reg); zero where the denominator is zero.
    void (*mmse)(std::span<const cd> r, std::span<const cd> h, double reg, std::span<cd> out);
};

const KernelTable& scalar_table();

// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

// Currently selected table.
const KernelTable& active();

// Selects a variant by name ("scalar", "avx2", "auto"). Returns false if the
// requested variant is unavailable; the selection is left unchanged then.
bool select(std::string_view name);

}  // namespace tdcs::kernels
