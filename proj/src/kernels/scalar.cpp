#include "tdcs/kernels.hpp"

#include <limits>

namespace tdcs::kernels {
namespace {

// Plain formulas instead of std::complex operator*, which goes through the
// Annex G NaN/inf recovery path in libstdc++.
inline cd cmul(cd a, cd b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.imag() * b.real() + a.real() * b.imag()};
}

inline cd cmul_conj(cd a, cd b)
{
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}

void mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cmul(a[i], b[i]);
}

void mul_conj(std::span<const cd> a, std::span<const cd> b, std::span<cd> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cmul_conj(a[i], b[i]);
}

void butterfly(cd* lo, cd* hi, const cd* twiddle, std::size_t half)
{
    for (std::size_t j = 0; j < half; ++j) {
        const cd t = cmul(twiddle[j], hi[j]);
        hi[j] = lo[j] - t;
        lo[j] += t;
    }
}

void scale(std::span<cd> x, double s)
{
    for (auto& v : x) v = {v.real() * s, v.imag() * s};
}

void axpy(std::span<cd> y, std::span<const cd> x, double s)
{
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] = {y[i].real() + s * x[i].real(), y[i].imag() + s * x[i].imag()};
}

double energy(std::span<const cd> x)
{
    double acc = 0.0;
    for (const auto& v : x) acc += v.real() * v.real() + v.imag() * v.imag();
    return acc;
}

std::size_t argmax_real(std::span<const cd> x, std::size_t stride)
{
    std::size_t best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    std::size_t candidate = 0;
    for (std::size_t i = 0; i < x.size(); i += stride, ++candidate) {
        if (x[i].real() > best_value) {
            best_value = x[i].real();
            best = candidate;
        }
    }
    return best;
}

void max_real_and_norm(std::span<const cd> x, double& max_real, double& max_norm)
{
    max_real = -std::numeric_limits<double>::infinity();
    max_norm = 0.0;
    for (const auto& v : x) {
        if (v.real() > max_real) max_real = v.real();
        const double n = v.real() * v.real() + v.imag() * v.imag();
        if (n > max_norm) max_norm = n;
    }
}

void mmse(std::span<const cd> r, std::span<const cd> h, double reg, std::span<cd> out)
{
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double denom = h[i].real() * h[i].real() + h[i].imag() * h[i].imag() + reg;
        if (denom == 0.0) {
            out[i] = 0.0;
            continue;
        }
        const cd num = cmul_conj(r[i], h[i]);
        out[i] = {num.real() / denom, num.imag() / denom};
    }
}

}  // namespace

const KernelTable& scalar_table()
{
    static const KernelTable table{
        "scalar", mul, mul_conj, butterfly, scale, axpy, energy, argmax_real, max_real_and_norm, mmse,
    };
    return table;
}

}  // namespace tdcs::kernels
