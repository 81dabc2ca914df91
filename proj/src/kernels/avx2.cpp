// Compiled with -mavx2 -mfma. Nothing in here may run before dispatch.cpp has
// checked the CPU.

#include "tdcs/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace tdcs::kernels {
namespace {

// Two interleaved complex<double> per register: [re0 im0 re1 im1].
inline __m256d load2(const cd* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store2(cd* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }

inline __m256d cmul2(__m256d a, __m256d b)
{
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline __m256d cmul_conj2(__m256d a, __m256d b)
{
    const __m256d b_re = _mm256_movedup_pd(b);
    const __m256d b_im = _mm256_permute_pd(b, 0xF);
    const __m256d a_sw = _mm256_permute_pd(a, 0x5);
    return _mm256_fmsubadd_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

inline double hsum(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v)
{
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

inline cd cmul1(cd a, cd b)
{
    return {a.real() * b.real() - a.imag() * b.imag(), a.imag() * b.real() + a.real() * b.imag()};
}

inline cd cmul_conj1(cd a, cd b)
{
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}

void mul(std::span<const cd> a, std::span<const cd> b, std::span<cd> out)
{
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(&out[i], cmul2(load2(&a[i]), load2(&b[i])));
    for (; i < n; ++i) out[i] = cmul1(a[i], b[i]);
}

void mul_conj(std::span<const cd> a, std::span<const cd> b, std::span<cd> out)
{
    const std::size_t n = out.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(&out[i], cmul_conj2(load2(&a[i]), load2(&b[i])));
    for (; i < n; ++i) out[i] = cmul_conj1(a[i], b[i]);
}

void butterfly(cd* lo, cd* hi, const cd* twiddle, std::size_t half)
{
    std::size_t j = 0;
    for (; j + 2 <= half; j += 2) {
        const __m256d t = cmul2(load2(twiddle + j), load2(hi + j));
        const __m256d l = load2(lo + j);
        store2(hi + j, _mm256_sub_pd(l, t));
        store2(lo + j, _mm256_add_pd(l, t));
    }
    for (; j < half; ++j) {
        const cd t = cmul1(twiddle[j], hi[j]);
        hi[j] = lo[j] - t;
        lo[j] += t;
    }
}

void scale(std::span<cd> x, double s)
{
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(&x[i], _mm256_mul_pd(load2(&x[i]), vs));
    for (; i < n; ++i) x[i] = {x[i].real() * s, x[i].imag() * s};
}

void axpy(std::span<cd> y, std::span<const cd> x, double s)
{
    const __m256d vs = _mm256_set1_pd(s);
    const std::size_t n = y.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) store2(&y[i], _mm256_fmadd_pd(vs, load2(&x[i]), load2(&y[i])));
    for (; i < n; ++i) y[i] = {y[i].real() + s * x[i].real(), y[i].imag() + s * x[i].imag()};
}

double energy(std::span<const cd> x)
{
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = load2(&x[i]);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum(acc);
    for (; i < n; ++i) total += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return total;
}

std::size_t argmax_real(std::span<const cd> x, std::size_t stride)
{
    if (stride != 1) {
        return scalar_table().argmax_real(x, stride);
    }
    // Pass 1: exact maximum of the real parts. Pass 2: first index holding it.
    const std::size_t n = x.size();
    __m256d best = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d reals = _mm256_unpacklo_pd(load2(&x[i]), load2(&x[i + 2]));
        best = _mm256_max_pd(best, reals);
    }
    double best_value = hmax(best);
    for (; i < n; ++i)
        if (x[i].real() > best_value) best_value = x[i].real();

    const __m256d target = _mm256_set1_pd(best_value);
    i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = load2(&x[i]);
        const __m256d b = load2(&x[i + 2]);
        const __m256d reals = _mm256_unpacklo_pd(a, b);  // [x0 x2 x1 x3]
        const int hit = _mm256_movemask_pd(_mm256_cmp_pd(reals, target, _CMP_EQ_OQ));
        if (hit != 0) {
            for (std::size_t k = i; k < i + 4; ++k)
                if (x[k].real() == best_value) return k;
        }
    }
    for (; i < n; ++i)
        if (x[i].real() == best_value) return i;
    return 0;
}

void max_real_and_norm(std::span<const cd> x, double& max_real, double& max_norm)
{
    const std::size_t n = x.size();
    __m256d best_re = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d best_norm = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d a = load2(&x[i]);
        const __m256d b = load2(&x[i + 2]);
        const __m256d re = _mm256_unpacklo_pd(a, b);
        const __m256d im = _mm256_unpackhi_pd(a, b);
        best_re = _mm256_max_pd(best_re, re);
        best_norm = _mm256_max_pd(best_norm, _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im)));
    }
    max_real = hmax(best_re);
    max_norm = hmax(best_norm);
    for (; i < n; ++i) {
        if (x[i].real() > max_real) max_real = x[i].real();
        const double nv = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
        if (nv > max_norm) max_norm = nv;
    }
}

void mmse(std::span<const cd> r, std::span<const cd> h, double reg, std::span<cd> out)
{
    const std::size_t n = out.size();
    const __m256d vreg = _mm256_set1_pd(reg);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d hv = load2(&h[i]);
        const __m256d sq = _mm256_mul_pd(hv, hv);
        // |h|^2 duplicated into both lanes of each complex
        const __m256d norm = _mm256_add_pd(_mm256_hadd_pd(sq, sq), vreg);
        const __m256d num = cmul_conj2(load2(&r[i]), hv);
        const __m256d q = _mm256_div_pd(num, norm);
        const __m256d nonzero = _mm256_cmp_pd(norm, zero, _CMP_NEQ_OQ);
        store2(&out[i], _mm256_and_pd(q, nonzero));
    }
    for (; i < n; ++i) {
        const double denom = h[i].real() * h[i].real() + h[i].imag() * h[i].imag() + reg;
        if (denom == 0.0) {
            out[i] = 0.0;
            continue;
        }
        const cd num = cmul_conj1(r[i], h[i]);
        out[i] = {num.real() / denom, num.imag() / denom};
    }
}

}  // namespace

const KernelTable& avx2_kernels()
{
    static const KernelTable table{
        "avx2", mul, mul_conj, butterfly, scale, axpy, energy, argmax_real, max_real_and_norm, mmse,
    };
    return table;
}

}  // namespace tdcs::kernels
