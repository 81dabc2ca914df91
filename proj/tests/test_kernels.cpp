#include "oracles.hpp"

#include "tdcs/kernels.hpp"

#include <doctest.h>

#include <random>
#include <string>

using tdcs::kernels::cd;
using tdcs::kernels::KernelTable;

namespace {

double max_abs_diff(const std::vector<cd>& a, const std::vector<cd>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

const KernelTable* simd_or_skip()
{
    const KernelTable* t = tdcs::kernels::avx2_table();
    if (t == nullptr) MESSAGE("AVX2 variant unavailable on this host; equivalence checks skipped");
    return t;
}

}  // namespace

TEST_CASE("kernel selection")
{
    const std::string previous(tdcs::kernels::active().name);
    CHECK(tdcs::kernels::select("scalar"));
    CHECK(tdcs::kernels::active().name == "scalar");
    CHECK_FALSE(tdcs::kernels::select("neon-nonexistent"));
    CHECK(tdcs::kernels::active().name == "scalar");
    CHECK(tdcs::kernels::select("auto"));
    CHECK(tdcs::kernels::select(previous));
}

TEST_CASE("avx2 kernels match the scalar reference")
{
    const KernelTable* simd = simd_or_skip();
    if (simd == nullptr) return;
    const KernelTable& ref = tdcs::kernels::scalar_table();
    std::mt19937_64 rng(42);
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 17u, 64u, 255u, 1024u}) {
        CAPTURE(n);
        const auto a = oracle::random_vector(n, rng);
        const auto b = oracle::random_vector(n, rng);
        std::vector<cd> x(n), y(n);

        ref.mul(a, b, x);
        simd->mul(a, b, y);
        CHECK(max_abs_diff(x, y) <= 1e-14);

        ref.mul_conj(a, b, x);
        simd->mul_conj(a, b, y);
        CHECK(max_abs_diff(x, y) <= 1e-14);

        x = a;
        y = a;
        ref.scale(x, 0.37);
        simd->scale(y, 0.37);
        CHECK(x == y);

        x = a;
        y = a;
        ref.axpy(x, b, -1.25);
        simd->axpy(y, b, -1.25);
        CHECK(max_abs_diff(x, y) <= 1e-14);

        CHECK(simd->energy(a) == doctest::Approx(ref.energy(a)).epsilon(1e-13));

        std::vector<cd> h = b;
        if (n > 2) h[1] = 0.0;
        ref.mmse(a, h, 0.0, x);
        simd->mmse(a, h, 0.0, y);
        CHECK(max_abs_diff(x, y) <= 1e-12);
        if (n > 2) {
            CHECK(x[1] == cd(0.0, 0.0));
            CHECK(y[1] == cd(0.0, 0.0));
        }
        ref.mmse(a, h, 0.3, x);
        simd->mmse(a, h, 0.3, y);
        CHECK(max_abs_diff(x, y) <= 1e-12);

        if (n > 0) {
            double re_a = 0, nrm_a = 0, re_b = 0, nrm_b = 0;
            ref.max_real_and_norm(a, re_a, nrm_a);
            simd->max_real_and_norm(a, re_b, nrm_b);
            CHECK(re_a == re_b);
            CHECK(nrm_b == doctest::Approx(nrm_a).epsilon(1e-14));
            for (std::size_t stride : {1u, 2u, 4u}) {
                if (n % stride != 0) continue;
                CHECK(ref.argmax_real(a, stride) == simd->argmax_real(a, stride));
            }
        }
    }
}

TEST_CASE("butterfly variants agree")
{
    const KernelTable* simd = simd_or_skip();
    if (simd == nullptr) return;
    std::mt19937_64 rng(7);
    for (std::size_t half : {1u, 2u, 3u, 8u, 31u, 512u}) {
        const auto lo = oracle::random_vector(half, rng);
        const auto hi = oracle::random_vector(half, rng);
        const auto w = oracle::random_vector(half, rng);
        auto lo_a = lo, hi_a = hi, lo_b = lo, hi_b = hi;
        tdcs::kernels::scalar_table().butterfly(lo_a.data(), hi_a.data(), w.data(), half);
        simd->butterfly(lo_b.data(), hi_b.data(), w.data(), half);
        CHECK(max_abs_diff(lo_a, lo_b) <= 1e-14);
        CHECK(max_abs_diff(hi_a, hi_b) <= 1e-14);
    }
}

TEST_CASE("argmax ties resolve to the smallest index in both variants")
{
    std::vector<cd> x(64, cd(0.0, 1.0));
    std::vector<const KernelTable*> tables{&tdcs::kernels::scalar_table()};
    if (auto* t = tdcs::kernels::avx2_table()) tables.push_back(t);
    for (const auto* t : tables) {
        CAPTURE(t->name);
        CHECK(t->argmax_real(x, 1) == 0);
        x[37] = {2.0, 0.0};
        x[50] = {2.0, -3.0};
        CHECK(t->argmax_real(x, 1) == 37);
        CHECK(t->argmax_real(x, 2) == 25);  // candidates 0,2,..: 50 is candidate 25
        x[37] = x[50] = {0.0, 1.0};
    }
}
