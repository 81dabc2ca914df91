#include "tdcs/fft.hpp"

#include "tdcs/kernels.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace tdcs {

FftPlan::FftPlan(std::size_t n) : n_(n)
{
    if (n == 0) throw TdcsError("fft size must be positive");
    if (!is_power_of_two(n)) {
        roots_.resize(n);
        for (std::size_t m = 0; m < n; ++m)
            roots_[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
        return;
    }
    const unsigned bits = log2_exact(n);
    bit_reverse_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (unsigned b = 0; b < bits; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
        bit_reverse_[i] = r;
    }
    forward_twiddles_.resize(n > 1 ? n - 1 : 0);
    inverse_twiddles_.resize(forward_twiddles_.size());
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t j = 0; j < half; ++j) {
            const double angle = std::numbers::pi * static_cast<double>(j) / static_cast<double>(half);
            forward_twiddles_[half - 1 + j] = {std::cos(angle), -std::sin(angle)};
            inverse_twiddles_[half - 1 + j] = {std::cos(angle), std::sin(angle)};
        }
    }
}

void FftPlan::radix2(std::span<cd> data, const ComplexVec& twiddles) const
{
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t r = bit_reverse_[i];
        if (r > i) std::swap(data[i], data[r]);
    }
    const auto& k = kernels::active();
    for (std::size_t half = 1; half < n_; half <<= 1) {
        const cd* w = twiddles.data() + (half - 1);
        for (std::size_t start = 0; start < n_; start += 2 * half)
            k.butterfly(data.data() + start, data.data() + start + half, w, half);
    }
}

void FftPlan::direct(std::span<cd> data, bool inverse) const
{
    thread_local ComplexVec scratch;
    scratch.assign(data.begin(), data.end());
    for (std::size_t k = 0; k < n_; ++k) {
        cd acc = 0.0;
        for (std::size_t m = 0; m < n_; ++m) {
            const cd w = roots_[(k * m) % n_];
            acc += scratch[m] * (inverse ? std::conj(w) : w);
        }
        data[k] = acc;
    }
}

void FftPlan::forward(std::span<cd> data) const
{
    if (data.size() != n_) throw TdcsError("fft size mismatch");
    if (bit_reverse_.empty()) {
        direct(data, false);
    } else {
        radix2(data, forward_twiddles_);
    }
}

void FftPlan::inverse(std::span<cd> data) const
{
    if (data.size() != n_) throw TdcsError("fft size mismatch");
    if (bit_reverse_.empty()) {
        direct(data, true);
    } else {
        radix2(data, inverse_twiddles_);
    }
    kernels::active().scale(data, 1.0 / static_cast<double>(n_));
}

const FftPlan& fft_plan(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<FftPlan>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlan>(n);
    return *slot;
}

ComplexVec fft(std::span<const cd> x)
{
    ComplexVec out(x.begin(), x.end());
    fft_plan(out.size()).forward(out);
    return out;
}

ComplexVec ifft(std::span<const cd> x)
{
    ComplexVec out(x.begin(), x.end());
    fft_plan(out.size()).inverse(out);
    return out;
}

}  // namespace tdcs
