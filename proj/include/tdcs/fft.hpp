#pragma once

// Discrete Fourier transform with the convention used throughout the library:
//
//   forward  X_k = sum_n x_n e^{-j 2 pi k n / N}          (no scale)
//   inverse  x_n = (1/N) sum_k X_k e^{+j 2 pi k n / N}
//
// so that sum |x_n|^2 = (1/N) sum |X_k|^2. Power-of-two sizes use an
// iterative radix-2 transform whose butterflies go through the kernel table;
// other sizes fall back to a direct O(N^2) evaluation.

#include "tdcs/common.hpp"

#include <span>

namespace tdcs {

class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const { return n_; }

    void forward(std::span<cd> data) const;
    void inverse(std::span<cd> data) const;

private:
    void radix2(std::span<cd> data, const ComplexVec& twiddles) const;
    void direct(std::span<cd> data, bool inverse) const;

    std::size_t n_;
    std::vector<std::size_t> bit_reverse_;
    ComplexVec forward_twiddles_;  // stage with half-size h starts at offset h-1
    ComplexVec inverse_twiddles_;
    ComplexVec roots_;             // e^{-j 2 pi m / N}, direct path only
};

/// Process-wide plan cache; plans are immutable once built and may be shared
/// across threads.
const FftPlan& fft_plan(std::size_t n);

ComplexVec fft(std::span<const cd> x);
ComplexVec ifft(std::span<const cd> x);

}  // namespace tdcs
