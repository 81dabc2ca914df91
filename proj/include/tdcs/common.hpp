#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tdcs {

using cd = std::complex<double>;
using ComplexVec = std::vector<cd>;
using IndexSet = std::vector<std::size_t>;

/// Raised for contract violations on inputs (bad sizes, invalid partitions,
/// malformed files). The message is the short reason, e.g. "no spectrum holes".
class TdcsError : public std::runtime_error {
public:
    explicit TdcsError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline unsigned log2_exact(std::size_t n)
{
    unsigned bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    return bits;
}

}  // namespace tdcs
