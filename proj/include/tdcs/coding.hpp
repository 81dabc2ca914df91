#pragma once

// Rate-1/2 convolutional code with hard-decision Viterbi decoding, a seeded
// block interleaver, and the bit <-> CCSK symbol mapping.

#include "tdcs/common.hpp"

#include <array>
#include <span>

namespace tdcs {

using Bits = std::vector<std::uint8_t>;

struct CodeConfig {
    unsigned constraint_length = 7;
    // Octal generators; the most significant tap multiplies the newest input bit.
    std::array<unsigned, 2> generators{0171, 0133};
    std::uint64_t interleaver_seed = 0;

    void validate() const;
};

class ConvolutionalCode {
public:
    explicit ConvolutionalCode(CodeConfig config = {});

    const CodeConfig& config() const { return config_; }
    unsigned memory() const { return config_.constraint_length - 1; }

    /// Terminated encoding: K-1 zero tail bits are appended, so the output
    /// holds 2 * (bits.size() + K - 1) bits, ordered g0, g1 per input bit.
    Bits encode(std::span<const std::uint8_t> bits) const;

    /// Maximum-likelihood hard-decision decoding of a terminated stream.
    /// Returns the information bits (tail removed).
    Bits decode(std::span<const std::uint8_t> coded) const;

    std::size_t coded_length(std::size_t info_bits) const { return 2 * (info_bits + memory()); }

private:
    CodeConfig config_;
    unsigned n_states_;
    // Output pair (g0 bit << 1 | g1 bit) for state s and input b: outputs_[2*s + b].
    std::vector<std::uint8_t> outputs_;
};

Bits encode(std::span<const std::uint8_t> bits, const CodeConfig& config = {});
Bits viterbi_decode(std::span<const std::uint8_t> coded, const CodeConfig& config = {});

/// Seeded uniform permutation: out[i] = in[perm[i]].
std::vector<std::size_t> interleaver_permutation(std::size_t length, std::uint64_t seed);
Bits interleave(std::span<const std::uint8_t> bits, std::uint64_t seed);
Bits deinterleave(std::span<const std::uint8_t> bits, std::uint64_t seed);

/// Permutation applied with a precomputed table. Throws on length mismatch.
Bits interleave(std::span<const std::uint8_t> bits, std::span<const std::size_t> permutation);
Bits deinterleave(std::span<const std::uint8_t> bits, std::span<const std::size_t> permutation);

/// Consecutive log2(M)-bit groups, most significant bit first, become
/// symbols. The bit count must be a multiple of L * log2(M).
std::vector<std::size_t> map_bits_to_symbols(std::span<const std::uint8_t> bits, std::size_t n_clusters,
                                             std::size_t m_order);
Bits map_symbols_to_bits(std::span<const std::size_t> symbols, std::size_t n_clusters, std::size_t m_order);

/// L * log2(M).
std::size_t frame_bit_capacity(std::size_t n_clusters, std::size_t m_order);

}  // namespace tdcs
