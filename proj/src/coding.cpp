#include "tdcs/coding.hpp"

#include "tdcs/rng.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

namespace tdcs {

void CodeConfig::validate() const
{
    if (constraint_length < 2 || constraint_length > 16) throw TdcsError("constraint length must be in [2, 16]");
    for (const auto g : generators) {
        if (g == 0) throw TdcsError("generator polynomial must be nonzero");
        if (g >> constraint_length != 0) throw TdcsError("generator degree must be below the constraint length");
    }
}

ConvolutionalCode::ConvolutionalCode(CodeConfig config) : config_(config)
{
    config_.validate();
    n_states_ = 1u << memory();
    outputs_.resize(2 * n_states_);
    for (unsigned s = 0; s < n_states_; ++s) {
        for (unsigned b = 0; b < 2; ++b) {
            const unsigned reg = (b << memory()) | s;
            const unsigned o0 = std::popcount(reg & config_.generators[0]) & 1u;
            const unsigned o1 = std::popcount(reg & config_.generators[1]) & 1u;
            outputs_[2 * s + b] = static_cast<std::uint8_t>((o0 << 1) | o1);
        }
    }
}

Bits ConvolutionalCode::encode(std::span<const std::uint8_t> bits) const
{
    Bits out;
    out.reserve(coded_length(bits.size()));
    unsigned state = 0;
    auto push = [&](unsigned b) {
        const std::uint8_t o = outputs_[2 * state + b];
        out.push_back(static_cast<std::uint8_t>(o >> 1));
        out.push_back(static_cast<std::uint8_t>(o & 1u));
        state = ((b << memory()) | state) >> 1;
    };
    for (const auto b : bits) push(b & 1u);
    for (unsigned i = 0; i < memory(); ++i) push(0);
    return out;
}

Bits ConvolutionalCode::decode(std::span<const std::uint8_t> coded) const
{
    if (coded.size() % 2 != 0 || coded.size() < 2 * memory()) throw TdcsError("malformed coded length");
    const std::size_t steps = coded.size() / 2;
    const unsigned mem = memory();
    const unsigned mask = n_states_ - 1;
    constexpr unsigned kInf = std::numeric_limits<unsigned>::max() / 2;

    std::vector<unsigned> metric(n_states_, kInf);
    std::vector<unsigned> next(n_states_);
    metric[0] = 0;
    // decisions[t * n_states + ns]: low bit of the surviving predecessor.
    std::vector<std::uint8_t> decisions(steps * n_states_);

    for (std::size_t t = 0; t < steps; ++t) {
        const unsigned received = (static_cast<unsigned>(coded[2 * t] & 1u) << 1) | (coded[2 * t + 1] & 1u);
        for (unsigned ns = 0; ns < n_states_; ++ns) {
            const unsigned b = ns >> (mem - 1);
            const unsigned base = (ns << 1) & mask;
            unsigned best = kInf;
            std::uint8_t choice = 0;
            for (unsigned x = 0; x < 2; ++x) {
                const unsigned s = base | x;
                if (metric[s] >= kInf) continue;
                const unsigned m = metric[s] + static_cast<unsigned>(std::popcount(outputs_[2 * s + b] ^ received));
                if (m < best) {
                    best = m;
                    choice = static_cast<std::uint8_t>(x);
                }
            }
            next[ns] = best;
            decisions[t * n_states_ + ns] = choice;
        }
        metric.swap(next);
    }

    Bits decoded(steps);
    unsigned state = 0;
    for (std::size_t t = steps; t-- > 0;) {
        decoded[t] = static_cast<std::uint8_t>(state >> (mem - 1));
        state = ((state << 1) & mask) | decisions[t * n_states_ + state];
    }
    decoded.resize(steps - mem);
    return decoded;
}

Bits encode(std::span<const std::uint8_t> bits, const CodeConfig& config)
{
    return ConvolutionalCode(config).encode(bits);
}

Bits viterbi_decode(std::span<const std::uint8_t> coded, const CodeConfig& config)
{
    return ConvolutionalCode(config).decode(coded);
}

std::vector<std::size_t> interleaver_permutation(std::size_t length, std::uint64_t seed)
{
    std::vector<std::size_t> perm(length);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(sub_seed(seed, {stream::kInterleaver}));
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

Bits interleave(std::span<const std::uint8_t> bits, std::span<const std::size_t> permutation)
{
    if (bits.size() != permutation.size()) throw TdcsError("interleaver length mismatch");
    Bits out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[i] = bits[permutation[i]];
    return out;
}

Bits deinterleave(std::span<const std::uint8_t> bits, std::span<const std::size_t> permutation)
{
    if (bits.size() != permutation.size()) throw TdcsError("interleaver length mismatch");
    Bits out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) out[permutation[i]] = bits[i];
    return out;
}

Bits interleave(std::span<const std::uint8_t> bits, std::uint64_t seed)
{
    return interleave(bits, interleaver_permutation(bits.size(), seed));
}

Bits deinterleave(std::span<const std::uint8_t> bits, std::uint64_t seed)
{
    return deinterleave(bits, interleaver_permutation(bits.size(), seed));
}

namespace {

unsigned bits_per_symbol(std::size_t m_order)
{
    if (m_order < 2 || !is_power_of_two(m_order)) throw TdcsError("modulation order must be a power of two");
    return log2_exact(m_order);
}

}  // namespace

std::size_t frame_bit_capacity(std::size_t n_clusters, std::size_t m_order)
{
    return n_clusters * bits_per_symbol(m_order);
}

std::vector<std::size_t> map_bits_to_symbols(std::span<const std::uint8_t> bits, std::size_t n_clusters,
                                             std::size_t m_order)
{
    const unsigned k = bits_per_symbol(m_order);
    if (n_clusters == 0 || bits.size() % (n_clusters * k) != 0)
        throw TdcsError("bit count is not a multiple of the frame capacity");
    std::vector<std::size_t> symbols(bits.size() / k);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        std::size_t v = 0;
        for (unsigned i = 0; i < k; ++i) v = (v << 1) | (bits[s * k + i] & 1u);
        symbols[s] = v;
    }
    return symbols;
}

Bits map_symbols_to_bits(std::span<const std::size_t> symbols, std::size_t n_clusters, std::size_t m_order)
{
    const unsigned k = bits_per_symbol(m_order);
    if (n_clusters == 0 || symbols.size() % n_clusters != 0)
        throw TdcsError("symbol count is not a multiple of the cluster count");
    Bits bits(symbols.size() * k);
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        if (symbols[s] >= m_order) throw TdcsError("symbol out of range");
        for (unsigned i = 0; i < k; ++i) bits[s * k + i] = static_cast<std::uint8_t>((symbols[s] >> (k - 1 - i)) & 1u);
    }
    return bits;
}

}  // namespace tdcs
