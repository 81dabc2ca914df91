#include "tdcs/harness.hpp"

#include "tdcs/fft.hpp"
#include "tdcs/kernels.hpp"
#include "tdcs/receiver.hpp"
#include "tdcs/rng.hpp"

#include <bit>
#include <cmath>

namespace tdcs {

std::uint64_t partition_seed(std::uint64_t seed, std::size_t n_clusters)
{
    return sub_seed(seed, {stream::kPartition, n_clusters});
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t n_clusters)
{
    return sub_seed(seed, {stream::kSymbols, n_clusters});
}

LinkSetup make_link(const SimConfig& config, Scheme scheme, std::size_t n_clusters)
{
    auto avail = build_availability(config.scenario, config.n_bins);
    const std::uint64_t pseed = partition_seed(config.seed, n_clusters);
    auto partition = scheme == Scheme::Continuous
                         ? partition_continuous(avail, n_clusters)
                         : estimate_beta_min(avail, n_clusters, config.partition_trials, pseed,
                                             config.effective_threads())
                               .best;
    const auto metric = largest_sidelobe(partition);
    return LinkSetup{scheme,
                     std::move(avail),
                     std::move(partition),
                     generate_phase_vector(config.seed, config.n_bins),
                     config.effective_m_order(),
                     metric,
                     pseed,
                     stream_seed(config.seed, n_clusters)};
}

struct LinkSimulator::Impl {
    Impl(const SimConfig& config, const LinkSetup& setup)
        : channel(config.channel),
          profile(config.profile),
          sample_rate(config.effective_sample_rate()),
          coding(config.coding),
          info_bits(config.info_bits_per_block),
          n(setup.partition.n_bins()),
          m(setup.m_order),
          n_clusters(setup.partition.n_clusters()),
          n_unoccupied(setup.partition.n_unoccupied()),
          bits_per_symbol(log2_exact(setup.m_order)),
          capacity(frame_bit_capacity(n_clusters, m)),
          stream(setup.stream_seed),
          mod(setup.partition, setup.phase, m),
          demod(setup.partition, setup.phase, m),
          code(config.code)
    {
        if (channel == ChannelKind::Multipath) cp = cp_length(n);
        tx.resize(n);
        tx_cp.resize(n + cp);
        rx.resize(n + cp);
        spectrum.resize(n);
        equalized.resize(n);
        sent_symbols.resize(n_clusters);
        got_symbols.resize(n_clusters);
        if (coding) {
            coded_bits = code.coded_length(info_bits);
            frames_per_block = (coded_bits + capacity - 1) / capacity;
            permutation = interleaver_permutation(coded_bits, config.code.interleaver_seed);
        }
    }

    double info_bits_per_frame() const
    {
        if (!coding) return static_cast<double>(capacity);
        return static_cast<double>(info_bits) / static_cast<double>(frames_per_block);
    }

    // Sends one frame through the channel and detects it. Draws depend only
    // on (stream, frame_index), never on the noise level.
    void transmit(std::span<const std::size_t> symbols, std::span<std::size_t> detected, std::uint64_t frame_index,
                  double noise_variance)
    {
        mod.modulate(symbols, tx);
        if (channel == ChannelKind::Awgn) {
            std::copy(tx.begin(), tx.end(), rx.begin());
            if (noise_variance > 0.0) {
                NoiseSource noise(sub_seed(stream, {stream::kNoise, frame_index}));
                noise.add(std::span<cd>(rx).first(n), noise_variance);
            }
            demod.demodulate(std::span<const cd>(rx).first(n), detected);
            return;
        }

        NoiseSource fading(sub_seed(stream, {stream::kFading, frame_index}));
        const auto realization = draw_realization(profile, sample_rate, n, fading);
        std::copy(tx.end() - static_cast<std::ptrdiff_t>(cp), tx.end(), tx_cp.begin());
        std::copy(tx.begin(), tx.end(), tx_cp.begin() + static_cast<std::ptrdiff_t>(cp));
        apply_multipath(tx_cp, realization.taps, rx);
        if (noise_variance > 0.0) {
            NoiseSource noise(sub_seed(stream, {stream::kNoise, frame_index}));
            noise.add(rx, noise_variance);
        }
        std::copy(rx.begin() + static_cast<std::ptrdiff_t>(cp), rx.end(), spectrum.begin());
        fft_plan(n).forward(spectrum);
        // Unit frame energy spread over N_C bins.
        const double bin_energy = 1.0 / static_cast<double>(n_unoccupied);
        kernels::active().mmse(spectrum, realization.freq_response, noise_variance / bin_energy, equalized);
        demod.demodulate_spectrum(equalized, detected);
    }

    static bool done(const BerRecord& r, const StopRule& stop)
    {
        return r.bit_errors >= stop.min_bit_errors || r.frames >= stop.max_frames || r.bits >= stop.max_bits;
    }

    void run_uncoded(BerRecord& r, double noise_variance, const StopRule& stop)
    {
        const std::size_t mask = m - 1;
        while (!done(r, stop)) {
            Rng rng(sub_seed(stream, {stream::kSymbols, r.frames}));
            for (auto& s : sent_symbols) s = static_cast<std::size_t>(rng()) & mask;
            transmit(sent_symbols, got_symbols, r.frames, noise_variance);
            for (std::size_t l = 0; l < n_clusters; ++l) {
                const auto diff = sent_symbols[l] ^ got_symbols[l];
                r.bit_errors += static_cast<std::size_t>(std::popcount(diff));
                r.symbol_errors += diff != 0 ? 1 : 0;
            }
            r.frames += 1;
            r.bits += capacity;
            r.symbols += n_clusters;
        }
    }

    void run_coded(BerRecord& r, double noise_variance, const StopRule& stop)
    {
        std::uint64_t block = 0;
        Bits info(info_bits);
        Bits channel_bits(frames_per_block * capacity);
        std::vector<std::size_t> received_symbols(frames_per_block * n_clusters);
        while (!done(r, stop)) {
            Rng rng(sub_seed(stream, {stream::kSymbols, block}));
            for (auto& b : info) b = static_cast<std::uint8_t>(rng() >> 63);
            const Bits interleaved = interleave(code.encode(info), permutation);
            std::copy(interleaved.begin(), interleaved.end(), channel_bits.begin());
            std::fill(channel_bits.begin() + static_cast<std::ptrdiff_t>(interleaved.size()), channel_bits.end(), 0);
            const auto symbols = map_bits_to_symbols(channel_bits, n_clusters, m);

            for (std::size_t f = 0; f < frames_per_block; ++f) {
                const auto sent = std::span<const std::size_t>(symbols).subspan(f * n_clusters, n_clusters);
                auto got = std::span<std::size_t>(received_symbols).subspan(f * n_clusters, n_clusters);
                transmit(sent, got, block * frames_per_block + f, noise_variance);
                for (std::size_t l = 0; l < n_clusters; ++l) r.symbol_errors += sent[l] != got[l] ? 1 : 0;
            }

            Bits demapped = map_symbols_to_bits(received_symbols, n_clusters, m);
            demapped.resize(coded_bits);
            const Bits decoded = code.decode(deinterleave(demapped, permutation));
            for (std::size_t i = 0; i < info_bits; ++i) r.bit_errors += decoded[i] != info[i] ? 1 : 0;

            r.frames += frames_per_block;
            r.bits += info_bits;
            r.symbols += frames_per_block * n_clusters;
            ++block;
        }
    }

    ChannelKind channel;
    ChannelProfile profile;
    double sample_rate;
    bool coding;
    std::size_t info_bits;
    std::size_t n;
    std::size_t m;
    std::size_t n_clusters;
    std::size_t n_unoccupied;
    unsigned bits_per_symbol;
    std::size_t capacity;
    std::uint64_t stream;
    std::size_t cp = 0;

    Modulator mod;
    Demodulator demod;
    ConvolutionalCode code;
    std::size_t coded_bits = 0;
    std::size_t frames_per_block = 0;
    std::vector<std::size_t> permutation;

    ComplexVec tx, tx_cp, rx, spectrum, equalized;
    std::vector<std::size_t> sent_symbols, got_symbols;
};

LinkSimulator::LinkSimulator(const SimConfig& config, LinkSetup setup)
    : impl_(std::make_shared<Impl>(config, setup)), setup_(std::move(setup))
{
}

double LinkSimulator::info_bits_per_frame() const { return impl_->info_bits_per_frame(); }

BerRecord LinkSimulator::run(double ebn0_db, const StopRule& stop)
{
    BerRecord r;
    r.scheme = setup_.scheme;
    r.n_bins = impl_->n;
    r.m_order = impl_->m;
    r.n_clusters = impl_->n_clusters;
    r.ebn0_db = ebn0_db;
    const double noise_variance = ebn0_to_noise_variance(ebn0_db, info_bits_per_frame(), 1.0, impl_->n);
    if (impl_->coding) {
        impl_->run_coded(r, noise_variance, stop);
    } else {
        impl_->run_uncoded(r, noise_variance, stop);
    }
    return r;
}

}  // namespace tdcs
