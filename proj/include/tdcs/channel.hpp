#pragma once

// AWGN and block-fading multipath channels, cyclic prefix handling and the
// per-bin MMSE equalizer.

#include "tdcs/common.hpp"
#include "tdcs/rng.hpp"
#include "tdcs/waveform.hpp"

#include <iosfwd>
#include <random>
#include <span>
#include <string>

namespace tdcs {

/// Tapped-delay-line power delay profile.
struct ChannelProfile {
    std::string name;
    std::vector<double> tap_delays_us;
    std::vector<double> tap_powers_db;

    /// Linear tap powers scaled to sum to one.
    std::vector<double> normalized_powers() const;

    /// COST 207 rural area, six taps: 0..0.5 us in 0.1 us steps,
    /// 0, -4, -8, -12, -16, -20 dB.
    static ChannelProfile cost207_rax6();
};

/// Text format: first non-comment line is the name, then one
/// "delay_us power_db" pair per line. Lines starting with '#' are skipped.
ChannelProfile read_channel_profile(std::istream& in);
void write_channel_profile(std::ostream& out, const ChannelProfile& profile);

struct ChannelRealization {
    ComplexVec taps;           // complex gain at sample delay d = 0..taps.size()-1
    ComplexVec freq_response;  // DFT of the taps zero-padded to N
};

/// Circularly-symmetric complex Gaussian noise source. Each call draws fresh
/// samples from the same seeded stream.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed) : rng_(seed) {}

    /// x[n] += w[n], w[n] ~ CN(0, variance).
    void add(std::span<cd> x, double variance);

    /// Complex Gaussian with E|z|^2 = variance.
    cd draw(double variance);

private:
    Rng rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    ComplexVec scratch_;
};

WaveformFrame add_awgn(const WaveformFrame& frame, double noise_variance, std::uint64_t seed);

/// sigma^2 = frame_energy / (info_bits_per_frame * 10^(ebn0_db / 10)),
/// i.e. the per-sample noise variance equals N0 for Eb = frame_energy / bits.
/// The result does not depend on the frame length, which is validated only.
double ebn0_to_noise_variance(double ebn0_db, double info_bits_per_frame, double frame_energy,
                              std::size_t frame_length_samples);

/// Prefix length used throughout: a quarter of the body.
std::size_t cp_length(std::size_t n_bins);

WaveformFrame add_cp(const WaveformFrame& frame);
WaveformFrame remove_cp(const WaveformFrame& frame);

/// One block-fading draw. Delays are rounded to the nearest sample at
/// sample_rate_hz; each tap is CN(0, normalized power). Throws "CP too short"
/// when the largest delay is not shorter than the N/4 prefix.
ChannelRealization draw_realization(const ChannelProfile& profile, double sample_rate_hz, std::size_t n_bins,
                                    std::uint64_t seed);
ChannelRealization draw_realization(const ChannelProfile& profile, double sample_rate_hz, std::size_t n_bins,
                                    NoiseSource& source);

/// Linear convolution with the taps, truncated to the frame length (the
/// channel starts from rest). After remove_cp the body is the circular
/// convolution of the transmitted body with the taps.
WaveformFrame apply_multipath(const WaveformFrame& frame_with_cp, const ChannelRealization& realization);
void apply_multipath(std::span<const cd> in, std::span<const cd> taps, std::span<cd> out);

/// Per-bin conj(H_k) / (|H_k|^2 + noise_variance / bin_energy), where
/// noise_variance is the per-sample sigma^2 and bin_energy the average
/// transmitted energy per occupied bin in the same units
/// (frame_energy / N_C for a TDCS frame).
ComplexVec mmse_equalize(std::span<const cd> received_freq, const ChannelRealization& realization,
                         double noise_variance, double bin_energy);

}  // namespace tdcs
