#include "tdcs/channel.hpp"

#include "tdcs/fft.hpp"
#include "tdcs/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace tdcs {

std::vector<double> ChannelProfile::normalized_powers() const
{
    if (tap_delays_us.size() != tap_powers_db.size() || tap_delays_us.empty())
        throw TdcsError("channel profile needs matching, non-empty delay and power lists");
    std::vector<double> linear(tap_powers_db.size());
    std::transform(tap_powers_db.begin(), tap_powers_db.end(), linear.begin(),
                   [](double db) { return std::pow(10.0, db / 10.0); });
    const double total = std::accumulate(linear.begin(), linear.end(), 0.0);
    for (auto& p : linear) p /= total;
    return linear;
}

ChannelProfile ChannelProfile::cost207_rax6()
{
    return ChannelProfile{"COST207-RAx6", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}, {0.0, -4.0, -8.0, -12.0, -16.0, -20.0}};
}

ChannelProfile read_channel_profile(std::istream& in)
{
    ChannelProfile profile;
    bool have_name = false;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        if (!have_name) {
            const auto last = line.find_last_not_of(" \t\r");
            profile.name = line.substr(first, last - first + 1);
            have_name = true;
            continue;
        }
        std::istringstream fields(line);
        double delay = 0.0;
        double power = 0.0;
        if (!(fields >> delay >> power)) throw TdcsError("malformed channel profile line: " + line);
        if (delay < 0.0) throw TdcsError("negative tap delay");
        profile.tap_delays_us.push_back(delay);
        profile.tap_powers_db.push_back(power);
    }
    if (!have_name || profile.tap_delays_us.empty()) throw TdcsError("channel profile has no taps");
    return profile;
}

void write_channel_profile(std::ostream& out, const ChannelProfile& profile)
{
    out << profile.name << '\n';
    for (std::size_t i = 0; i < profile.tap_delays_us.size(); ++i)
        out << profile.tap_delays_us[i] << ' ' << profile.tap_powers_db[i] << '\n';
}

cd NoiseSource::draw(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal_(rng_);
    const double im = normal_(rng_);
    return {s * re, s * im};
}

void NoiseSource::add(std::span<cd> x, double variance)
{
    if (variance < 0.0) throw TdcsError("noise variance must be non-negative");
    if (variance == 0.0) return;
    scratch_.resize(x.size());
    for (auto& w : scratch_) {
        const double re = normal_(rng_);
        const double im = normal_(rng_);
        w = {re, im};
    }
    kernels::active().axpy(x, scratch_, std::sqrt(variance / 2.0));
}

WaveformFrame add_awgn(const WaveformFrame& frame, double noise_variance, std::uint64_t seed)
{
    WaveformFrame out = frame;
    NoiseSource noise(seed);
    noise.add(out.samples, noise_variance);
    return out;
}

double ebn0_to_noise_variance(double ebn0_db, double info_bits_per_frame, double frame_energy,
                              std::size_t frame_length_samples)
{
    if (!(info_bits_per_frame > 0.0)) throw TdcsError("info bits per frame must be positive");
    if (frame_length_samples == 0) throw TdcsError("frame length must be positive");
    if (std::isinf(ebn0_db) && ebn0_db > 0) return 0.0;
    return frame_energy / (info_bits_per_frame * std::pow(10.0, ebn0_db / 10.0));
}

std::size_t cp_length(std::size_t n_bins)
{
    if (n_bins % 4 != 0) throw TdcsError("n_bins must be divisible by 4 for the cyclic prefix");
    return n_bins / 4;
}

WaveformFrame add_cp(const WaveformFrame& frame)
{
    if (frame.has_cp) throw TdcsError("frame already has a cyclic prefix");
    const std::size_t n = frame.samples.size();
    const std::size_t cp = cp_length(n);
    WaveformFrame out{ComplexVec(), true, frame.n_bins};
    out.samples.reserve(n + cp);
    out.samples.insert(out.samples.end(), frame.samples.end() - static_cast<std::ptrdiff_t>(cp), frame.samples.end());
    out.samples.insert(out.samples.end(), frame.samples.begin(), frame.samples.end());
    return out;
}

WaveformFrame remove_cp(const WaveformFrame& frame)
{
    if (!frame.has_cp) throw TdcsError("frame has no cyclic prefix");
    const std::size_t n = frame.n_bins;
    const std::size_t cp = cp_length(n);
    if (frame.samples.size() != n + cp) throw TdcsError("frame length does not match n_bins + prefix");
    return WaveformFrame{ComplexVec(frame.samples.begin() + static_cast<std::ptrdiff_t>(cp), frame.samples.end()),
                         false, n};
}

ChannelRealization draw_realization(const ChannelProfile& profile, double sample_rate_hz, std::size_t n_bins,
                                    NoiseSource& source)
{
    const auto powers = profile.normalized_powers();
    const double cp_seconds = static_cast<double>(cp_length(n_bins)) / sample_rate_hz;
    std::size_t max_delay = 0;
    std::vector<std::size_t> delays(powers.size());
    for (std::size_t i = 0; i < powers.size(); ++i) {
        const double delay_s = profile.tap_delays_us[i] * 1e-6;
        if (delay_s >= cp_seconds) throw TdcsError("CP too short");
        delays[i] = static_cast<std::size_t>(std::llround(delay_s * sample_rate_hz));
        max_delay = std::max(max_delay, delays[i]);
    }
    ChannelRealization r;
    r.taps.assign(max_delay + 1, cd{0.0, 0.0});
    for (std::size_t i = 0; i < powers.size(); ++i) r.taps[delays[i]] += source.draw(powers[i]);
    r.freq_response.assign(n_bins, cd{0.0, 0.0});
    std::copy(r.taps.begin(), r.taps.end(), r.freq_response.begin());
    fft_plan(n_bins).forward(r.freq_response);
    return r;
}

ChannelRealization draw_realization(const ChannelProfile& profile, double sample_rate_hz, std::size_t n_bins,
                                    std::uint64_t seed)
{
    NoiseSource source(seed);
    return draw_realization(profile, sample_rate_hz, n_bins, source);
}

void apply_multipath(std::span<const cd> in, std::span<const cd> taps, std::span<cd> out)
{
    for (std::size_t n = 0; n < in.size(); ++n) {
        cd acc = 0.0;
        const std::size_t reach = std::min(taps.size(), n + 1);
        for (std::size_t d = 0; d < reach; ++d) acc += taps[d] * in[n - d];
        out[n] = acc;
    }
}

WaveformFrame apply_multipath(const WaveformFrame& frame_with_cp, const ChannelRealization& realization)
{
    if (!frame_with_cp.has_cp) throw TdcsError("multipath channel requires a cyclic prefix");
    if (realization.taps.size() > cp_length(frame_with_cp.n_bins) + 1) throw TdcsError("CP too short");
    WaveformFrame out{ComplexVec(frame_with_cp.samples.size()), true, frame_with_cp.n_bins};
    apply_multipath(frame_with_cp.samples, realization.taps, out.samples);
    return out;
}

ComplexVec mmse_equalize(std::span<const cd> received_freq, const ChannelRealization& realization,
                         double noise_variance, double bin_energy)
{
    if (received_freq.size() != realization.freq_response.size()) throw TdcsError("equalizer length mismatch");
    if (noise_variance < 0.0 || !(bin_energy > 0.0)) throw TdcsError("invalid equalizer parameters");
    ComplexVec out(received_freq.size());
    kernels::active().mmse(received_freq, realization.freq_response, noise_variance / bin_energy, out);
    return out;
}

}  // namespace tdcs
