#include "oracles.hpp"

#include "tdcs/channel.hpp"
#include "tdcs/fft.hpp"

#include <doctest.h>

#include <limits>
#include <sstream>

using namespace tdcs;

TEST_CASE("AWGN source")
{
    std::mt19937_64 rng(1);
    const auto x = oracle::random_vector(64, rng);
    auto y = x;
    NoiseSource(5).add(y, 0.0);
    CHECK(y == x);

    const std::size_t n = 1'000'000;
    ComplexVec a(n, 0.0), b(n, 0.0);
    NoiseSource(11).add(a, 0.25);
    NoiseSource(12).add(b, 0.25);
    double pa = 0.0;
    cd cross = 0.0;
    cd mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        pa += std::norm(a[i]);
        cross += a[i] * std::conj(b[i]);
        mean += a[i];
    }
    CHECK(std::abs(pa / n - 0.25) <= 0.0025);
    CHECK(std::abs(mean / static_cast<double>(n)) <= 3.0 * std::sqrt(0.25 / n));
    // Normalized cross-correlation of independent streams.
    CHECK(std::abs(cross / (0.25 * n)) <= 3.0 / std::sqrt(static_cast<double>(n)));

    ComplexVec c(1000, 0.0);
    NoiseSource(11).add(c, 0.25);
    CHECK(std::equal(c.begin(), c.end(), a.begin()));

    WaveformFrame frame{x, false, 64};
    CHECK(add_awgn(frame, 0.0, 3).samples == x);
    CHECK(add_awgn(frame, 1.0, 3).samples == add_awgn(frame, 1.0, 3).samples);
}

TEST_CASE("Eb/N0 to noise variance")
{
    CHECK(ebn0_to_noise_variance(0.0, 8.0, 1.0, 256) == doctest::Approx(0.125));
    CHECK(ebn0_to_noise_variance(10.0, 8.0, 1.0, 256) == doctest::Approx(0.0125));
    CHECK(ebn0_to_noise_variance(std::numeric_limits<double>::infinity(), 8.0, 1.0, 256) == 0.0);
    CHECK_THROWS_AS(ebn0_to_noise_variance(0.0, 0.0, 1.0, 256), TdcsError);
    CHECK_THROWS_AS(ebn0_to_noise_variance(0.0, 8.0, 1.0, 0), TdcsError);
}

TEST_CASE("cyclic prefix")
{
    CHECK(cp_length(256) == 64);
    CHECK(cp_length(1024) == 256);
    CHECK_THROWS_AS(cp_length(6), TdcsError);

    std::mt19937_64 rng(2);
    const WaveformFrame body{oracle::random_vector(64, rng), false, 64};
    const auto with_cp = add_cp(body);
    REQUIRE(with_cp.samples.size() == 80);
    CHECK(with_cp.has_cp);
    for (std::size_t i = 0; i < 16; ++i) CHECK(with_cp.samples[i] == body.samples[48 + i]);
    CHECK(remove_cp(with_cp).samples == body.samples);
    CHECK_THROWS_AS(remove_cp(body), TdcsError);
    CHECK_THROWS_AS(add_cp(with_cp), TdcsError);
}

TEST_CASE("fading realizations")
{
    const auto profile = ChannelProfile::cost207_rax6();
    REQUIRE(profile.tap_delays_us.size() == 6);
    const auto p = profile.normalized_powers();
    CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0));

    // 10 MHz: delays round to 0..5 samples, inside a 64-sample prefix.
    const auto r = draw_realization(profile, 10e6, 256, 4);
    CHECK(r.taps.size() == 6);
    CHECK(r.freq_response.size() == 256);
    const auto h = oracle::dft([&] {
        std::vector<cd> padded(256, 0.0);
        std::copy(r.taps.begin(), r.taps.end(), padded.begin());
        return padded;
    }());
    for (std::size_t k = 0; k < 256; ++k) CHECK(std::abs(h[k] - r.freq_response[k]) <= 1e-9);

    double total = 0.0;
    NoiseSource src(8);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto d = draw_realization(profile, 10e6, 256, src);
        for (const auto& t : d.taps) total += std::norm(t);
    }
    CHECK(std::abs(total / draws - 1.0) <= 0.02);

    // 16-bin frame at 10 MHz has a 4-sample (0.4 us) prefix.
    CHECK_THROWS_WITH_AS(draw_realization(profile, 10e6, 16, 1), doctest::Contains("CP too short"), TdcsError);

    const ChannelProfile flat{"flat", {0.0}, {0.0}};
    const auto f = draw_realization(flat, 10e6, 64, 9);
    REQUIRE(f.taps.size() == 1);
    for (const auto& v : f.freq_response) CHECK(std::abs(v - f.taps[0]) <= 1e-12);
}

TEST_CASE("multipath convolution")
{
    std::mt19937_64 rng(3);
    const auto body = oracle::random_vector(64, rng);
    const auto tx = add_cp(WaveformFrame{body, false, 64});

    ComplexVec identity_out(tx.samples.size());
    apply_multipath(tx.samples, ComplexVec{cd(1.0, 0.0)}, identity_out);
    CHECK(identity_out == tx.samples);

    const ComplexVec taps{cd(0.8, 0.1), cd(0.0, 0.0), cd(-0.3, 0.4)};
    ComplexVec out(tx.samples.size());
    apply_multipath(tx.samples, taps, out);
    const auto expected = oracle::linear_convolution(tx.samples, taps);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(std::abs(out[i] - expected[i]) <= 1e-12);

    ChannelRealization real{taps, {}};
    std::vector<cd> padded(64, 0.0);
    std::copy(taps.begin(), taps.end(), padded.begin());
    real.freq_response = oracle::dft(padded);
    const auto rx = remove_cp(apply_multipath(tx, real));
    const auto y = oracle::dft(rx.samples);
    const auto x = oracle::dft(body);
    for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(y[k] - real.freq_response[k] * x[k]) <= 1e-9);

    const auto eq = mmse_equalize(y, real, 0.0, 1.0);
    for (std::size_t k = 0; k < 64; ++k) CHECK(std::abs(eq[k] - x[k]) <= 1e-9);
}

TEST_CASE("MMSE equalizer limits")
{
    const ChannelRealization one{{cd(1.0, 0.0)}, ComplexVec(8, cd(1.0, 0.0))};
    const ChannelRealization two{{cd(2.0, 0.0)}, ComplexVec(8, cd(2.0, 0.0))};
    const ComplexVec r(8, cd(0.5, -1.0));
    const auto a = mmse_equalize(r, one, 0.0, 1.0);
    const auto b = mmse_equalize(r, two, 0.0, 1.0);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(std::abs(a[k] - r[k]) <= 1e-15);
        CHECK(std::abs(b[k] - r[k] / 2.0) <= 1e-15);
    }
    // Regularization shrinks toward zero: H = 1, sigma^2 / E_bin = 1 halves.
    const auto c = mmse_equalize(r, one, 0.5, 0.5);
    for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(c[k] - r[k] / 2.0) <= 1e-15);
    CHECK_THROWS_AS(mmse_equalize(ComplexVec(4), one, 0.0, 1.0), TdcsError);
}

TEST_CASE("channel profile text format")
{
    const auto profile = ChannelProfile::cost207_rax6();
    std::stringstream ss;
    write_channel_profile(ss, profile);
    const auto back = read_channel_profile(ss);
    CHECK(back.name == profile.name);
    CHECK(back.tap_delays_us == profile.tap_delays_us);
    CHECK(back.tap_powers_db == profile.tap_powers_db);

    std::istringstream text("# comment\ntwo-tap\n0 0\n# mid\n1.5 -3\n");
    const auto two = read_channel_profile(text);
    CHECK(two.name == "two-tap");
    CHECK(two.tap_delays_us == std::vector<double>{0.0, 1.5});
    CHECK(two.tap_powers_db == std::vector<double>{0.0, -3.0});

    std::istringstream empty("# nothing\nname\n");
    CHECK_THROWS_AS(read_channel_profile(empty), TdcsError);
    std::istringstream bad("name\n0 x\n");
    CHECK_THROWS_AS(read_channel_profile(bad), TdcsError);
}
