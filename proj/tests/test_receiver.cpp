#include "oracles.hpp"

#include "tdcs/channel.hpp"
#include "tdcs/fft.hpp"
#include "tdcs/receiver.hpp"

#include <doctest.h>

using namespace tdcs;

TEST_CASE("transform correlation equals direct cyclic correlation")
{
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = std::size_t{8} << (trial % 4);  // 8..64
        const auto r = oracle::random_vector(n, rng);
        const auto phase = generate_phase_vector(rng(), n);
        IndexSet cluster;
        for (std::size_t k = 0; k < n; ++k)
            if (rng() % 3 != 0) cluster.push_back(k);
        if (cluster.empty()) cluster.push_back(0);

        std::vector<cd> ref_spectrum(n, 0.0);
        for (const auto k : cluster) ref_spectrum[k] = phase[k];
        const auto g = oracle::dft(ref_spectrum, true);
        const auto expected = oracle::cyclic_correlation(r, g);
        const auto got = correlate(r, cluster, phase);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(got[i] - expected[i]));
        CHECK(err <= 1e-9);
    }
}

TEST_CASE("mainlobe, orthogonality and detection")
{
    const auto avail = build_availability(BandScenario::reference(), 256);
    const auto phase = generate_phase_vector(5, 256);
    const auto partition = partition_random(avail, 4, 9);
    const double lambda = energy_normalization(256, 192);

    const auto fmw0 = synthesize_fmw(partition.cluster(0), phase, 256, lambda);
    const auto y = correlate(fmw0.time_samples, partition.cluster(0), phase);
    // Peak: lambda * |cluster| / N, real and positive.
    CHECK(y[0].real() == doctest::Approx(lambda * 48.0 / 256.0).epsilon(1e-12));
    CHECK(std::abs(y[0].imag()) <= 1e-14);
    for (std::size_t tau = 1; tau < 256; ++tau) CHECK(y[tau].real() < y[0].real());

    const auto other = correlate(fmw0.time_samples, partition.cluster(1), phase);
    for (const auto& v : other) CHECK(std::abs(v) <= 1e-14);

    const auto frame = modulate(partition_continuous(avail, 1), phase, SymbolVector{{5}, 256});
    CHECK(detect(correlate(frame.samples, avail.unoccupied(), phase), 256) == 5);
    CHECK(detect(std::vector<cd>(256, 0.0), 256) == 0);
    CHECK(detect(std::vector<cd>(256, 0.0), 16) == 0);

    const auto coarse = modulate(partition_continuous(avail, 1), phase, SymbolVector{{7}, 32});
    CHECK(detect(correlate(coarse.samples, avail.unoccupied(), phase), 32) == 7);
}

TEST_CASE("correlation for one cluster ignores the other clusters' symbols")
{
    const auto avail = build_availability(BandScenario::reference(), 256);
    const auto phase = generate_phase_vector(6, 256);
    const auto partition = partition_random(avail, 8, 2);
    std::mt19937_64 rng(3);
    SymbolVector base{std::vector<std::size_t>(8, 0), 256};
    for (auto& s : base.symbols) s = rng() % 256;
    const auto y0 = correlate(modulate(partition, phase, base).samples, partition.cluster(2), phase);
    for (int rep = 0; rep < 5; ++rep) {
        auto changed = base;
        for (std::size_t l = 0; l < 8; ++l)
            if (l != 2) changed.symbols[l] = rng() % 256;
        const auto y = correlate(modulate(partition, phase, changed).samples, partition.cluster(2), phase);
        for (std::size_t i = 0; i < 256; ++i) CHECK(std::abs(y[i] - y0[i]) <= 1e-13);
    }
}

TEST_CASE("single cluster receiver reduces to the classic correlator")
{
    const auto avail = build_availability(BandScenario::reference(), 64);
    const auto phase = generate_phase_vector(8, 64);
    const auto partition = partition_continuous(avail, 1);
    std::mt19937_64 rng(4);
    std::vector<cd> b_spectrum(64, 0.0);
    for (const auto k : avail.unoccupied()) b_spectrum[k] = phase[k];
    const auto b = oracle::dft(b_spectrum, true);
    for (int rep = 0; rep < 20; ++rep) {
        auto r = oracle::random_vector(64, rng);
        const auto classic = oracle::cyclic_correlation(r, b);
        std::size_t best = 0;
        for (std::size_t tau = 1; tau < 64; ++tau)
            if (classic[tau].real() > classic[best].real()) best = tau;
        CHECK(demodulate_frame(r, partition, phase, 64).symbols.at(0) == best);
    }
}

TEST_CASE("noiseless random-allocation sweep has no symbol errors")
{
    const auto avail = build_availability(BandScenario::reference(), 256);
    const auto phase = generate_phase_vector(9, 256);
    const auto partition = partition_random(avail, 8, 12);
    Modulator mod(partition, phase, 256);
    Demodulator demod(partition, phase, 256);
    std::mt19937_64 rng(5);
    ComplexVec frame(256);
    std::vector<std::size_t> sent(8), got(8);
    std::size_t errors = 0;
    for (int f = 0; f < 10000; ++f) {
        for (auto& s : sent) s = rng() % 256;
        mod.modulate(sent, frame);
        demod.demodulate(frame, got);
        for (std::size_t l = 0; l < 8; ++l) errors += sent[l] != got[l];
    }
    CHECK(errors == 0);

    const auto out = correlate_frame(frame, partition, phase, 256);
    CHECK(out.values.size() == 8);
    CHECK(out.detected_symbols == got);
}

TEST_CASE("two clusters at 10 dB stay below 1e-3 symbol error rate")
{
    const auto avail = build_availability(BandScenario::reference(), 256);
    const auto phase = generate_phase_vector(10, 256);
    const auto partition = partition_random(avail, 2, 3);
    Modulator mod(partition, phase, 256);
    Demodulator demod(partition, phase, 256);
    const double sigma2 = ebn0_to_noise_variance(10.0, 16.0, 1.0, 256);
    NoiseSource noise(99);
    std::mt19937_64 rng(6);
    ComplexVec frame(256);
    std::vector<std::size_t> sent(2), got(2);
    std::size_t errors = 0;
    const int frames = 100000;
    for (int f = 0; f < frames; ++f) {
        for (auto& s : sent) s = rng() % 256;
        mod.modulate(sent, frame);
        noise.add(frame, sigma2);
        demod.demodulate(frame, got);
        errors += (sent[0] != got[0]) + (sent[1] != got[1]);
    }
    CHECK(static_cast<double>(errors) / (2.0 * frames) < 1e-3);
}

TEST_CASE("a cluster on even bins only is ambiguous under a half-frame shift")
{
    const std::size_t n = 64;
    const auto phase = generate_phase_vector(11, n);
    const ClusterPartition partition({{2, 10, 36}, {1, 7, 41}}, n);
    CHECK(largest_sidelobe(partition).beta == doctest::Approx(1.0).epsilon(1e-12));
    const auto frame = modulate(partition, phase, SymbolVector{{40, 0}, n});
    // Shifts 8 and 40 are indistinguishable on cluster 0.
    const auto y = correlate(frame.samples, partition.cluster(0), phase);
    CHECK(std::abs(y[8] - y[40]) <= 1e-14);
    const auto s = demodulate_frame(frame.samples, partition, phase, n).symbols.at(0);
    CHECK((s == 8 || s == 40));
}
