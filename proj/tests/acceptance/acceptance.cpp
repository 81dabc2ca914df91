// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include "../oracles.hpp"

#include "tdcs/channel.hpp"
#include "tdcs/coding.hpp"
#include "tdcs/fft.hpp"
#include "tdcs/harness.hpp"
#include "tdcs/kernels.hpp"
#include "tdcs/receiver.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

using namespace tdcs;

namespace {

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail, double seconds)
{
    std::cout << (pass ? "PASS " : "FAIL ") << name << " | " << detail << " | " << std::fixed << std::setprecision(1)
              << seconds << " s" << std::endl;
    if (!pass) ++failures;
}

template <typename F>
void criterion(const std::string& name, F&& body)
{
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool pass = false;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(pass, name, detail.str(), seconds);
}

std::string fmt(double v, int digits = 3)
{
    std::ostringstream o;
    o << std::fixed << std::setprecision(digits) << v;
    return o.str();
}

double required(const SimConfig& c, Scheme scheme, std::size_t l, std::ostream& log)
{
    const auto rec = find_required_ebn0(c, make_link(c, scheme, l));
    log << to_string(scheme) << " L=" << l << ": "
        << (rec.reached ? fmt(rec.required_ebn0_db, 2) + " dB" : std::string("not reached")) << "; ";
    return rec.reached ? rec.required_ebn0_db : std::numeric_limits<double>::infinity();
}

bool efficiency(std::ostream& d)
{
    const auto ref = BandScenario::reference();
    const double lo = spectrum_efficiency(1024, 1024, 8, ref);
    const double hi = spectrum_efficiency(1024, 1024, 64, ref);
    d << "eta(L=8)=" << fmt(lo, 5) << " eta(L=64)=" << fmt(hi, 5) << " expected 0.104 / 0.833";
    return std::abs(lo - 0.104) <= 0.001 && std::abs(hi - 0.833) <= 0.001;
}

bool loopback(std::ostream& d)
{
    std::size_t errors = 0, frames = 0;
    for (const std::size_t n : {256u, 1024u}) {
        SimConfig c;
        c.n_bins = n;
        c.clusters = {1, 2, 4, 8, 16, 32, 64};
        c.schemes = {Scheme::Random, Scheme::Continuous};
        c.ebn0_grid_db = {std::numeric_limits<double>::infinity()};
        c.max_frames = 1000;
        c.min_bit_errors = std::numeric_limits<std::size_t>::max();
        for (const auto& r : run_ber_sweep(c)) {
            errors += r.symbol_errors;
            frames += r.frames;
        }
    }
    d << frames << " frames over 28 links, " << errors << " symbol errors";
    return errors == 0 && frames == 28 * 1000;
}

bool sidelobe_study(std::ostream& d)
{
    SimConfig c;
    c.clusters = {1, 2, 4, 8, 16, 32, 64};
    c.sidelobe_trials = 10000;
    const auto recs = run_sidelobe_study(c);
    bool pass = true;
    double prev = -1.0;
    for (const auto& r : recs) {
        d << "L=" << r.n_clusters << " cont=" << fmt(r.continuous.beta) << " rand_min=" << fmt(r.random_min.beta)
          << "; ";
        if (r.n_clusters >= 2 && !(r.random_min.beta < r.continuous.beta)) pass = false;
        if (r.random_min.beta < prev) pass = false;
        prev = r.random_min.beta;
    }
    return pass;
}

bool brute_force(std::ostream& d)
{
    // 16 bins, 8 free: {0, 1, 6, 7, 8, 9, 14, 15}.
    const BandScenario scenario{16.0, {{2.0, 6.0}, {10.0, 14.0}}};
    const auto avail = build_availability(scenario, 16);
    if (avail.n_unoccupied() != 8) {
        d << "unexpected N_C " << avail.n_unoccupied();
        return false;
    }

    std::size_t count = 0;
    double exhaustive = std::numeric_limits<double>::infinity();
    double oracle_min = std::numeric_limits<double>::infinity();
    std::set<std::vector<IndexSet>> all;
    oracle::enumerate_partitions(avail.unoccupied(), 2, [&](const std::vector<std::vector<std::size_t>>& cl) {
        ++count;
        all.insert(cl);
        exhaustive = std::min(exhaustive, largest_sidelobe(ClusterPartition(cl, 16)).beta);
        oracle_min = std::min(oracle_min, oracle::beta(cl, 16));
    });

    const std::size_t trials = 2000;
    const std::uint64_t seed = 5;
    std::set<std::vector<IndexSet>> covered;
    for (std::size_t i = 0; i < trials; ++i)
        covered.insert(partition_random(avail, 2, beta_trial_seed(seed, i)).clusters());
    const auto search = estimate_beta_min(avail, 2, trials, seed, 1);

    d << count << " partitions enumerated, " << covered.size() << " covered by " << trials
      << " trials; exhaustive beta_min=" << std::setprecision(17) << exhaustive << " search=" << search.best_metric.beta
      << " direct oracle=" << oracle_min;
    return count == 70 && covered == all && search.best_metric.beta == exhaustive &&
           std::abs(oracle_min - exhaustive) <= 1e-12;
}

SimConfig awgn_desk(std::size_t n_bins, double target)
{
    SimConfig c;
    c.n_bins = n_bins;
    c.target_ber = target;
    c.min_bit_errors = 200;
    c.max_frames = 100'000'000;
    return c;
}

bool awgn_ordering(std::ostream& d)
{
    const auto c = awgn_desk(256, 1e-3);
    const double l1 = required(c, Scheme::Random, 1, d);
    const double l2 = required(c, Scheme::Random, 2, d);
    const double r8 = required(c, Scheme::Random, 8, d);
    const double c8 = required(c, Scheme::Continuous, 8, d);
    d << "(a) |L2-L1|=" << fmt(std::abs(l2 - l1), 2) << " dB (<= 0.5), (b) cont-rand at L=8 = " << fmt(c8 - r8, 2)
      << " dB (>= 3)";
    return std::abs(l2 - l1) <= 0.5 && c8 - r8 >= 3.0;
}

bool paper_mode(std::ostream& d)
{
    const auto c = awgn_desk(1024, 1e-4);
    const double l8 = required(c, Scheme::Random, 8, d);
    const double l64 = required(c, Scheme::Random, 64, d);
    d << "expected 4.1 +- 0.5 and 6.1 +- 0.5 dB";
    return std::abs(l8 - 4.1) <= 0.5 && std::abs(l64 - 6.1) <= 0.5;
}

bool multipath_ordering(std::ostream& d)
{
    auto c = awgn_desk(256, 1e-3);
    c.channel = ChannelKind::Multipath;
    c.coding = true;
    const double r2 = required(c, Scheme::Random, 2, d);
    const double c2 = required(c, Scheme::Continuous, 2, d);
    const double r4 = required(c, Scheme::Random, 4, d);
    const double r8 = required(c, Scheme::Random, 8, d);
    d << "random beats continuous at L=2 by " << fmt(c2 - r2, 2) << " dB; delta(8-4)=" << fmt(r8 - r4, 2)
      << " dB vs delta(4-2)=" << fmt(r4 - r2, 2) << " dB";
    return r2 < c2 && std::isfinite(r4) && r8 - r4 > r4 - r2;
}

bool invariants(std::ostream& d)
{
    std::mt19937_64 rng(2024);
    bool ok = true;

    // Frame energy.
    const auto avail = build_availability(BandScenario::reference(), 256);
    const auto phase = generate_phase_vector(1, 256);
    double worst_energy = 0.0;
    for (const std::size_t l : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
        const auto part = partition_random(avail, l, rng());
        SymbolVector sym{std::vector<std::size_t>(l), 256};
        for (auto& s : sym.symbols) s = rng() % 256;
        double e = 0.0;
        for (const auto& v : modulate(part, phase, sym).samples) e += std::norm(v);
        worst_energy = std::max(worst_energy, std::abs(e - 1.0));
    }
    ok &= worst_energy <= 1e-9;
    d << "energy err " << std::scientific << std::setprecision(1) << worst_energy;

    // Transform vs direct correlation.
    double worst_corr = 0.0;
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = std::size_t{4} << (t % 5);
        const auto r = oracle::random_vector(n, rng);
        const auto p = generate_phase_vector(rng(), n);
        IndexSet cluster;
        for (std::size_t k = 0; k < n; ++k)
            if (rng() & 1u) cluster.push_back(k);
        if (cluster.empty()) cluster.push_back(n - 1);
        std::vector<cd> spec(n, 0.0);
        for (const auto k : cluster) spec[k] = p[k];
        const auto expected = oracle::cyclic_correlation(r, oracle::dft(spec, true));
        const auto got = correlate(r, cluster, p);
        for (std::size_t i = 0; i < n; ++i) worst_corr = std::max(worst_corr, std::abs(got[i] - expected[i]));
    }
    ok &= worst_corr <= 1e-9;
    d << ", correlation err " << worst_corr;

    // CP circularity.
    double worst_cp = 0.0;
    const auto profile = ChannelProfile::cost207_rax6();
    for (int t = 0; t < 20; ++t) {
        const auto body = oracle::random_vector(256, rng);
        const auto real = draw_realization(profile, 10e6, 256, rng());
        const auto rx = remove_cp(apply_multipath(add_cp(WaveformFrame{body, false, 256}), real));
        const auto y = oracle::dft(rx.samples);
        const auto x = oracle::dft(body);
        for (std::size_t k = 0; k < 256; ++k)
            worst_cp = std::max(worst_cp, std::abs(y[k] - real.freq_response[k] * x[k]));
    }
    ok &= worst_cp <= 1e-9;
    d << ", CP err " << worst_cp;

    // Noise calibration.
    ComplexVec w(1'000'000, 0.0);
    NoiseSource(77).add(w, 0.3);
    double power = 0.0;
    for (const auto& v : w) power += std::norm(v);
    power /= static_cast<double>(w.size());
    ok &= std::abs(power / 0.3 - 1.0) <= 0.01;
    d << ", noise var ratio " << std::fixed << std::setprecision(4) << power / 0.3;

    // Coding.
    const ConvolutionalCode code;
    std::size_t failures_seen = 0, cases = 0;
    for (int rep = 0; rep < 8; ++rep) {
        Bits info(64);
        for (auto& b : info) b = static_cast<std::uint8_t>(rng() & 1u);
        const auto coded = code.encode(info);
        failures_seen += code.decode(coded) != info;
        for (std::size_t i = 0; i < coded.size(); ++i) {
            auto hit = coded;
            hit[i] ^= 1u;
            failures_seen += code.decode(hit) != info;
            ++cases;
        }
    }
    ok &= failures_seen == 0;
    d << ", coding failures " << failures_seen << "/" << cases;
    return ok;
}

}  // namespace

int main()
{
    std::cout << "kernels: " << kernels::active().name << std::endl;
    criterion("spectrum efficiency", efficiency);
    criterion("noiseless loopback", loopback);
    criterion("sidelobe study", sidelobe_study);
    criterion("brute-force partition oracle", brute_force);
    criterion("numerical invariants", invariants);
    criterion("AWGN ordering (BER 1e-3, N=256)", awgn_ordering);
    criterion("multipath ordering (coded, BER 1e-3, N=256)", multipath_ordering);
    criterion("paper-mode AWGN (BER 1e-4, N=1024)", paper_mode);
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
