#pragma once

// Batch experiments: BER sweeps, required-Eb/N0 (efficiency) searches and the
// sidelobe study, with CSV output.

#include "tdcs/channel.hpp"
#include "tdcs/coding.hpp"
#include "tdcs/spectrum.hpp"
#include "tdcs/waveform.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>

namespace tdcs {

enum class Scheme { Continuous, Random };
enum class ChannelKind { Awgn, Multipath };

std::string_view to_string(Scheme s);
std::string_view to_string(ChannelKind c);
Scheme parse_scheme(std::string_view s);
ChannelKind parse_channel(std::string_view s);

struct SimConfig {
    BandScenario scenario = BandScenario::reference();
    std::size_t n_bins = 256;
    std::size_t m_order = 0;  // 0 selects M = N
    std::vector<std::size_t> clusters{1, 2, 4, 8};
    std::vector<Scheme> schemes{Scheme::Random, Scheme::Continuous};
    std::uint64_t seed = 1;
    // Random scheme: the partition is the best of this many random draws
    // (beta_min search); 1 uses a single draw.
    std::size_t partition_trials = 10000;

    ChannelKind channel = ChannelKind::Awgn;
    ChannelProfile profile = ChannelProfile::cost207_rax6();
    double sample_rate_hz = 0.0;  // 0 selects the scenario bandwidth

    bool coding = false;
    CodeConfig code{};
    std::size_t info_bits_per_block = 1018;

    std::vector<double> ebn0_grid_db{0, 2, 4, 6, 8, 10};
    std::size_t min_bit_errors = 200;
    std::size_t max_frames = 1'000'000;

    double target_ber = 1e-3;
    double search_lo_db = -4.0;
    double search_hi_db = 40.0;
    double search_tolerance_db = 0.02;

    std::size_t sidelobe_trials = 10000;
    unsigned threads = 0;  // 0 selects the hardware concurrency

    std::size_t effective_m_order() const { return m_order == 0 ? n_bins : m_order; }
    double effective_sample_rate() const { return sample_rate_hz > 0.0 ? sample_rate_hz : scenario.bandwidth_hz; }
    unsigned effective_threads() const;

    /// Checks M | N, M a power of two, and that every L divides N_C.
    void validate() const;
};

/// INI-style text: [scenario], [link], [channel], [coding], [sweep],
/// [search], [sidelobes] sections with key = value lines. Unknown keys are
/// rejected. See README for the full key list.
SimConfig parse_config(std::istream& in);
/// Relative channel profile paths resolve against base_dir.
SimConfig parse_config_at(std::istream& in, const std::filesystem::path& base_dir);
SimConfig load_config(const std::string& path);

/// eta = L * (W/N) * log2(M) / (gamma * W); L = 1 gives the single-stream value.
double spectrum_efficiency(std::size_t n_bins, std::size_t m_order, std::size_t n_clusters,
                           const BandScenario& scenario);

/// Everything fixed for one (scheme, L) link.
struct LinkSetup {
    Scheme scheme = Scheme::Random;
    AvailabilityVector avail;
    ClusterPartition partition;
    PhaseVector phase;
    std::size_t m_order = 0;
    SidelobeMetric sidelobes;
    std::uint64_t partition_seed = 0;
    std::uint64_t stream_seed = 0;  // data, noise and fading draws
};

LinkSetup make_link(const SimConfig& config, Scheme scheme, std::size_t n_clusters);

std::uint64_t partition_seed(std::uint64_t seed, std::size_t n_clusters);
std::uint64_t stream_seed(std::uint64_t seed, std::size_t n_clusters);

struct BerRecord {
    Scheme scheme = Scheme::Random;
    std::size_t n_bins = 0;
    std::size_t m_order = 0;
    std::size_t n_clusters = 0;
    double ebn0_db = 0.0;
    std::size_t frames = 0;
    std::size_t bits = 0;
    std::size_t bit_errors = 0;
    std::size_t symbols = 0;
    std::size_t symbol_errors = 0;

    double ber() const { return bits == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits); }
    double ser() const
    {
        return symbols == 0 ? 0.0 : static_cast<double>(symbol_errors) / static_cast<double>(symbols);
    }
};

struct StopRule {
    std::size_t min_bit_errors = 200;
    std::size_t max_frames = 1'000'000;
    std::size_t max_bits = std::numeric_limits<std::size_t>::max();
};

/// Simulates one link at a given Eb/N0. Frame i (or coded block j) always
/// draws its data, noise and fading from sub-seeds of the link's stream
/// seed, so different Eb/N0 values see the same data and noise shapes.
class LinkSimulator {
public:
    LinkSimulator(const SimConfig& config, LinkSetup setup);

    const LinkSetup& setup() const { return setup_; }

    /// Information bits carried per TDCS frame (after coding, if enabled).
    double info_bits_per_frame() const;

    /// ebn0_db = +inf disables noise.
    BerRecord run(double ebn0_db, const StopRule& stop);

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
    LinkSetup setup_;
};

/// One record per (scheme, L, Eb/N0) in config order. on_record, if set, is
/// called (serialized) as each point completes.
std::vector<BerRecord> run_ber_sweep(const SimConfig& config,
                                     const std::function<void(const BerRecord&)>& on_record = {});

struct EfficiencyRecord {
    Scheme scheme = Scheme::Random;
    std::size_t n_bins = 0;
    std::size_t m_order = 0;
    std::size_t n_clusters = 0;
    double eta = 0.0;
    double target_ber = 0.0;
    double required_ebn0_db = std::numeric_limits<double>::quiet_NaN();
    bool reached = false;
    std::size_t evaluations = 0;
};

/// Eb/N0 at which BER crosses target, found by bisection on [lo, hi]. Each
/// evaluation stops after min_bit_errors errors or min_bit_errors / target
/// bits, whichever comes first.
EfficiencyRecord find_required_ebn0(const SimConfig& config, const LinkSetup& setup);

std::vector<EfficiencyRecord> run_efficiency_study(const SimConfig& config);

struct SidelobeRecord {
    std::size_t n_bins = 0;
    std::size_t n_unoccupied = 0;
    std::size_t n_clusters = 0;
    std::size_t trials = 0;
    SidelobeMetric continuous;
    SidelobeMetric random_min;
    std::size_t best_trial = 0;
    double log10_search_space = 0.0;
};

std::vector<SidelobeRecord> run_sidelobe_study(const SimConfig& config);

void write_ber_csv(std::ostream& out, std::span<const BerRecord> records);
void write_efficiency_csv(std::ostream& out, std::span<const EfficiencyRecord> records);
void write_sidelobe_csv(std::ostream& out, std::span<const SidelobeRecord> records);

/// JSON manifest of the resolved config and every derived seed.
std::string run_manifest(const SimConfig& config, std::string_view command);

}  // namespace tdcs
