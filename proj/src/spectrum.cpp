#include "tdcs/spectrum.hpp"

#include "tdcs/fft.hpp"
#include "tdcs/kernels.hpp"
#include "tdcs/parallel.hpp"
#include "tdcs/rng.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

namespace tdcs {

namespace {

std::vector<FrequencyRange> merged_ranges(std::vector<FrequencyRange> ranges)
{
    std::sort(ranges.begin(), ranges.end(), [](const auto& a, const auto& b) { return a.lo_hz < b.lo_hz; });
    std::vector<FrequencyRange> merged;
    for (const auto& r : ranges) {
        if (r.hi_hz <= r.lo_hz) continue;
        if (!merged.empty() && r.lo_hz <= merged.back().hi_hz) {
            merged.back().hi_hz = std::max(merged.back().hi_hz, r.hi_hz);
        } else {
            merged.push_back(r);
        }
    }
    return merged;
}

void check_divisible(std::size_t n_unoccupied, std::size_t n_clusters)
{
    if (n_clusters == 0 || n_unoccupied % n_clusters != 0) throw TdcsError("cluster size mismatch");
}

}  // namespace

double BandScenario::unoccupied_ratio() const
{
    double occupied_width = 0.0;
    for (const auto& r : merged_ranges(occupied)) {
        const double lo = std::clamp(r.lo_hz, 0.0, bandwidth_hz);
        const double hi = std::clamp(r.hi_hz, 0.0, bandwidth_hz);
        occupied_width += hi - lo;
    }
    return (bandwidth_hz - occupied_width) / bandwidth_hz;
}

BandScenario BandScenario::reference()
{
    return BandScenario{10e6, {{2.5e6, 3.75e6}, {6.25e6, 7.5e6}}};
}

AvailabilityVector AvailabilityVector::from_mask(std::vector<std::uint8_t> mask)
{
    AvailabilityVector a;
    a.mask_ = std::move(mask);
    for (std::size_t k = 0; k < a.mask_.size(); ++k) {
        if (a.mask_[k] > 1) throw TdcsError("availability mask entries must be 0 or 1");
        if (a.mask_[k] != 0) a.unoccupied_.push_back(k);
    }
    if (a.unoccupied_.empty()) throw TdcsError("no spectrum holes");
    return a;
}

ClusterPartition::ClusterPartition(std::vector<IndexSet> clusters, std::size_t n_bins)
    : clusters_(std::move(clusters)), n_bins_(n_bins)
{
    if (clusters_.empty()) throw TdcsError("partition has no clusters");
    const std::size_t size = clusters_.front().size();
    std::vector<std::uint8_t> seen(n_bins_, 0);
    for (auto& c : clusters_) {
        if (c.empty()) throw TdcsError("empty cluster");
        if (c.size() != size) throw TdcsError("cluster size mismatch");
        std::sort(c.begin(), c.end());
        for (const auto k : c) {
            if (k >= n_bins_) throw TdcsError("cluster index out of range");
            if (seen[k] != 0) throw TdcsError("clusters overlap");
            seen[k] = 1;
        }
    }
}

void ClusterPartition::validate(const AvailabilityVector& avail) const
{
    if (avail.n_bins() != n_bins_) throw TdcsError("partition bin count mismatch");
    IndexSet all;
    all.reserve(n_unoccupied());
    for (const auto& c : clusters_) all.insert(all.end(), c.begin(), c.end());
    std::sort(all.begin(), all.end());
    if (all != avail.unoccupied()) throw TdcsError("partition does not cover the spectrum holes");
}

AvailabilityVector build_availability(const BandScenario& scenario, std::size_t n_bins)
{
    if (n_bins < 2) throw TdcsError("n_bins must be at least 2");
    if (!(scenario.bandwidth_hz > 0.0)) throw TdcsError("bandwidth must be positive");
    for (const auto& r : scenario.occupied) {
        if (r.lo_hz < 0.0 || r.hi_hz > scenario.bandwidth_hz || r.hi_hz < r.lo_hz)
            throw TdcsError("occupied range outside [0, W)");
    }
    const auto ranges = merged_ranges(scenario.occupied);
    const double spacing = scenario.bandwidth_hz / static_cast<double>(n_bins);
    std::vector<std::uint8_t> mask(n_bins, 1);
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double center = (static_cast<double>(k) + 0.5) * spacing;
        for (const auto& r : ranges) {
            if (center >= r.lo_hz && center < r.hi_hz) {
                mask[k] = 0;
                break;
            }
        }
    }
    return AvailabilityVector::from_mask(std::move(mask));
}

ClusterPartition partition_continuous(const AvailabilityVector& avail, std::size_t n_clusters)
{
    check_divisible(avail.n_unoccupied(), n_clusters);
    const std::size_t size = avail.n_unoccupied() / n_clusters;
    const auto& holes = avail.unoccupied();
    std::vector<IndexSet> clusters(n_clusters);
    for (std::size_t l = 0; l < n_clusters; ++l)
        clusters[l].assign(holes.begin() + static_cast<std::ptrdiff_t>(l * size),
                           holes.begin() + static_cast<std::ptrdiff_t>((l + 1) * size));
    ClusterPartition p(std::move(clusters), avail.n_bins());
    p.validate(avail);
    return p;
}

ClusterPartition partition_random(const AvailabilityVector& avail, std::size_t n_clusters, std::uint64_t seed)
{
    check_divisible(avail.n_unoccupied(), n_clusters);
    const std::size_t size = avail.n_unoccupied() / n_clusters;
    IndexSet holes = avail.unoccupied();
    Rng rng(seed);
    std::shuffle(holes.begin(), holes.end(), rng);
    std::vector<IndexSet> clusters(n_clusters);
    for (std::size_t l = 0; l < n_clusters; ++l)
        clusters[l].assign(holes.begin() + static_cast<std::ptrdiff_t>(l * size),
                           holes.begin() + static_cast<std::ptrdiff_t>((l + 1) * size));
    ClusterPartition p(std::move(clusters), avail.n_bins());
    p.validate(avail);
    return p;
}

namespace {

// Full autocorrelation of a cluster indicator, tau = 0..N-1, normalized so
// tau = 0 is 1. Uses the inverse transform: IDFT(1_cluster)_tau * N / n.
void cluster_autocorrelation(std::span<const std::size_t> cluster, std::size_t n_bins, ComplexVec& buffer)
{
    if (cluster.empty()) throw TdcsError("empty cluster");
    buffer.assign(n_bins, cd{0.0, 0.0});
    for (const auto p : cluster) {
        if (p >= n_bins) throw TdcsError("cluster index out of range");
        buffer[p] = 1.0;
    }
    fft_plan(n_bins).inverse(buffer);
    kernels::active().scale(buffer, static_cast<double>(n_bins) / static_cast<double>(cluster.size()));
}

SidelobeMetric metric_of(const ClusterPartition& partition, ComplexVec& buffer)
{
    SidelobeMetric m{-std::numeric_limits<double>::infinity(), 0.0};
    const auto& k = kernels::active();
    for (const auto& c : partition.clusters()) {
        cluster_autocorrelation(c, partition.n_bins(), buffer);
        double re = 0.0;
        double norm = 0.0;
        k.max_real_and_norm(std::span<const cd>(buffer).subspan(1), re, norm);
        m.beta = std::max(m.beta, re);
        m.beta_abs = std::max(m.beta_abs, std::sqrt(norm));
    }
    return m;
}

}  // namespace

ComplexVec normalized_sidelobes(std::span<const std::size_t> cluster, std::size_t n_bins)
{
    ComplexVec buffer;
    cluster_autocorrelation(cluster, n_bins, buffer);
    return ComplexVec(buffer.begin() + 1, buffer.end());
}

SidelobeMetric largest_sidelobe(const ClusterPartition& partition)
{
    if (partition.n_bins() < 2) throw TdcsError("n_bins must be at least 2");
    ComplexVec buffer;
    return metric_of(partition, buffer);
}

SidelobeReport sidelobe_report(const ClusterPartition& partition)
{
    SidelobeReport report;
    for (const auto& c : partition.clusters()) report.per_cluster.push_back(normalized_sidelobes(c, partition.n_bins()));
    report.metric = largest_sidelobe(partition);
    return report;
}

std::uint64_t beta_trial_seed(std::uint64_t seed, std::size_t trial) { return sub_seed(seed, {stream::kTrial, trial}); }

BetaSearchResult estimate_beta_min(const AvailabilityVector& avail, std::size_t n_clusters, std::size_t trials,
                                   std::uint64_t seed, unsigned threads)
{
    if (trials == 0) throw TdcsError("trials must be at least 1");
    check_divisible(avail.n_unoccupied(), n_clusters);

    std::vector<SidelobeMetric> metrics(trials);
    parallel_for(trials, threads, [&](std::size_t i) {
        thread_local ComplexVec buffer;
        metrics[i] = metric_of(partition_random(avail, n_clusters, beta_trial_seed(seed, i)), buffer);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < trials; ++i)
        if (metrics[i].beta < metrics[best].beta) best = i;
    return BetaSearchResult{metrics[best], partition_random(avail, n_clusters, beta_trial_seed(seed, best)), best};
}

double SearchSpaceSize::stirling() const { return std::pow(10.0, log10_stirling); }

SearchSpaceSize search_space_size(std::size_t n_unoccupied, std::size_t n_clusters)
{
    check_divisible(n_unoccupied, n_clusters);
    using boost::multiprecision::cpp_int;
    const std::size_t size = n_unoccupied / n_clusters;

    // Product of binomials C(size*(L-l), size), accumulated exactly.
    cpp_int exact = 1;
    for (std::size_t l = 0; l < n_clusters; ++l) {
        const std::size_t remaining = size * (n_clusters - l);
        cpp_int binom = 1;
        for (std::size_t i = 1; i <= size; ++i) {
            binom *= remaining - size + i;
            binom /= i;
        }
        exact *= binom;
    }

    const double nc = static_cast<double>(n_unoccupied);
    const double l = static_cast<double>(n_clusters);
    SearchSpaceSize s;
    s.exact = std::move(exact);
    s.log10_exact = (std::lgamma(nc + 1.0) - l * std::lgamma(nc / l + 1.0)) / std::numbers::ln10;
    s.log10_stirling = ((1.0 - l) / 2.0 * std::log(2.0 * std::numbers::pi * nc) + (nc + l / 2.0) * std::log(l)) /
                       std::numbers::ln10;
    return s;
}

void write_partition(std::ostream& out, const ClusterPartition& partition)
{
    for (const auto& c : partition.clusters()) {
        for (std::size_t i = 0; i < c.size(); ++i) out << (i == 0 ? "" : " ") << c[i];
        out << '\n';
    }
}

ClusterPartition read_partition(std::istream& in, std::size_t n_bins)
{
    std::vector<IndexSet> clusters;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        IndexSet cluster;
        long long k = 0;
        while (fields >> k) {
            if (k < 0) throw TdcsError("negative bin index in partition file");
            cluster.push_back(static_cast<std::size_t>(k));
        }
        if (!fields.eof()) throw TdcsError("malformed partition line: " + line);
        clusters.push_back(std::move(cluster));
    }
    return ClusterPartition(std::move(clusters), n_bins);
}

}  // namespace tdcs
