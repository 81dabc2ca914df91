#pragma once

// Spectrum availability, cluster partitions and autocorrelation sidelobes.

#include "tdcs/common.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <iosfwd>
#include <span>

namespace tdcs {

struct FrequencyRange {
    double lo_hz = 0.0;  // inclusive
    double hi_hz = 0.0;  // exclusive
};

/// Analog picture of the band: total width W and the occupied sub-bands.
struct BandScenario {
    double bandwidth_hz = 10e6;
    std::vector<FrequencyRange> occupied;

    /// gamma = (W - |union of occupied ranges|) / W
    double unoccupied_ratio() const;

    /// W = 10 MHz with 2.5-3.75 MHz and 6.25-7.5 MHz occupied (gamma = 3/4).
    static BandScenario reference();
};

/// Binary mask A over N bins; A_k = 1 marks a spectrum hole.
class AvailabilityVector {
public:
    /// Throws "no spectrum holes" when the mask has no ones.
    static AvailabilityVector from_mask(std::vector<std::uint8_t> mask);

    std::size_t n_bins() const { return mask_.size(); }
    std::size_t n_unoccupied() const { return unoccupied_.size(); }
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    const IndexSet& unoccupied() const { return unoccupied_; }
    bool is_unoccupied(std::size_t k) const { return mask_.at(k) != 0; }

private:
    std::vector<std::uint8_t> mask_;
    IndexSet unoccupied_;
};

/// L pairwise-disjoint, equal-size clusters of bin indices, each sorted
/// ascending. The constructor enforces disjointness, equal sizes and the
/// index range; validate() additionally checks the cover of a given
/// availability vector.
class ClusterPartition {
public:
    ClusterPartition(std::vector<IndexSet> clusters, std::size_t n_bins);

    std::size_t n_bins() const { return n_bins_; }
    std::size_t n_clusters() const { return clusters_.size(); }
    std::size_t cluster_size() const { return clusters_.front().size(); }
    const std::vector<IndexSet>& clusters() const { return clusters_; }
    const IndexSet& cluster(std::size_t l) const { return clusters_.at(l); }
    std::size_t n_unoccupied() const { return n_clusters() * cluster_size(); }

    /// Throws unless the union of the clusters equals avail.unoccupied().
    void validate(const AvailabilityVector& avail) const;

    friend bool operator==(const ClusterPartition&, const ClusterPartition&) = default;

private:
    std::vector<IndexSet> clusters_;
    std::size_t n_bins_;
};

/// Bin k is occupied iff its center (k + 0.5) * W / N falls inside an
/// occupied range.
AvailabilityVector build_availability(const BandScenario& scenario, std::size_t n_bins);

/// Cluster l takes the l-th block of N_C/L consecutive holes.
ClusterPartition partition_continuous(const AvailabilityVector& avail, std::size_t n_clusters);

/// Seeded uniform permutation of the holes, split into L equal blocks.
ClusterPartition partition_random(const AvailabilityVector& avail, std::size_t n_clusters, std::uint64_t seed);

/// (1/|cluster|) * sum_{p in cluster} e^{j 2 pi p tau / N} for tau = 1..N-1
/// (element i holds tau = i + 1).
ComplexVec normalized_sidelobes(std::span<const std::size_t> cluster, std::size_t n_bins);

struct SidelobeMetric {
    double beta = 0.0;      // max Re{R_tau,norm} over clusters and tau != 0; used for ranking
    double beta_abs = 0.0;  // max |R_tau,norm|, reported alongside
};

struct SidelobeReport {
    std::vector<ComplexVec> per_cluster;  // tau = 1..N-1
    SidelobeMetric metric;
};

SidelobeMetric largest_sidelobe(const ClusterPartition& partition);
SidelobeReport sidelobe_report(const ClusterPartition& partition);

struct BetaSearchResult {
    SidelobeMetric best_metric;
    ClusterPartition best;
    std::size_t best_trial = 0;
};

/// Draws `trials` random partitions, trial i seeded with
/// sub_seed(seed, {kTrial, i}), and keeps the one with the smallest beta
/// (earliest trial on ties). The result is independent of `threads`.
BetaSearchResult estimate_beta_min(const AvailabilityVector& avail, std::size_t n_clusters, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

/// Seed used by estimate_beta_min for trial i.
std::uint64_t beta_trial_seed(std::uint64_t seed, std::size_t trial);

struct SearchSpaceSize {
    boost::multiprecision::cpp_int exact;  // N_C! / ((N_C/L)!)^L
    double log10_exact = 0.0;
    double log10_stirling = 0.0;  // log10 of (2 pi N_C)^((1-L)/2) * L^(N_C + L/2)
    double stirling() const;      // may overflow to +inf
};

SearchSpaceSize search_space_size(std::size_t n_unoccupied, std::size_t n_clusters);

/// Plain-text partition format: one line per cluster, ascending bin indices
/// separated by single spaces.
void write_partition(std::ostream& out, const ClusterPartition& partition);
ClusterPartition read_partition(std::istream& in, std::size_t n_bins);

}  // namespace tdcs
