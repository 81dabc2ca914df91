#pragma once

// Pseudorandom phase vectors, fundamental modulation waveforms (FMW) and
// multi-cluster CCSK modulation.

#include "tdcs/common.hpp"
#include "tdcs/spectrum.hpp"

#include <functional>
#include <iosfwd>
#include <span>

namespace tdcs {

/// Produces N phase angles m_k for a user seed.
using PhaseSource = std::function<std::vector<double>(std::uint64_t seed, std::size_t n_bins)>;

/// Independent angles uniform on [0, 2 pi) from a seeded generator.
std::vector<double> uniform_phase_source(std::uint64_t seed, std::size_t n_bins);

/// P = {e^{j m_0}, ..., e^{j m_{N-1}}}.
class PhaseVector {
public:
    static PhaseVector from_angles(std::span<const double> angles, std::uint64_t seed = 0);

    std::size_t size() const { return phases_.size(); }
    const ComplexVec& phases() const { return phases_; }
    cd operator[](std::size_t k) const { return phases_[k]; }
    std::uint64_t seed() const { return seed_; }

private:
    ComplexVec phases_;
    std::uint64_t seed_ = 0;
};

PhaseVector generate_phase_vector(std::uint64_t seed, std::size_t n_bins,
                                  const PhaseSource& source = uniform_phase_source);

/// lambda = sqrt(N / N_C), N_C being the total number of holes.
double energy_normalization(std::size_t n_bins, std::size_t n_unoccupied);

struct Fmw {
    ComplexVec time_samples;
    IndexSet source_cluster;
    double lambda = 1.0;
};

/// b = lambda * IDFT{A^l . P}.
Fmw synthesize_fmw(std::span<const std::size_t> cluster, const PhaseVector& phase, std::size_t n_bins, double lambda);

/// One CCSK symbol per cluster, each in [0, M).
struct SymbolVector {
    std::vector<std::size_t> symbols;
    std::size_t m_order = 0;
};

/// Complex baseband samples of one TDCS symbol: N samples, or N + N/4 when
/// a cyclic prefix has been prepended.
struct WaveformFrame {
    ComplexVec samples;
    bool has_cp = false;
    std::size_t n_bins = 0;
};

/// Throws unless M divides N and M >= 2.
void check_m_order(std::size_t n_bins, std::size_t m_order);

/// Multi-cluster CCSK transmitter. Builds the summed spectrum
/// lambda * sum_l A^l_k P_k e^{-j 2 pi S^l k / M} and applies one inverse
/// transform; cluster l's FMW ends up cyclically shifted by S^l * N / M.
class Modulator {
public:
    Modulator(ClusterPartition partition, PhaseVector phase, std::size_t m_order);

    const ClusterPartition& partition() const { return partition_; }
    const PhaseVector& phase() const { return phase_; }
    std::size_t m_order() const { return m_order_; }
    std::size_t n_bins() const { return partition_.n_bins(); }
    double lambda() const { return lambda_; }

    /// Writes N time samples into out.
    void modulate(std::span<const std::size_t> symbols, std::span<cd> out) const;

private:
    ClusterPartition partition_;
    PhaseVector phase_;
    std::size_t m_order_;
    double lambda_;
    ComplexVec symbol_roots_;  // e^{-j 2 pi m / M}
};

WaveformFrame modulate(const ClusterPartition& partition, const PhaseVector& phase, const SymbolVector& symbols);

/// Two whitespace-separated columns (real, imaginary), one sample per line.
void write_samples(std::ostream& out, std::span<const cd> samples);
ComplexVec read_samples(std::istream& in);

}  // namespace tdcs
