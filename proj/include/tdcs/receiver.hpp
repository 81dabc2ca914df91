#pragma once

// CCSK demodulation: transform-domain correlation against each cluster's
// reference spectrum followed by a real-part maximum search.

#include "tdcs/common.hpp"
#include "tdcs/spectrum.hpp"
#include "tdcs/waveform.hpp"

#include <span>

namespace tdcs {

/// y = IDFT{ DFT{r} . conj(A^l . P) } for a CP-free body r.
ComplexVec correlate(std::span<const cd> received_body, std::span<const std::size_t> cluster, const PhaseVector& phase);

/// argmax of Re{y_tau} over tau in {0, N/M, ..., (M-1) N/M}; returns the
/// candidate index. Ties go to the smallest index.
std::size_t detect(std::span<const cd> correlation, std::size_t m_order);

struct CorrelationOutput {
    std::vector<ComplexVec> values;  // one length-N sequence per cluster
    std::vector<std::size_t> detected_symbols;
};

CorrelationOutput correlate_frame(std::span<const cd> received_body, const ClusterPartition& partition,
                                  const PhaseVector& phase, std::size_t m_order);

SymbolVector demodulate_frame(std::span<const cd> received_body, const ClusterPartition& partition,
                              const PhaseVector& phase, std::size_t m_order);

/// Reusable receiver for one partition/phase pair. Holds scratch buffers, so
/// one instance must not be shared between threads.
class Demodulator {
public:
    Demodulator(const ClusterPartition& partition, const PhaseVector& phase, std::size_t m_order);

    std::size_t n_bins() const { return n_bins_; }
    std::size_t n_clusters() const { return references_.size(); }

    /// Time-domain body in, one symbol per cluster out.
    void demodulate(std::span<const cd> received_body, std::span<std::size_t> symbols);

    /// Same, starting from DFT{r} (e.g. after equalization).
    void demodulate_spectrum(std::span<const cd> received_spectrum, std::span<std::size_t> symbols);

private:
    std::size_t n_bins_;
    std::size_t m_order_;
    std::vector<ComplexVec> references_;  // A^l . P, zero off-cluster
    ComplexVec spectrum_;
    ComplexVec product_;
};

}  // namespace tdcs
