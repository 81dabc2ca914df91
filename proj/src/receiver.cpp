#include "tdcs/receiver.hpp"

#include "tdcs/fft.hpp"
#include "tdcs/kernels.hpp"

namespace tdcs {

namespace {

ComplexVec reference_spectrum(std::span<const std::size_t> cluster, const PhaseVector& phase, std::size_t n_bins)
{
    if (phase.size() != n_bins) throw TdcsError("phase vector length mismatch");
    ComplexVec ref(n_bins, cd{0.0, 0.0});
    for (const auto k : cluster) {
        if (k >= n_bins) throw TdcsError("cluster index out of range");
        ref[k] = phase[k];
    }
    return ref;
}

}  // namespace

ComplexVec correlate(std::span<const cd> received_body, std::span<const std::size_t> cluster, const PhaseVector& phase)
{
    const std::size_t n = received_body.size();
    const ComplexVec ref = reference_spectrum(cluster, phase, n);
    ComplexVec y(received_body.begin(), received_body.end());
    const auto& plan = fft_plan(n);
    plan.forward(y);
    kernels::active().mul_conj(y, ref, y);
    plan.inverse(y);
    return y;
}

std::size_t detect(std::span<const cd> correlation, std::size_t m_order)
{
    check_m_order(correlation.size(), m_order);
    return kernels::active().argmax_real(correlation, correlation.size() / m_order);
}

CorrelationOutput correlate_frame(std::span<const cd> received_body, const ClusterPartition& partition,
                                  const PhaseVector& phase, std::size_t m_order)
{
    if (received_body.size() != partition.n_bins()) throw TdcsError("received body length must equal n_bins");
    CorrelationOutput out;
    for (const auto& cluster : partition.clusters()) {
        out.values.push_back(correlate(received_body, cluster, phase));
        out.detected_symbols.push_back(detect(out.values.back(), m_order));
    }
    return out;
}

SymbolVector demodulate_frame(std::span<const cd> received_body, const ClusterPartition& partition,
                              const PhaseVector& phase, std::size_t m_order)
{
    Demodulator demod(partition, phase, m_order);
    SymbolVector out{std::vector<std::size_t>(partition.n_clusters()), m_order};
    demod.demodulate(received_body, out.symbols);
    return out;
}

Demodulator::Demodulator(const ClusterPartition& partition, const PhaseVector& phase, std::size_t m_order)
    : n_bins_(partition.n_bins()), m_order_(m_order), spectrum_(n_bins_), product_(n_bins_)
{
    check_m_order(n_bins_, m_order_);
    references_.reserve(partition.n_clusters());
    for (const auto& c : partition.clusters()) references_.push_back(reference_spectrum(c, phase, n_bins_));
}

void Demodulator::demodulate(std::span<const cd> received_body, std::span<std::size_t> symbols)
{
    if (received_body.size() != n_bins_) throw TdcsError("received body length must equal n_bins");
    std::copy(received_body.begin(), received_body.end(), spectrum_.begin());
    fft_plan(n_bins_).forward(spectrum_);
    demodulate_spectrum(spectrum_, symbols);
}

void Demodulator::demodulate_spectrum(std::span<const cd> received_spectrum, std::span<std::size_t> symbols)
{
    if (received_spectrum.size() != n_bins_) throw TdcsError("received spectrum length must equal n_bins");
    if (symbols.size() != references_.size()) throw TdcsError("one output symbol per cluster required");
    const auto& k = kernels::active();
    const auto& plan = fft_plan(n_bins_);
    const std::size_t stride = n_bins_ / m_order_;
    for (std::size_t l = 0; l < references_.size(); ++l) {
        k.mul_conj(received_spectrum, references_[l], product_);
        plan.inverse(product_);
        symbols[l] = k.argmax_real(product_, stride);
    }
}

}  // namespace tdcs
