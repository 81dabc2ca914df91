#include "tdcs/waveform.hpp"

#include "tdcs/fft.hpp"
#include "tdcs/rng.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

namespace tdcs {

std::vector<double> uniform_phase_source(std::uint64_t seed, std::size_t n_bins)
{
    Rng rng(sub_seed(seed, {stream::kPhase}));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<double> out(n_bins);
    for (auto& a : out) a = angle(rng);
    return out;
}

PhaseVector PhaseVector::from_angles(std::span<const double> angles, std::uint64_t seed)
{
    PhaseVector p;
    p.seed_ = seed;
    p.phases_.reserve(angles.size());
    for (const double a : angles) p.phases_.emplace_back(std::cos(a), std::sin(a));
    return p;
}

PhaseVector generate_phase_vector(std::uint64_t seed, std::size_t n_bins, const PhaseSource& source)
{
    if (n_bins < 2) throw TdcsError("n_bins must be at least 2");
    const auto angles = source(seed, n_bins);
    if (angles.size() != n_bins) throw TdcsError("phase source returned the wrong length");
    return PhaseVector::from_angles(angles, seed);
}

double energy_normalization(std::size_t n_bins, std::size_t n_unoccupied)
{
    if (n_unoccupied == 0 || n_unoccupied > n_bins) throw TdcsError("invalid hole count");
    return std::sqrt(static_cast<double>(n_bins) / static_cast<double>(n_unoccupied));
}

Fmw synthesize_fmw(std::span<const std::size_t> cluster, const PhaseVector& phase, std::size_t n_bins, double lambda)
{
    if (cluster.empty()) throw TdcsError("empty cluster");
    if (phase.size() != n_bins) throw TdcsError("phase vector length mismatch");
    ComplexVec spectrum(n_bins, cd{0.0, 0.0});
    for (const auto k : cluster) {
        if (k >= n_bins) throw TdcsError("cluster index out of range");
        spectrum[k] = lambda * phase[k];
    }
    fft_plan(n_bins).inverse(spectrum);
    return Fmw{std::move(spectrum), IndexSet(cluster.begin(), cluster.end()), lambda};
}

void check_m_order(std::size_t n_bins, std::size_t m_order)
{
    if (m_order < 2 || n_bins % m_order != 0) throw TdcsError("modulation order must divide n_bins");
}

Modulator::Modulator(ClusterPartition partition, PhaseVector phase, std::size_t m_order)
    : partition_(std::move(partition)), phase_(std::move(phase)), m_order_(m_order)
{
    check_m_order(partition_.n_bins(), m_order_);
    if (phase_.size() != partition_.n_bins()) throw TdcsError("phase vector length mismatch");
    lambda_ = energy_normalization(partition_.n_bins(), partition_.n_unoccupied());
    symbol_roots_.resize(m_order_);
    for (std::size_t m = 0; m < m_order_; ++m)
        symbol_roots_[m] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(m_order_));
}

void Modulator::modulate(std::span<const std::size_t> symbols, std::span<cd> out) const
{
    if (symbols.size() != partition_.n_clusters()) throw TdcsError("one symbol per cluster required");
    if (out.size() != n_bins()) throw TdcsError("output length must equal n_bins");
    std::fill(out.begin(), out.end(), cd{0.0, 0.0});
    for (std::size_t l = 0; l < symbols.size(); ++l) {
        const std::size_t s = symbols[l];
        if (s >= m_order_) throw TdcsError("symbol out of range");
        for (const auto k : partition_.cluster(l)) out[k] = lambda_ * phase_[k] * symbol_roots_[(s * k) % m_order_];
    }
    fft_plan(n_bins()).inverse(out);
}

WaveformFrame modulate(const ClusterPartition& partition, const PhaseVector& phase, const SymbolVector& symbols)
{
    Modulator mod(partition, phase, symbols.m_order);
    WaveformFrame frame{ComplexVec(partition.n_bins()), false, partition.n_bins()};
    mod.modulate(symbols.symbols, frame.samples);
    return frame;
}

void write_samples(std::ostream& out, std::span<const cd> samples)
{
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for (const auto& s : samples) out << s.real() << ' ' << s.imag() << '\n';
    out.flags(flags);
    out.precision(precision);
}

ComplexVec read_samples(std::istream& in)
{
    ComplexVec out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        double re = 0.0;
        double im = 0.0;
        if (!(fields >> re >> im)) throw TdcsError("malformed sample line: " + line);
        out.emplace_back(re, im);
    }
    return out;
}

}  // namespace tdcs
