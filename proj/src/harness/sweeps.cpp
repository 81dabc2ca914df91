#include "tdcs/harness.hpp"

#include "tdcs/kernels.hpp"
#include "tdcs/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <mutex>
#include <ostream>

namespace tdcs {

double spectrum_efficiency(std::size_t n_bins, std::size_t m_order, std::size_t n_clusters,
                           const BandScenario& scenario)
{
    if (n_bins == 0 || m_order < 2 || n_clusters == 0) throw TdcsError("invalid efficiency parameters");
    const double gamma = scenario.unoccupied_ratio();
    if (!(gamma > 0.0)) throw TdcsError("unoccupied ratio must be positive");
    const double spacing = scenario.bandwidth_hz / static_cast<double>(n_bins);
    return static_cast<double>(n_clusters) * spacing * std::log2(static_cast<double>(m_order)) /
           (gamma * scenario.bandwidth_hz);
}

namespace {

struct LinkKey {
    Scheme scheme;
    std::size_t n_clusters;
};

std::vector<LinkKey> link_keys(const SimConfig& config)
{
    std::vector<LinkKey> keys;
    for (const auto s : config.schemes)
        for (const auto l : config.clusters) keys.push_back({s, l});
    return keys;
}

std::vector<LinkSetup> build_links(const SimConfig& config, const std::vector<LinkKey>& keys)
{
    std::vector<LinkSetup> links;
    links.reserve(keys.size());
    for (const auto& k : keys) links.push_back(make_link(config, k.scheme, k.n_clusters));
    return links;
}

}  // namespace

std::vector<BerRecord> run_ber_sweep(const SimConfig& config, const std::function<void(const BerRecord&)>& on_record)
{
    config.validate();
    const auto keys = link_keys(config);
    const auto links = build_links(config, keys);
    const std::size_t points = config.ebn0_grid_db.size();
    const StopRule stop{config.min_bit_errors, config.max_frames};

    std::vector<BerRecord> records(links.size() * points);
    std::mutex emit;
    parallel_for(records.size(), config.effective_threads(), [&](std::size_t job) {
        LinkSimulator sim(config, links[job / points]);
        records[job] = sim.run(config.ebn0_grid_db[job % points], stop);
        if (on_record) {
            std::lock_guard lock(emit);
            on_record(records[job]);
        }
    });
    return records;
}

EfficiencyRecord find_required_ebn0(const SimConfig& config, const LinkSetup& setup)
{
    LinkSimulator sim(config, setup);
    EfficiencyRecord rec;
    rec.scheme = setup.scheme;
    rec.n_bins = setup.partition.n_bins();
    rec.m_order = setup.m_order;
    rec.n_clusters = setup.partition.n_clusters();
    rec.eta = spectrum_efficiency(rec.n_bins, rec.m_order, rec.n_clusters, config.scenario);
    rec.target_ber = config.target_ber;

    // Stopping at min_errors / target bits decides "BER <= target" without
    // chasing errors far below the threshold.
    const auto cap = static_cast<std::size_t>(std::ceil(static_cast<double>(config.min_bit_errors) / config.target_ber));
    const StopRule stop{config.min_bit_errors, config.max_frames, cap};
    auto ber_at = [&](double ebn0) {
        ++rec.evaluations;
        return sim.run(ebn0, stop).ber();
    };

    double lo = config.search_lo_db;
    double hi = config.search_hi_db;
    double ber_hi = ber_at(hi);
    if (ber_hi > config.target_ber) return rec;
    double ber_lo = ber_at(lo);
    rec.reached = true;
    if (ber_lo <= config.target_ber) {
        rec.required_ebn0_db = lo;
        return rec;
    }
    while (hi - lo > config.search_tolerance_db) {
        const double mid = 0.5 * (lo + hi);
        const double b = ber_at(mid);
        if (b > config.target_ber) {
            lo = mid;
            ber_lo = b;
        } else {
            hi = mid;
            ber_hi = b;
        }
    }
    if (ber_hi > 0.0) {
        const double t = (std::log(ber_lo) - std::log(config.target_ber)) / (std::log(ber_lo) - std::log(ber_hi));
        rec.required_ebn0_db = lo + std::clamp(t, 0.0, 1.0) * (hi - lo);
    } else {
        rec.required_ebn0_db = hi;
    }
    return rec;
}

std::vector<EfficiencyRecord> run_efficiency_study(const SimConfig& config)
{
    config.validate();
    const auto keys = link_keys(config);
    const auto links = build_links(config, keys);
    std::vector<EfficiencyRecord> records(links.size());
    parallel_for(links.size(), config.effective_threads(),
                 [&](std::size_t i) { records[i] = find_required_ebn0(config, links[i]); });
    return records;
}

std::vector<SidelobeRecord> run_sidelobe_study(const SimConfig& config)
{
    config.validate();
    const auto avail = build_availability(config.scenario, config.n_bins);
    std::vector<SidelobeRecord> records;
    for (const auto l : config.clusters) {
        SidelobeRecord r;
        r.n_bins = config.n_bins;
        r.n_unoccupied = avail.n_unoccupied();
        r.n_clusters = l;
        r.trials = config.sidelobe_trials;
        r.continuous = largest_sidelobe(partition_continuous(avail, l));
        const auto search = estimate_beta_min(avail, l, config.sidelobe_trials, partition_seed(config.seed, l),
                                              config.effective_threads());
        r.random_min = search.best_metric;
        r.best_trial = search.best_trial;
        r.log10_search_space = search_space_size(avail.n_unoccupied(), l).log10_exact;
        records.push_back(r);
    }
    return records;
}

namespace {

struct CsvPrecision {
    explicit CsvPrecision(std::ostream& o) : out(o), flags(o.flags()), precision(o.precision())
    {
        out << std::setprecision(10);
    }
    ~CsvPrecision()
    {
        out.flags(flags);
        out.precision(precision);
    }
    std::ostream& out;
    std::ios::fmtflags flags;
    std::streamsize precision;
};

}  // namespace

void write_ber_csv(std::ostream& out, std::span<const BerRecord> records)
{
    CsvPrecision guard(out);
    out << "scheme,N,M,L,ebn0_db,frames,bits,bit_errors,symbol_errors,ber,ser\n";
    for (const auto& r : records) {
        out << to_string(r.scheme) << ',' << r.n_bins << ',' << r.m_order << ',' << r.n_clusters << ',' << r.ebn0_db
            << ',' << r.frames << ',' << r.bits << ',' << r.bit_errors << ',' << r.symbol_errors << ',' << r.ber()
            << ',' << r.ser() << '\n';
    }
}

void write_efficiency_csv(std::ostream& out, std::span<const EfficiencyRecord> records)
{
    CsvPrecision guard(out);
    out << "scheme,N,M,L,eta_bits_per_s_per_hz,target_ber,required_ebn0_db,reached\n";
    for (const auto& r : records) {
        out << to_string(r.scheme) << ',' << r.n_bins << ',' << r.m_order << ',' << r.n_clusters << ',' << r.eta
            << ',' << r.target_ber << ',';
        if (r.reached) {
            out << r.required_ebn0_db << ",yes\n";
        } else {
            out << ",not reached\n";
        }
    }
}

void write_sidelobe_csv(std::ostream& out, std::span<const SidelobeRecord> records)
{
    CsvPrecision guard(out);
    out << "N,N_C,L,trials,beta_continuous,beta_continuous_abs,beta_min_random,beta_min_random_abs,best_trial,"
           "log10_search_space\n";
    for (const auto& r : records) {
        out << r.n_bins << ',' << r.n_unoccupied << ',' << r.n_clusters << ',' << r.trials << ','
            << r.continuous.beta << ',' << r.continuous.beta_abs << ',' << r.random_min.beta << ','
            << r.random_min.beta_abs << ',' << r.best_trial << ',' << r.log10_search_space << '\n';
    }
}

std::string run_manifest(const SimConfig& config, std::string_view command)
{
    using nlohmann::json;
    json j;
    j["command"] = command;
    j["kernels"] = kernels::active().name;
    j["seed"] = config.seed;
    j["n_bins"] = config.n_bins;
    j["m_order"] = config.effective_m_order();
    j["bandwidth_hz"] = config.scenario.bandwidth_hz;
    j["unoccupied_ratio"] = config.scenario.unoccupied_ratio();
    json ranges = json::array();
    for (const auto& r : config.scenario.occupied) ranges.push_back({r.lo_hz, r.hi_hz});
    j["occupied_hz"] = ranges;
    j["channel"] = to_string(config.channel);
    j["channel_profile"] = config.profile.name;
    j["coding"] = config.coding;
    j["interleaver_seed"] = config.code.interleaver_seed;
    j["partition_trials"] = config.partition_trials;
    j["sidelobe_trials"] = config.sidelobe_trials;
    j["phase_seed"] = config.seed;
    json links = json::array();
    for (const auto s : config.schemes) {
        for (const auto l : config.clusters) {
            links.push_back({{"scheme", to_string(s)},
                             {"L", l},
                             {"partition_seed", partition_seed(config.seed, l)},
                             {"stream_seed", stream_seed(config.seed, l)}});
        }
    }
    j["links"] = links;
    return j.dump(2);
}

}  // namespace tdcs
