// Batch front end: BER sweeps, efficiency searches, sidelobe study, design
// export and closed-form analytics.

#include "tdcs/harness.hpp"
#include "tdcs/kernels.hpp"
#include "tdcs/spectrum.hpp"
#include "tdcs/waveform.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace {

struct Common {
    std::string config_path;
    std::string out_path;
    std::string manifest_path;
    std::string kernels = "auto";
    int threads = -1;
};

void add_common(CLI::App* app, Common& c, bool with_out)
{
    app->add_option("-c,--config", c.config_path, "INI config file (defaults apply when omitted)");
    if (with_out) app->add_option("-o,--out", c.out_path, "CSV output path (stdout when omitted)");
    app->add_option("--manifest", c.manifest_path, "Write a JSON manifest of all seeds to this path");
    app->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
}

tdcs::SimConfig resolve(const Common& c)
{
    tdcs::SimConfig cfg = c.config_path.empty() ? tdcs::SimConfig{} : tdcs::load_config(c.config_path);
    if (c.threads >= 0) cfg.threads = static_cast<unsigned>(c.threads);
    cfg.validate();
    return cfg;
}

template <typename Writer>
void emit(const Common& c, Writer&& write)
{
    if (c.out_path.empty()) {
        write(std::cout);
        return;
    }
    std::ofstream out(c.out_path);
    if (!out) throw tdcs::TdcsError("cannot open " + c.out_path);
    write(out);
}

void write_manifest(const Common& c, const tdcs::SimConfig& cfg, std::string_view command)
{
    if (c.manifest_path.empty()) return;
    std::ofstream out(c.manifest_path);
    if (!out) throw tdcs::TdcsError("cannot open " + c.manifest_path);
    out << tdcs::run_manifest(cfg, command) << '\n';
}

void print_info(const tdcs::SimConfig& cfg)
{
    const auto avail = tdcs::build_availability(cfg.scenario, cfg.n_bins);
    const std::size_t m = cfg.effective_m_order();
    const double gamma = cfg.scenario.unoccupied_ratio();
    std::cout << std::setprecision(6);
    std::cout << "bandwidth_hz      " << cfg.scenario.bandwidth_hz << '\n'
              << "n_bins            " << cfg.n_bins << '\n'
              << "m_order           " << m << '\n'
              << "bin_spacing_hz    " << cfg.scenario.bandwidth_hz / static_cast<double>(cfg.n_bins) << '\n'
              << "n_unoccupied      " << avail.n_unoccupied() << '\n'
              << "gamma             " << gamma << '\n'
              << "gamma_bins        "
              << static_cast<double>(avail.n_unoccupied()) / static_cast<double>(cfg.n_bins) << '\n'
              << "lambda            " << tdcs::energy_normalization(cfg.n_bins, avail.n_unoccupied()) << '\n'
              << "eta_single_stream " << tdcs::spectrum_efficiency(cfg.n_bins, m, 1, cfg.scenario) << '\n';
    std::cout << "\nL,eta_bits_per_s_per_hz,log10_search_space_exact,log10_search_space_stirling\n";
    for (const auto l : cfg.clusters) {
        const auto space = tdcs::search_space_size(avail.n_unoccupied(), l);
        std::cout << l << ',' << tdcs::spectrum_efficiency(cfg.n_bins, m, l, cfg.scenario) << ','
                  << space.log10_exact << ',' << space.log10_stirling << '\n';
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cluster-based TDCS link simulator"};
    app.require_subcommand(1);
    std::string kernels = "auto";
    app.add_option("--kernels", kernels, "Kernel variant: auto, scalar, avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    Common ber_opts, eff_opts, side_opts, design_opts, info_opts;
    auto* ber = app.add_subcommand("ber", "BER vs Eb/N0 sweep");
    add_common(ber, ber_opts, true);

    auto* eff = app.add_subcommand("efficiency", "Required Eb/N0 at the target BER, paired with spectrum efficiency");
    add_common(eff, eff_opts, true);
    double target_ber = 0.0;
    eff->add_option("--target-ber", target_ber, "Override [search] target_ber");

    auto* side = app.add_subcommand("sidelobes", "Largest normalized sidelobe per cluster count");
    add_common(side, side_opts, true);

    auto* design = app.add_subcommand("design", "Export a partition and one cluster's FMW");
    add_common(design, design_opts, false);
    std::string scheme = "random";
    std::size_t n_clusters = 1;
    std::size_t cluster_index = 0;
    std::string partition_out, fmw_out;
    design->add_option("--scheme", scheme, "continuous or random")->check(CLI::IsMember({"continuous", "random"}));
    design->add_option("-L,--clusters", n_clusters, "Number of clusters")->required();
    design->add_option("--cluster", cluster_index, "Cluster whose FMW is dumped");
    design->add_option("--partition-out", partition_out, "Partition text file")->required();
    design->add_option("--fmw-out", fmw_out, "FMW samples (real imag per line)");

    auto* info = app.add_subcommand("info", "Spectrum efficiency and search-space analytics");
    add_common(info, info_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!tdcs::kernels::select(kernels)) throw tdcs::TdcsError("kernel variant unavailable: " + kernels);

        if (*ber) {
            const auto cfg = resolve(ber_opts);
            write_manifest(ber_opts, cfg, "ber");
            const auto records = tdcs::run_ber_sweep(cfg, [](const tdcs::BerRecord& r) {
                std::cerr << to_string(r.scheme) << " L=" << r.n_clusters << " Eb/N0=" << r.ebn0_db
                          << " ber=" << r.ber() << '\n';
            });
            emit(ber_opts, [&](std::ostream& o) { tdcs::write_ber_csv(o, records); });
        } else if (*eff) {
            auto cfg = resolve(eff_opts);
            if (target_ber > 0.0) cfg.target_ber = target_ber;
            cfg.validate();
            write_manifest(eff_opts, cfg, "efficiency");
            const auto records = tdcs::run_efficiency_study(cfg);
            emit(eff_opts, [&](std::ostream& o) { tdcs::write_efficiency_csv(o, records); });
        } else if (*side) {
            const auto cfg = resolve(side_opts);
            write_manifest(side_opts, cfg, "sidelobes");
            const auto records = tdcs::run_sidelobe_study(cfg);
            emit(side_opts, [&](std::ostream& o) { tdcs::write_sidelobe_csv(o, records); });
        } else if (*design) {
            auto cfg = resolve(design_opts);
            cfg.clusters = {n_clusters};
            cfg.validate();
            write_manifest(design_opts, cfg, "design");
            const auto link = tdcs::make_link(cfg, tdcs::parse_scheme(scheme), n_clusters);
            std::ofstream p(partition_out);
            if (!p) throw tdcs::TdcsError("cannot open " + partition_out);
            tdcs::write_partition(p, link.partition);
            if (!fmw_out.empty()) {
                if (cluster_index >= n_clusters) throw tdcs::TdcsError("cluster index out of range");
                const auto fmw = tdcs::synthesize_fmw(
                    link.partition.cluster(cluster_index), link.phase, cfg.n_bins,
                    tdcs::energy_normalization(cfg.n_bins, link.partition.n_unoccupied()));
                std::ofstream f(fmw_out);
                if (!f) throw tdcs::TdcsError("cannot open " + fmw_out);
                tdcs::write_samples(f, fmw.time_samples);
            }
            std::cout << "beta " << link.sidelobes.beta << " beta_abs " << link.sidelobes.beta_abs << '\n';
        } else if (*info) {
            print_info(resolve(info_opts));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
