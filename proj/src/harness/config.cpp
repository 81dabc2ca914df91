#include "tdcs/harness.hpp"

#include "tdcs/parallel.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tdcs {

namespace pt = boost::property_tree;

std::string_view to_string(Scheme s) { return s == Scheme::Continuous ? "continuous" : "random"; }
std::string_view to_string(ChannelKind c) { return c == ChannelKind::Awgn ? "awgn" : "multipath"; }

Scheme parse_scheme(std::string_view s)
{
    if (s == "continuous") return Scheme::Continuous;
    if (s == "random") return Scheme::Random;
    throw TdcsError("unknown allocation scheme: " + std::string(s));
}

ChannelKind parse_channel(std::string_view s)
{
    if (s == "awgn") return ChannelKind::Awgn;
    if (s == "multipath") return ChannelKind::Multipath;
    throw TdcsError("unknown channel type: " + std::string(s));
}

unsigned SimConfig::effective_threads() const { return threads == 0 ? default_threads() : threads; }

void SimConfig::validate() const
{
    const std::size_t m = effective_m_order();
    check_m_order(n_bins, m);
    if (!is_power_of_two(m)) throw TdcsError("modulation order must be a power of two");
    if (clusters.empty()) throw TdcsError("no cluster counts configured");
    if (schemes.empty()) throw TdcsError("no allocation schemes configured");
    const auto avail = build_availability(scenario, n_bins);
    for (const auto l : clusters) {
        if (l == 0 || avail.n_unoccupied() % l != 0)
            throw TdcsError("cluster count " + std::to_string(l) + " does not divide N_C = " +
                            std::to_string(avail.n_unoccupied()));
    }
    if (partition_trials == 0 || sidelobe_trials == 0) throw TdcsError("trial counts must be positive");
    if (min_bit_errors == 0 || max_frames == 0) throw TdcsError("stop rule must be positive");
    if (!(target_ber > 0.0 && target_ber < 0.5)) throw TdcsError("target BER must lie in (0, 0.5)");
    if (!(search_hi_db > search_lo_db) || !(search_tolerance_db > 0.0)) throw TdcsError("invalid Eb/N0 search range");
    if (channel == ChannelKind::Multipath) {
        cp_length(n_bins);
        // Throws "CP too short" if the profile does not fit the prefix.
        draw_realization(profile, effective_sample_rate(), n_bins, std::uint64_t{0});
    }
    if (coding) {
        code.validate();
        if (info_bits_per_block == 0) throw TdcsError("info_bits_per_block must be positive");
    }
}

namespace {

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto first = item.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        const auto last = item.find_last_not_of(" \t");
        out.push_back(item.substr(first, last - first + 1));
    }
    return out;
}

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw TdcsError("invalid number for " + key + ": " + text);
    }
}

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    const double v = parse_double(key, text);
    if (v < 0.0 || std::floor(v) != v || v > 1.8e19) throw TdcsError("expected a non-negative integer for " + key);
    return static_cast<std::uint64_t>(v);
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "on" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "off" || text == "0" || text == "no") return false;
    throw TdcsError("expected a boolean for " + key + ": " + text);
}

FrequencyRange parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw TdcsError("occupied range must be lo:hi, got " + text);
    return {parse_double("occupied_hz", text.substr(0, colon)), parse_double("occupied_hz", text.substr(colon + 1))};
}

}  // namespace

SimConfig parse_config(std::istream& in) { return parse_config_at(in, {}); }

SimConfig parse_config_at(std::istream& in, const std::filesystem::path& base_dir)
{
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw TdcsError(std::string("config parse error: ") + e.what());
    }

    SimConfig c;
    for (const auto& [section, entries] : tree) {
        if (entries.empty() && !entries.data().empty()) throw TdcsError("config keys must live in a section: " + section);
        for (const auto& [key, node] : entries) {
            const std::string value = node.get_value<std::string>();
            const std::string where = section + "." + key;
            if (section == "scenario") {
                if (key == "bandwidth_hz") {
                    c.scenario.bandwidth_hz = parse_double(where, value);
                } else if (key == "occupied_hz") {
                    c.scenario.occupied.clear();
                    for (const auto& r : split_list(value)) c.scenario.occupied.push_back(parse_range(r));
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "link") {
                if (key == "n_bins") {
                    c.n_bins = parse_count(where, value);
                } else if (key == "m_order") {
                    c.m_order = parse_count(where, value);
                } else if (key == "clusters") {
                    c.clusters.clear();
                    for (const auto& v : split_list(value)) c.clusters.push_back(parse_count(where, v));
                } else if (key == "schemes") {
                    c.schemes.clear();
                    for (const auto& v : split_list(value)) c.schemes.push_back(parse_scheme(v));
                } else if (key == "seed") {
                    c.seed = parse_count(where, value);
                } else if (key == "partition_trials") {
                    c.partition_trials = parse_count(where, value);
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "channel") {
                if (key == "type") {
                    c.channel = parse_channel(value);
                } else if (key == "profile") {
                    std::filesystem::path p(value);
                    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
                    std::ifstream f(p);
                    if (!f) throw TdcsError("cannot open channel profile " + p.string());
                    c.profile = read_channel_profile(f);
                } else if (key == "sample_rate_hz") {
                    c.sample_rate_hz = parse_double(where, value);
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "coding") {
                if (key == "enabled") {
                    c.coding = parse_bool(where, value);
                } else if (key == "constraint_length") {
                    c.code.constraint_length = static_cast<unsigned>(parse_count(where, value));
                } else if (key == "generators") {
                    const auto g = split_list(value);
                    if (g.size() != 2) throw TdcsError("coding.generators needs two octal values");
                    for (std::size_t i = 0; i < 2; ++i) {
                        try {
                            std::size_t used = 0;
                            c.code.generators[i] = static_cast<unsigned>(std::stoul(g[i], &used, 8));
                            if (used != g[i].size()) throw std::invalid_argument(g[i]);
                        } catch (const std::exception&) {
                            throw TdcsError("invalid octal generator: " + g[i]);
                        }
                    }
                } else if (key == "interleaver_seed") {
                    c.code.interleaver_seed = parse_count(where, value);
                } else if (key == "info_bits_per_block") {
                    c.info_bits_per_block = parse_count(where, value);
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "sweep") {
                if (key == "ebn0_db") {
                    c.ebn0_grid_db.clear();
                    for (const auto& v : split_list(value)) c.ebn0_grid_db.push_back(parse_double(where, v));
                } else if (key == "min_bit_errors") {
                    c.min_bit_errors = parse_count(where, value);
                } else if (key == "max_frames") {
                    c.max_frames = parse_count(where, value);
                } else if (key == "threads") {
                    c.threads = static_cast<unsigned>(parse_count(where, value));
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "search") {
                if (key == "target_ber") {
                    c.target_ber = parse_double(where, value);
                } else if (key == "lo_db") {
                    c.search_lo_db = parse_double(where, value);
                } else if (key == "hi_db") {
                    c.search_hi_db = parse_double(where, value);
                } else if (key == "tolerance_db") {
                    c.search_tolerance_db = parse_double(where, value);
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else if (section == "sidelobes") {
                if (key == "trials") {
                    c.sidelobe_trials = parse_count(where, value);
                } else {
                    throw TdcsError("unknown config key " + where);
                }
            } else {
                throw TdcsError("unknown config section [" + section + "]");
            }
        }
    }
    c.validate();
    return c;
}

SimConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw TdcsError("cannot open config " + path);
    return parse_config_at(in, std::filesystem::path(path).parent_path());
}

}  // namespace tdcs
