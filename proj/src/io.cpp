#include "cascade/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* name : allowed) known = known || key == name;
        if (!known) bad_field(path, "unknown key \"" + key + "\"");
    }
}

double need_number(const json& j, const std::string& path) {
    if (!j.is_number()) bad_field(path, "must be a number");
    return j.get<double>();
}

int need_index(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad_field(path, "must be an integer");
    return j.get<int>();
}

complexd need_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) bad_field(path, "must be a [re, im] pair");
    return {need_number(j[0], path + "[0]"), need_number(j[1], path + "[1]")};
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    if (!obj.contains(key)) return fallback;
    return need_number(obj.at(key), path + "." + key);
}

json complex_pair(complexd z) { return json::array({z.real(), z.imag()}); }

}  // namespace

OneQuantumState RunSpec::make_initial() const {
    if (!amplitudes) return initial_state(config, excited_atom);
    if (amplitudes->size() != 3 * config.n_sites())
        throw ConfigError("initial.amplitudes: expected 3 entries per site, got " +
                          std::to_string(amplitudes->size()));
    const double norm2 = amplitudes->squaredNorm();
    if (!(norm2 <= 1.0 + 1e-12))
        throw ConfigError("initial.amplitudes: squared norm " + std::to_string(norm2) +
                          " exceeds 1");
    return *amplitudes;
}

FrequencyGrid RunSpec::effective_grid() const { return grid ? *grid : default_grid(config); }

RunSpec parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str(), path);
}

RunSpec parse_config_text(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(origin + ": top level must be an object");
    reject_unknown(root, {"gamma_A", "sites", "links", "initial", "grid"}, origin);

    RunSpec spec;
    spec.config.gamma_A = number_or(root, "gamma_A", 0.0, origin);

    if (!root.contains("sites") || !root.at("sites").is_array() || root.at("sites").empty())
        throw ConfigError(origin + ".sites: required, a non-empty array");
    int index = 0;
    for (const json& entry : root.at("sites")) {
        const std::string path = origin + ".sites[" + std::to_string(index++) + "]";
        if (!entry.is_object()) bad_field(path, "must be an object");
        reject_unknown(entry, {"delta", "kappa_ex", "kappa_in", "g", "h"}, path);
        SiteParams site;
        site.delta = number_or(entry, "delta", 0.0, path);
        site.kappa_ex = number_or(entry, "kappa_ex", 0.0, path);
        site.kappa_in = number_or(entry, "kappa_in", 0.0, path);
        if (entry.contains("g")) site.g = need_complex(entry.at("g"), path + ".g");
        if (entry.contains("h")) site.h = need_complex(entry.at("h"), path + ".h");
        spec.config.sites.push_back(site);
    }

    const int n = spec.config.n_sites();
    if (root.contains("links")) {
        if (!root.at("links").is_array())
            throw ConfigError(origin + ".links: must be an array");
        index = 0;
        for (const json& entry : root.at("links")) {
            const std::string path = origin + ".links[" + std::to_string(index++) + "]";
            if (!entry.is_object()) bad_field(path, "must be an object");
            reject_unknown(entry, {"phi_a", "phi_b"}, path);
            LinkPhases link;
            link.phi_a = number_or(entry, "phi_a", 0.0, path);
            link.phi_b = number_or(entry, "phi_b", 0.0, path);
            spec.config.links.push_back(link);
        }
        if (static_cast<int>(spec.config.links.size()) != n - 1)
            throw ConfigError(origin + ".links: expected " + std::to_string(n - 1) +
                              " entries for " + std::to_string(n) + " sites");
    } else {
        spec.config.links.assign(static_cast<size_t>(n > 0 ? n - 1 : 0), LinkPhases{});
    }

    if (root.contains("initial")) {
        const json& init = root.at("initial");
        const std::string path = origin + ".initial";
        if (!init.is_object()) bad_field(path, "must be an object");
        reject_unknown(init, {"atom", "amplitudes"}, path);
        if (init.contains("atom") == init.contains("amplitudes"))
            bad_field(path, "needs exactly one of \"atom\" or \"amplitudes\"");
        if (init.contains("atom")) {
            spec.excited_atom = need_index(init.at("atom"), path + ".atom");
            if (spec.excited_atom < 1 || spec.excited_atom > n)
                bad_field(path + ".atom", "out of range 1.." + std::to_string(n));
        } else {
            const json& amps = init.at("amplitudes");
            if (!amps.is_array()) bad_field(path + ".amplitudes", "must be an array");
            Eigen::VectorXcd x(amps.size());
            for (size_t i = 0; i < amps.size(); ++i)
                x(static_cast<Eigen::Index>(i)) = need_complex(
                    amps[i], path + ".amplitudes[" + std::to_string(i) + "]");
            spec.amplitudes = std::move(x);
        }
    }

    if (root.contains("grid")) {
        const json& grid = root.at("grid");
        const std::string path = origin + ".grid";
        if (!grid.is_object()) bad_field(path, "must be an object");
        reject_unknown(grid, {"min", "max", "points"}, path);
        for (const char* key : {"min", "max", "points"})
            if (!grid.contains(key)) bad_field(path, std::string("missing \"") + key + "\"");
        FrequencyGrid g;
        g.min = need_number(grid.at("min"), path + ".min");
        g.max = need_number(grid.at("max"), path + ".max");
        g.points = need_index(grid.at("points"), path + ".points");
        g.validate();
        spec.grid = g;
    }

    spec.config.validate();
    spec.make_initial();  // surfaces bad explicit amplitudes at parse time
    return spec;
}

std::string config_to_json(const RunSpec& spec) {
    json root;
    root["gamma_A"] = spec.config.gamma_A;
    root["sites"] = json::array();
    for (const SiteParams& site : spec.config.sites) {
        json entry;
        entry["delta"] = site.delta;
        entry["kappa_ex"] = site.kappa_ex;
        entry["kappa_in"] = site.kappa_in;
        entry["g"] = complex_pair(site.g);
        entry["h"] = complex_pair(site.h);
        root["sites"].push_back(entry);
    }
    root["links"] = json::array();
    for (const LinkPhases& link : spec.config.links)
        root["links"].push_back(json{{"phi_a", link.phi_a}, {"phi_b", link.phi_b}});
    if (spec.amplitudes) {
        json amps = json::array();
        for (Eigen::Index i = 0; i < spec.amplitudes->size(); ++i)
            amps.push_back(complex_pair((*spec.amplitudes)(i)));
        root["initial"] = json{{"amplitudes", amps}};
    } else {
        root["initial"] = json{{"atom", spec.excited_atom}};
    }
    if (spec.grid)
        root["grid"] =
            json{{"min", spec.grid->min}, {"max", spec.grid->max}, {"points", spec.grid->points}};
    return root.dump(2) + "\n";
}

std::string format_sig17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_row(std::ostream& out, const std::vector<double>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << format_sig17(row[i]);
    }
    out << '\n';
}

void write_banner(std::ostream& out, const std::string& command) {
    out << "# cascade-qed v1 " << command << '\n';
}

}  // namespace

void write_spectrum_csv(std::ostream& out, const SpectrumSet& spectra,
                        const std::string& command) {
    write_banner(out, command);
    const int n = static_cast<int>(spectra.side_atoms.cols());
    out << "omega,T_fiber_a,T_fiber_b";
    for (int k = 1; k <= n; ++k) out << ",T_side_atom_" << k;
    for (int k = 1; k <= n; ++k) out << ",T_scatter_site_" << k;
    out << '\n';
    std::vector<double> row(static_cast<size_t>(3 + 2 * n));
    for (size_t i = 0; i < spectra.omega.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        row[0] = spectra.omega[i];
        row[1] = spectra.fiber_a(j);
        row[2] = spectra.fiber_b(j);
        for (int k = 0; k < n; ++k) row[static_cast<size_t>(3 + k)] = spectra.side_atoms(j, k);
        for (int k = 0; k < n; ++k)
            row[static_cast<size_t>(3 + n + k)] = spectra.scatter_sites(j, k);
        write_row(out, row);
    }
}

void write_fiber_pair_csv(std::ostream& out, const std::vector<double>& omega,
                          const Eigen::VectorXd& fiber_a, const Eigen::VectorXd& fiber_b,
                          const std::string& command) {
    if (fiber_a.size() != static_cast<Eigen::Index>(omega.size()) ||
        fiber_b.size() != static_cast<Eigen::Index>(omega.size()))
        throw ConfigError("write_fiber_pair_csv: column lengths differ");
    write_banner(out, command);
    out << "omega,T_fiber_a,T_fiber_b\n";
    for (size_t i = 0; i < omega.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        write_row(out, {omega[i], fiber_a(j), fiber_b(j)});
    }
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::string& command) {
    write_banner(out, command);
    out << "t,norm2,p_spon";
    for (const std::string& name : trajectory.channel_names) out << ',' << name;
    out << '\n';
    std::vector<double> row(static_cast<size_t>(3 + trajectory.channel_fractions.cols()));
    for (size_t i = 0; i < trajectory.times.size(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        row[0] = trajectory.times[i];
        row[1] = trajectory.states[i].squaredNorm();
        row[2] = trajectory.p_spon[i];
        for (Eigen::Index c = 0; c < trajectory.channel_fractions.cols(); ++c)
            row[static_cast<size_t>(3 + c)] = trajectory.channel_fractions(j, c);
        write_row(out, row);
    }
}

}  // namespace cascade
