#include "cascade/config.hpp"

#include <cmath>
#include <string>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

bool finite(double v) { return std::isfinite(v); }
bool finite(complexd v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

void ChainConfig::validate() const {
    if (sites.empty()) throw ConfigError("config: at least one site is required");
    if (!finite(gamma_A) || gamma_A < 0.0)
        throw ConfigError("config: gamma_A must be finite and >= 0");
    if (links.size() + 1 != sites.size())
        throw ConfigError("config: links must have length sites-1 (got " +
                          std::to_string(links.size()) + " links for " +
                          std::to_string(sites.size()) + " sites)");
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const SiteParams& s = sites[k];
        const std::string at = "site " + std::to_string(k + 1) + ": ";
        if (!finite(s.delta)) throw ConfigError("config: " + at + "delta not finite");
        if (!finite(s.kappa_ex) || s.kappa_ex < 0.0)
            throw ConfigError("config: " + at + "kappa_ex must be finite and >= 0");
        if (!finite(s.kappa_in) || s.kappa_in < 0.0)
            throw ConfigError("config: " + at + "kappa_in must be finite and >= 0");
        if (!finite(s.g)) throw ConfigError("config: " + at + "g not finite");
        if (!finite(s.h)) throw ConfigError("config: " + at + "h not finite");
    }
    for (std::size_t m = 0; m < links.size(); ++m) {
        if (!finite(links[m].phi_a) || !finite(links[m].phi_b))
            throw ConfigError("config: link " + std::to_string(m + 1) + ": phase not finite");
    }
}

ChainConfig mirrored(const ChainConfig& config) {
    config.validate();
    ChainConfig out;
    out.gamma_A = config.gamma_A;
    out.sites.assign(config.sites.rbegin(), config.sites.rend());
    for (SiteParams& s : out.sites) {
        s.g = std::conj(s.g);
        s.h = std::conj(s.h);
    }
    out.links.assign(config.links.rbegin(), config.links.rend());
    for (LinkPhases& l : out.links) std::swap(l.phi_a, l.phi_b);
    return out;
}

}  // namespace cascade
