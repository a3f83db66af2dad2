#include "cascade/presets.hpp"

#include "cascade/errors.hpp"

namespace cascade {

namespace {

RunSpec make_preset(int n_sites, double kappa_ex, double kappa_in,
                    std::initializer_list<complexd> couplings, int excited_atom,
                    FrequencyGrid grid) {
    RunSpec spec;
    spec.config.gamma_A = 5.0;
    for (complexd g : couplings) {
        SiteParams site;
        site.kappa_ex = kappa_ex;
        site.kappa_in = kappa_in;
        site.g = g;
        spec.config.sites.push_back(site);
    }
    spec.config.links.assign(static_cast<size_t>(n_sites - 1), LinkPhases{});
    spec.excited_atom = excited_atom;
    spec.grid = grid;
    return spec;
}

}  // namespace

RunSpec preset(const std::string& name) {
    // Strong coupling: the vacuum Rabi doublet sits at +-sqrt(2)g = +-70.7,
    // the fiber-dark resonance within a linewidth of zero.
    const FrequencyGrid strong{-150.0, 150.0, 30001};
    // Bad cavity: structure lives on the scale 4g^2/kappa = 20.
    const FrequencyGrid bad{-200.0, 200.0, 8001};
    const complexd i(0.0, 1.0);

    if (name == "fig2-upper") return make_preset(2, 5.0, 0.1, {50.0, 50.0}, 1, strong);
    if (name == "fig2-lower") return make_preset(2, 5.0, 0.1, {50.0, -50.0 * i}, 1, strong);
    if (name == "fig3-upper") return make_preset(2, 500.0, 0.5, {50.0, 50.0}, 1, bad);
    if (name == "fig3-lower") return make_preset(2, 500.0, 0.5, {50.0, 50.0 * i}, 1, bad);
    if (name == "fig4-atom1") return make_preset(3, 500.0, 0.5, {50.0, 50.0, 50.0}, 1, bad);
    if (name == "fig4-atom2") return make_preset(3, 500.0, 0.5, {50.0, 50.0, 50.0}, 2, bad);
    if (name == "fig5-atom1") return make_preset(3, 500.0, 0.5, {50.0, 50.0 * i, 50.0}, 1, bad);
    if (name == "fig5-atom2") return make_preset(3, 500.0, 0.5, {50.0, 50.0 * i, 50.0}, 2, bad);

    std::string known;
    for (const std::string& candidate : preset_names()) {
        if (!known.empty()) known += ", ";
        known += candidate;
    }
    throw ConfigError("unknown preset \"" + name + "\" (known: " + known + ")");
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fig2-upper", "fig2-lower", "fig3-upper", "fig3-lower",
        "fig4-atom1", "fig4-atom2", "fig5-atom1", "fig5-atom2",
    };
    return names;
}

}  // namespace cascade
