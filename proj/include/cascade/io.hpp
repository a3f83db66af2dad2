#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cascade/config.hpp"
#include "cascade/evolve.hpp"
#include "cascade/spectra.hpp"

namespace cascade {

/// Everything one CLI run needs: the chain, the initial condition (either
/// an excited-atom index or an explicit amplitude vector of length 3N with
/// norm <= 1) and the frequency grid.
struct RunSpec {
    ChainConfig config;
    int excited_atom = 1;                           // used when amplitudes empty
    std::optional<Eigen::VectorXcd> amplitudes;     // explicit initial state
    std::optional<FrequencyGrid> grid;              // absent: module default

    OneQuantumState make_initial() const;
    FrequencyGrid effective_grid() const;
};

/// JSON schema: one object with keys
///   gamma_A: number
///   sites:   [{delta, kappa_ex, kappa_in, g: [re, im], h: [re, im]}, ...]
///   links:   [{phi_a, phi_b}, ...]            (omitted: zero phases)
///   initial: {atom: k} | {amplitudes: [[re, im], ...]}   (omitted: atom 1)
///   grid:    {min, max, points}               (omitted: module default)
/// Unknown keys are rejected; complex numbers are two-element arrays; site
/// indices are 1-based. Throws ConfigError with the offending field name.
RunSpec parse_config(const std::string& path);
RunSpec parse_config_text(const std::string& text, const std::string& origin);

std::string config_to_json(const RunSpec& spec);

// CSV emitters. First line "# cascade-qed v1 <command>", then a header row,
// then data; 17 significant digits, LF endings. Doubles round-trip exactly.
void write_spectrum_csv(std::ostream& out, const SpectrumSet& spectra,
                        const std::string& command);
void write_fiber_pair_csv(std::ostream& out, const std::vector<double>& omega,
                          const Eigen::VectorXd& fiber_a, const Eigen::VectorXd& fiber_b,
                          const std::string& command);
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          const std::string& command);

std::string format_sig17(double v);

}  // namespace cascade
