#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "cascade/evolve.hpp"
#include "cascade/kernels.hpp"
#include "cascade/model.hpp"

namespace cascade {

/// Uniform frequency grid, inclusive of both endpoints. The axis is the
/// offset from the atomic frequency.
struct FrequencyGrid {
    double min = 0.0;
    double max = 0.0;
    int points = 0;

    double spacing() const { return (max - min) / (points - 1); }
    double value(int i) const { return min + i * spacing(); }
    std::vector<double> values() const;
    void validate() const;  // min < max, points >= 2, finite
};

/// Emission spectral densities per channel on a common grid. All entries are
/// squared moduli: real and nonnegative by construction. Integrated over a
/// wide enough grid the channels sum to the total emission probability 1.
struct SpectrumSet {
    FrequencyGrid grid;
    std::vector<double> omega;
    Eigen::VectorXd fiber_a;
    Eigen::VectorXd fiber_b;
    Eigen::MatrixXd side_atoms;     // column per atom
    Eigen::MatrixXd scatter_sites;  // column per site

    Eigen::VectorXd total() const;  // sum of every channel per grid point
    int n_channels() const { return 2 + 2 * static_cast<int>(side_atoms.cols()); }
};

/// x~(omega) = (-i omega I - M)^{-1} x0, the exact transform of the linear
/// flow. Throws NumericalError naming the offending eigenvalue when the
/// shifted system is singular or near-singular at some requested frequency.
Eigen::VectorXcd laplace_amplitudes(const Generator& generator,
                                    const OneQuantumState& state0, double omega);

/// Batch form over a frequency list; one Hessenberg reduction, one shifted
/// solve per frequency. Column j corresponds to omega[j].
Eigen::MatrixXcd laplace_amplitudes(const Generator& generator,
                                    const OneQuantumState& state0,
                                    std::span<const double> omega,
                                    const kernels::SolveOptions& options = {});

/// All channels at once:
///   fiber_a   = (1/2pi) |sum_k c_a[k] alpha~_k|^2
///   fiber_b   = (1/2pi) |sum_k c_b[k] beta~_k|^2
///   side k    = (gamma_A/2pi) |xi~_k|^2
///   scatter k = (kappa_in^k/pi) (|alpha~_k|^2 + |beta~_k|^2)
SpectrumSet emission_spectra(const ChainConfig& config, const Generator& generator,
                             const OneQuantumState& state0, const FrequencyGrid& grid,
                             const kernels::SolveOptions& options = {});

/// Just the two fiber channels.
std::pair<Eigen::VectorXd, Eigen::VectorXd> fiber_spectra(
    const ChainConfig& config, const Generator& generator,
    const OneQuantumState& state0, const FrequencyGrid& grid,
    const kernels::SolveOptions& options = {});

/// (gamma_A/2pi) |xi~_atom|^2 for one atom (1-based index).
Eigen::VectorXd side_spectrum_atom(const ChainConfig& config, const Generator& generator,
                                   const OneQuantumState& state0, const FrequencyGrid& grid,
                                   int atom, const kernels::SolveOptions& options = {});

/// |sum_k (E_k xi~_k + A_k alpha~_k + B_k beta~_k)|^2 for arbitrary
/// collection coefficients (each vector of length N).
Eigen::VectorXd side_spectrum_general(const ChainConfig& config, const Generator& generator,
                                      const OneQuantumState& state0, const FrequencyGrid& grid,
                                      const Eigen::VectorXcd& e_coeff,
                                      const Eigen::VectorXcd& a_coeff,
                                      const Eigen::VectorXcd& b_coeff,
                                      const kernels::SolveOptions& options = {});

/// Same channel assembly, but the transforms come from a time-domain
/// trajectory via numerical_laplace. Cross-check route for emission_spectra;
/// the two agree to the quadrature budget, not to roundoff.
SpectrumSet spectra_from_trajectory(const ChainConfig& config, const Trajectory& trajectory,
                                    const FrequencyGrid& grid, double tail_threshold);

/// Display default: symmetric window 3x the largest characteristic frequency
/// among |g|, sqrt(2)|g|, 4|g|^2/kappa per site, 4001 points.
FrequencyGrid default_grid(const ChainConfig& config);

/// Integration default: wide enough that the non-Lorentzian side-channel
/// tails (mass ~ gamma_A/(pi W)) fall under 1e-3, spacing a fixed fraction
/// of the narrowest spectral linewidth.
FrequencyGrid audit_grid(const ChainConfig& config, const Generator& generator);

struct AuditReport {
    FrequencyGrid grid;
    std::vector<std::string> channel_names;
    std::vector<double> spectral_integrals;  // trapezoid per channel
    std::vector<double> time_fractions;      // trajectory channel fractions
    double spectral_total = 0.0;
    double time_total = 0.0;      // p_spon at the trajectory end
    double residual_norm2 = 0.0;  // ||x(t_end)||^2 still undecayed
    double total_defect = 0.0;    // |spectral_total - 1|

    double worst_channel_defect() const;
};

/// Parseval bookkeeping: per-channel trapezoid integrals of the spectrum set
/// against the trajectory's channel fractions, plus the defect of the grand
/// total from 1. Never throws on a defect; callers decide what to flag.
AuditReport normalization_audit(const SpectrumSet& spectra, const Trajectory& trajectory);

}  // namespace cascade
