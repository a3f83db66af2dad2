#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "cascade/config.hpp"
#include "cascade/model.hpp"
#include "cascade/spectra.hpp"

namespace cascade {

// Bad-cavity (kappa >> g) models: the fields follow the atoms adiabatically
// and the dynamics closes on the N atomic amplitudes alone. kappa below
// always means the total per-site rate kappa_ex + kappa_in.

/// N x N effective atom-only generator, valid for homogeneous kappa, delta,
/// zero h and zero link phases:
///   diagonal  -gamma_A/2 - 2|g_k|^2/(kappa + i delta)
///   (k,l), k != l, m = min, M = max:
///             2 g_M conj(g_m) kappa/(kappa + i delta)^2 * eta^(M-m-1)
///   eta = -(kappa - i delta)/(kappa + i delta)
/// The matrix is symmetric (not Hermitian). At kappa_in = 0 it equals the
/// Schur complement of the field block of the full generator exactly.
struct ReducedGenerator {
    Eigen::MatrixXcd matrix;

    int n_atoms() const { return static_cast<int>(matrix.rows()); }
};

ReducedGenerator build_reduced_generator(const ChainConfig& config);

/// Closed-form two-site solution for atom 1 initially excited.
/// lambda+- = -gamma_A/2 - (|g_1|^2+|g_2|^2)/d +- p/2 with d = kappa+i delta,
/// p = 2 sqrt(((|g_1|^2-|g_2|^2)/d)^2 + (2 conj(g_1) g_2 kappa/d^2)^2).
/// When p = 0 the pair is confluent and t e^{lambda t} terms appear
/// (flagged via `degenerate`).
struct TwoSiteClosedForm {
    complexd lambda_plus;
    complexd lambda_minus;
    complexd p;
    bool degenerate = false;

    std::function<complexd(double)> xi1;
    std::function<complexd(double)> xi2;
};

TwoSiteClosedForm two_site_closed_form(complexd g1, complexd g2, double kappa,
                                       double delta, double gamma_A);

/// Fields produced by frozen atomic amplitudes: solves the full model's
/// field equations with the time derivatives set to zero. Cascaded feeds
/// make each direction a triangular solve. Requires h = 0 (backscattering
/// couples the directions and breaks the triangular structure) and
/// kappa_total > 0 on every site.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> adiabatic_field_reconstruction(
    const ChainConfig& config, const Eigen::VectorXcd& xi);

/// Fiber spectra of the reduced model: atomic transforms from the N x N
/// resolvent, fields reconstructed adiabatically, channels assembled with
/// the output coefficients.
std::pair<Eigen::VectorXd, Eigen::VectorXd> reduced_fiber_spectra(
    const ChainConfig& config, int excited_atom, const FrequencyGrid& grid);

enum class CouplingPattern {
    superradiant_equal,      // all g_k equal, real
    alternating_quadrature,  // g real on odd sites, i*(real) on even sites
    general,
};

/// Collective-decay structure of the reduced model at delta = 0.
///
/// superradiant_equal: one collective jump vector per fiber direction,
/// sum_k (-1)^(k+1) sigma_k-, each direction with rate 2g^2/kappa, plus the
/// residual free-space rate gamma_A/2 per atom. No coherent coupling.
///
/// alternating_quadrature: odd and even sites form separate collective jump
/// vectors (same per-direction rate), and sites an odd distance apart are
/// coupled by an excitation-exchange Hamiltonian with strength
/// (2g^2/kappa)(-1)^k for the pair (k, l), k < l.
///
/// `reassembled` rebuilds the reduced generator from the reported pieces;
/// classification is only reported when that reassembly is exact.
struct SpecialCaseReport {
    CouplingPattern pattern = CouplingPattern::general;
    double collective_rate = 0.0;  // per direction
    double residual_rate = 0.0;
    Eigen::VectorXcd jump_all;   // superradiant_equal
    Eigen::VectorXcd jump_odd;   // alternating_quadrature
    Eigen::VectorXcd jump_even;  // alternating_quadrature
    Eigen::MatrixXcd dipole_hamiltonian;
    Eigen::MatrixXcd reassembled;
    std::string phase_note;
};

SpecialCaseReport special_case_structure(const ChainConfig& config);

/// Eigenstructure of the three-site alternating dipole Hamiltonian
/// (g_1 = -i g_2 = g_3 = g, delta = 0):
///   |e+-> = (sigma_1+ -+ sqrt(2) sigma_2+ - sigma_3+)|G>/2, energy +-2 sqrt(2) g^2/kappa
///   |e0>  = (sigma_1+ + sigma_3+)|G>/sqrt(2),               energy 0
/// plus the expansions of the single-atom initial states in this basis.
struct N3Eigenstructure {
    Eigen::VectorXcd e_plus, e_minus, e_zero;  // atomic-amplitude vectors
    double energy_plus = 0.0, energy_minus = 0.0, energy_zero = 0.0;
    Eigen::Vector3cd atom1_coeffs;  // sigma_1+|G> = sum coeffs * {e+, e-, e0}
    Eigen::Vector3cd atom2_coeffs;
};

N3Eigenstructure n3_eigenstructure(const ChainConfig& config);

}  // namespace cascade
