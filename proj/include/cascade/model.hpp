#pragma once

#include <Eigen/Dense>

#include "cascade/config.hpp"

namespace cascade {

/// Amplitudes of the one-excitation state, ordered
/// [xi_1, alpha_1, beta_1, xi_2, alpha_2, beta_2, ...]:
/// xi_k the atomic excitation, alpha_k the clockwise (direction a) mode,
/// beta_k the counterclockwise (direction b) mode of site k.
/// The squared norm is the no-emission probability and stays within [0, 1].
using OneQuantumState = Eigen::VectorXcd;

/// Dense 3N x 3N matrix M of the non-unitary evolution d(amps)/dt = M amps.
/// With gamma_A > 0 and every kappa_total > 0 all eigenvalues of M have
/// strictly negative real part.
struct Generator {
    Eigen::MatrixXcd matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    int n_sites() const { return dim() / 3; }
};

/// Coefficients of the collective fiber output fields: the direction-a field
/// is sum_k c_a[k] alpha_k and the direction-b field is sum_k c_b[k] beta_k.
/// |c_a[k]| = |c_b[k]| = sqrt(2 kappa_ex^(k)).
struct OutputCoefficients {
    Eigen::VectorXcd c_a;
    Eigen::VectorXcd c_b;
};

/// Builds the one-excitation generator for an arbitrary chain. For each
/// site k (1-based):
///   d xi_k   = -(gamma_A/2) xi_k - i g_k alpha_k - i conj(g_k) beta_k
///   d alpha_k = -(kappa_k + i delta_k) alpha_k - i conj(g_k) xi_k
///               - i h_k beta_k
///               - sum_{j<k} 2 sqrt(kappa_ex^j kappa_ex^k) e^{+i Phi_a[j,k]} alpha_j
///   d beta_k  = -(kappa_k + i delta_k) beta_k - i g_k xi_k
///               - i conj(h_k) alpha_k
///               - sum_{j>k} 2 sqrt(kappa_ex^j kappa_ex^k) e^{+i Phi_b[k,j]} beta_j
/// where Phi_a[j,k] accumulates phi_a over links j..k-1 and Phi_b[k,j]
/// accumulates phi_b over links k..j-1. Feeds are strictly downstream per
/// direction; there is no upstream entry.
Generator build_generator(const ChainConfig& config);

/// c_a[k] = e^{-i Phi_a[1,k]} sqrt(2 kappa_ex^k), c_b[k] = e^{-i Phi_b[k,N]}
/// sqrt(2 kappa_ex^k). Contract with build_generator: the cross-feed entry
/// from site j into site k equals -conj(c_a[k]) c_a[j] for j < k in
/// direction a, and -conj(c_b[k]) c_b[j] for j > k in direction b.
OutputCoefficients output_coefficients(const ChainConfig& config);

/// All amplitudes zero except xi_{excited_atom} = 1. The index is 1-based.
OneQuantumState initial_state(const ChainConfig& config, int excited_atom);

/// Instantaneous total emission rate out of state x: the negative of
/// d||x||^2/dt. Splits as gamma_A sum |xi_k|^2 (free space)
/// + 2 sum kappa_in^k (|alpha_k|^2 + |beta_k|^2) (intrinsic scatter)
/// + |sum c_a alpha|^2 + |sum c_b beta|^2 (the two fiber directions).
double total_decay_rate(const ChainConfig& config, const OneQuantumState& x);

}  // namespace cascade
