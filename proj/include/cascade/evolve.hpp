#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cascade/model.hpp"

namespace cascade {

struct EvolveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    /// Integration horizon; <= 0 selects 40 / (smallest nonzero decay rate).
    double t_end = -1.0;
    /// Minimum spacing of stored nodes; 0 stores every accepted step.
    double store_dt = 0.0;
    /// Stop early once ||x||^2 falls below this; 0 disables the early stop.
    double tail_threshold = 0.0;
    std::uint64_t max_steps = 80'000'000;
};

/// Time-domain solution of dx/dt = M x together with cumulative emission
/// bookkeeping. Channel columns are ordered fiber_a, fiber_b,
/// side_atom_1..N, scatter_site_1..N; their sum is p_spon and
/// ||x(t)||^2 + p_spon(t) = 1 up to integrator error.
struct Trajectory {
    std::vector<double> times;
    std::vector<OneQuantumState> states;
    std::vector<double> p_spon;
    Eigen::MatrixXd channel_fractions;  // row per stored time
    std::vector<std::string> channel_names;
    Eigen::MatrixXcd generator;  // kept for transform quadrature
    int n_atoms = 0;
    double rel_tol_used = 0.0;
    double abs_tol_used = 0.0;

    int n_nodes() const { return static_cast<int>(times.size()); }
    const OneQuantumState& final_state() const { return states.back(); }
    double final_norm2() const { return states.back().squaredNorm(); }
};

/// Adaptive embedded Runge-Kutta (Dormand-Prince 4/5) integration of the
/// non-unitary flow. The channel integrals ride in the controlled state, so
/// they carry the same order and error control as the amplitudes.
/// Throws NumericalError on step-size underflow (with the failure time) and
/// on non-finite state values.
Trajectory evolve(const Generator& generator, const ChainConfig& config,
                  const OneQuantumState& state0, const EvolveOptions& options);

/// Convenience overload: tolerance sets rel_tol, abs_tol = tolerance * 1e-2.
Trajectory evolve(const Generator& generator, const ChainConfig& config,
                  const OneQuantumState& state0, double t_end, double tolerance);

/// Transform integral int_0^inf e^{i omega t} x(t) dt from the stored
/// trajectory: piecewise cubic Hermite quadrature (derivatives come from
/// M x at the nodes, so accuracy does not depend on the store stride being
/// as fine as the integrator steps) plus an analytic exponential tail built
/// from the final state and the least-damped eigenvalue of M.
/// Requires final ||x||^2 < tail_threshold; throws NumericalError otherwise.
Eigen::VectorXcd numerical_laplace(const Trajectory& trajectory, double omega,
                                   double tail_threshold);

/// Batch version; column j is the transform at omega[j]. Evaluation order
/// never affects the result.
Eigen::MatrixXcd numerical_laplace(const Trajectory& trajectory,
                                   std::span<const double> omega,
                                   double tail_threshold);

}  // namespace cascade
