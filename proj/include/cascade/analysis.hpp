#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace cascade {

// Small measurement helpers shared by the comparison command and the test
// suites. They operate on sampled spectra only; no model knowledge.

struct Peak {
    double omega = 0.0;
    double value = 0.0;
};

/// Interior local maxima, refined by fitting a parabola through the three
/// samples around each grid maximum. Peaks below min_ratio times the global
/// maximum are dropped.
std::vector<Peak> local_maxima(std::span<const double> omega,
                               const Eigen::VectorXd& values,
                               double min_ratio = 1e-3);

/// The single highest peak.
Peak global_maximum(std::span<const double> omega, const Eigen::VectorXd& values);

/// Half width at half maximum around the global peak, half-crossings found
/// by linear interpolation. Requires the half level to be crossed on both
/// sides within the grid.
double hwhm(std::span<const double> omega, const Eigen::VectorXd& values);

/// max_i |a_i - b_i|, and the same normalized by max_i max(a_i, b_i).
double sup_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double sup_diff_rel_peak(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Trapezoid integral on an arbitrary increasing abscissa.
double trapezoid(std::span<const double> x, const Eigen::VectorXd& y);

}  // namespace cascade
