#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>

namespace cascade::kernels {

/// Frequency-sweep solver variants. All variants compute identical bit
/// patterns: they execute the same arithmetic per frequency, only the lane
/// packing differs. "auto_pick" resolves at runtime from CPU features, with
/// the CASCADE_KERNEL environment variable (scalar|avx2|neon) as override.
enum class Kernel {
    scalar,
    avx2,
    neon,
    auto_pick,
};

const char* kernel_name(Kernel k);

/// True when the variant can run on this machine (scalar always can).
bool kernel_available(Kernel k);

/// Resolves auto_pick to a concrete available variant; throws ConfigError
/// when an explicitly requested variant is unavailable.
Kernel pick_kernel(Kernel requested);

/// Number of frequencies per work block. Threads are assigned whole blocks,
/// so results are independent of the thread count; SIMD variants pack one
/// block into vector lanes.
inline constexpr int lane_block = 4;

/// One-time reduction of a system matrix A to Hessenberg form A = Q H Q*.
/// Shifting then happens on H only: each frequency costs one Givens-QR
/// sweep of a Hessenberg matrix instead of a full factorization.
struct ResolventContext {
    int n = 0;
    Eigen::MatrixXcd q;            // unitary factor
    Eigen::MatrixXcd h;            // upper Hessenberg factor
    Eigen::VectorXcd eigenvalues;  // of A, for pole detection and grid rules

    explicit ResolventContext(const Eigen::MatrixXcd& a);

    /// Smallest |Re eigenvalue| above a relative floor; 0 when none qualify.
    double min_nonzero_decay() const;
};

struct SolveOptions {
    Kernel kernel = Kernel::auto_pick;
    int threads = 1;
};

/// Columns are y_j = (-i omega_j I - A)^{-1} x0. Throws NumericalError when
/// some omega_j lies numerically on a resonance of A (an eigenvalue with
/// vanishing real part at that frequency) or a solve produces non-finite
/// values. Output is bit-identical across kernel variants and thread counts.
Eigen::MatrixXcd solve_resolvent(const ResolventContext& ctx,
                                 const Eigen::VectorXcd& x0,
                                 std::span<const double> omega,
                                 const SolveOptions& options = {});

}  // namespace cascade::kernels
