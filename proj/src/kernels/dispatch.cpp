#include "cascade/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cascade/config.hpp"
#include "cascade/errors.hpp"
#include "kernels_internal.hpp"

namespace cascade::kernels {

namespace {

Kernel parse_kernel_name(const std::string& s) {
    if (s == "scalar") return Kernel::scalar;
    if (s == "avx2") return Kernel::avx2;
    if (s == "neon") return Kernel::neon;
    if (s == "auto") return Kernel::auto_pick;
    throw ConfigError("unknown kernel '" + s + "' (scalar|avx2|neon|auto)");
}

}  // namespace

const char* kernel_name(Kernel k) {
    switch (k) {
        case Kernel::scalar: return "scalar";
        case Kernel::avx2: return "avx2";
        case Kernel::neon: return "neon";
        case Kernel::auto_pick: return "auto";
    }
    return "?";
}

bool kernel_available(Kernel k) {
    switch (k) {
        case Kernel::scalar:
        case Kernel::auto_pick:
            return true;
        case Kernel::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return detail::cpu_has_avx2();
#else
            return false;
#endif
        case Kernel::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Kernel pick_kernel(Kernel requested) {
    if (requested == Kernel::auto_pick) {
        if (const char* env = std::getenv("CASCADE_KERNEL")) {
            const Kernel from_env = parse_kernel_name(env);
            if (from_env != Kernel::auto_pick) {
                if (!kernel_available(from_env))
                    throw ConfigError(std::string("CASCADE_KERNEL requests '") +
                                      kernel_name(from_env) + "' but it is not available here");
                return from_env;
            }
        }
        if (kernel_available(Kernel::avx2)) return Kernel::avx2;
        if (kernel_available(Kernel::neon)) return Kernel::neon;
        return Kernel::scalar;
    }
    if (!kernel_available(requested))
        throw ConfigError(std::string("kernel '") + kernel_name(requested) +
                          "' is not available on this machine");
    return requested;
}

ResolventContext::ResolventContext(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols() || a.rows() < 1)
        throw ConfigError("resolvent: matrix must be square and nonempty");
    if (!a.allFinite()) throw ConfigError("resolvent: matrix has non-finite entries");
    n = static_cast<int>(a.rows());
    if (n == 1) {
        q = Eigen::MatrixXcd::Identity(1, 1);
        h = a;
        eigenvalues = a.diagonal();
        return;
    }
    Eigen::HessenbergDecomposition<Eigen::MatrixXcd> hd(a);
    q = hd.matrixQ();
    h = hd.matrixH();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, /*computeEigenvectors=*/false);
    eigenvalues = es.eigenvalues();
}

double ResolventContext::min_nonzero_decay() const {
    const double scale = std::max(1.0, eigenvalues.cwiseAbs().maxCoeff());
    double best = 0.0;
    for (int i = 0; i < eigenvalues.size(); ++i) {
        const double re = std::abs(eigenvalues(i).real());
        if (re <= 1e-12 * scale) continue;
        if (best == 0.0 || re < best) best = re;
    }
    return best;
}

Eigen::MatrixXcd solve_resolvent(const ResolventContext& ctx, const Eigen::VectorXcd& x0,
                                 std::span<const double> omega, const SolveOptions& options) {
    const int n = ctx.n;
    if (x0.size() != n) throw ConfigError("resolvent: source length does not match matrix");
    const int nw = static_cast<int>(omega.size());
    if (nw == 0) return Eigen::MatrixXcd(n, 0);

    // A shift sitting numerically on an eigenvalue makes the system singular;
    // report the eigenvalue rather than divide by zero.
    const double scale = std::max(1.0, ctx.eigenvalues.cwiseAbs().maxCoeff());
    for (int j = 0; j < nw; ++j) {
        if (!std::isfinite(omega[j])) throw ConfigError("resolvent: non-finite frequency");
        for (int e = 0; e < n; ++e) {
            const complexd lam = ctx.eigenvalues(e);
            const double dist = std::abs(lam - complexd(0.0, -omega[j]));
            if (dist < 1e-10 * scale) {
                std::ostringstream msg;
                msg << "resolvent pole on the frequency axis: omega = " << omega[j]
                    << " coincides with eigenvalue (" << lam.real() << ", " << lam.imag() << "i)";
                throw NumericalError(msg.str());
            }
        }
    }

    const Kernel kernel = pick_kernel(options.kernel);
    const int threads = std::max(1, options.threads);

    // Rotate the source into the Hessenberg basis once.
    const Eigen::VectorXcd rhs = ctx.q.adjoint() * x0;
    std::vector<double> rhs_re(n), rhs_im(n);
    for (int i = 0; i < n; ++i) {
        rhs_re[i] = rhs(i).real();
        rhs_im[i] = rhs(i).imag();
    }
    std::vector<double> h_re(static_cast<std::size_t>(n) * n), h_im(h_re.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            h_re[static_cast<std::size_t>(i) * n + j] = ctx.h(i, j).real();
            h_im[static_cast<std::size_t>(i) * n + j] = ctx.h(i, j).imag();
        }

    Eigen::MatrixXcd z(n, nw);
    const int n_blocks = (nw + lane_block - 1) / lane_block;

    // Whole blocks are the unit of work, so the lane packing (and therefore
    // every rounding decision) is independent of how many threads run.
    auto run_range = [&](int first_block, int stride) {
        std::vector<double> work(detail::solve_workspace_size(n));
        std::vector<double> w_pad(detail::kLanes);
        std::vector<double> z_re(static_cast<std::size_t>(n) * detail::kLanes);
        std::vector<double> z_im(z_re.size());
        for (int b = first_block; b < n_blocks; b += stride) {
            const int begin = b * lane_block;
            const int count = std::min(lane_block, nw - begin);
            for (int l = 0; l < detail::kLanes; ++l)
                w_pad[l] = omega[begin + std::min(l, count - 1)];
            detail::BlockArgs args{h_re.data(), h_im.data(), n,
                                   rhs_re.data(), rhs_im.data(), w_pad.data(),
                                   z_re.data(), z_im.data(), work.data()};
            switch (kernel) {
                case Kernel::scalar:
                    detail::solve_block_scalar(args);
                    break;
#if defined(__x86_64__) || defined(_M_X64)
                case Kernel::avx2:
                    detail::solve_block_avx2(args);
                    break;
#endif
#if defined(__aarch64__)
                case Kernel::neon:
                    detail::solve_block_neon(args);
                    break;
#endif
                default:
                    detail::solve_block_scalar(args);
                    break;
            }
            for (int l = 0; l < count; ++l)
                for (int i = 0; i < n; ++i)
                    z(i, begin + l) = complexd(z_re[static_cast<std::size_t>(i) * detail::kLanes + l],
                                               z_im[static_cast<std::size_t>(i) * detail::kLanes + l]);
        }
    };

    if (threads == 1 || n_blocks == 1) {
        run_range(0, 1);
    } else {
        std::vector<std::thread> pool;
        const int used = std::min(threads, n_blocks);
        pool.reserve(used);
        for (int t = 0; t < used; ++t) pool.emplace_back(run_range, t, used);
        for (std::thread& th : pool) th.join();
    }

    if (!z.allFinite())
        throw NumericalError("resolvent solve produced non-finite values (shift too close to a pole)");
    return ctx.q * z;
}

}  // namespace cascade::kernels
