#include <cmath>

#include "kernels_internal.hpp"

// Reference kernel. Solves (-i w I - H) z = rhs for an upper Hessenberg H by
// a single sweep of complex Givens rotations followed by back substitution.
// The rotation for column k is built from the diagonal entry a and the
// subdiagonal entry b:  G = [[conj(a), conj(b)], [-b, a]] / r  with
// r = sqrt(|a|^2 + |b|^2), which maps (a, b) to (r, 0).
//
// The operation order in this file is the contract for the SIMD variants:
// each line of arithmetic below corresponds to one vector instruction there.
// Do not "simplify" groupings here without mirroring the change.

namespace cascade::kernels::detail {

void solve_block_scalar(const BlockArgs& args) {
    const int n = args.n;
    double* b_re = args.work;
    double* b_im = b_re + static_cast<std::size_t>(n) * n * kLanes;
    double* y_re = b_im + static_cast<std::size_t>(n) * n * kLanes;
    double* y_im = y_re + static_cast<std::size_t>(n) * kLanes;

    for (int lane = 0; lane < kLanes; ++lane) {
        const double w = args.omega[lane];

        // B = -i w I - H; the shift only touches the diagonal imaginary part.
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const std::size_t src = static_cast<std::size_t>(i) * n + j;
                const std::size_t dst = src * kLanes + lane;
                b_re[dst] = -args.h_re[src];
                b_im[dst] = -args.h_im[src];
            }
            const std::size_t diag = (static_cast<std::size_t>(i) * n + i) * kLanes + lane;
            b_im[diag] = b_im[diag] - w;
            y_re[i * kLanes + lane] = args.rhs_re[i];
            y_im[i * kLanes + lane] = args.rhs_im[i];
        }

        // Forward sweep: eliminate the subdiagonal, one rotation per column.
        for (int k = 0; k + 1 < n; ++k) {
            const std::size_t ka = (static_cast<std::size_t>(k) * n + k) * kLanes + lane;
            const std::size_t kb = (static_cast<std::size_t>(k + 1) * n + k) * kLanes + lane;
            const double a_re = b_re[ka], a_im = b_im[ka];
            const double c_re = b_re[kb], c_im = b_im[kb];
            const double na = a_re * a_re + a_im * a_im;
            const double nc = c_re * c_re + c_im * c_im;
            const double r = std::sqrt(na + nc);
            // r == 0 only at an exact pole; the division then produces inf
            // and the dispatcher's finiteness check reports the frequency.
            const double inv = 1.0 / r;

            for (int j = k; j < n; ++j) {
                const std::size_t ju = (static_cast<std::size_t>(k) * n + j) * kLanes + lane;
                const std::size_t jv = (static_cast<std::size_t>(k + 1) * n + j) * kLanes + lane;
                const double u_re = b_re[ju], u_im = b_im[ju];
                const double v_re = b_re[jv], v_im = b_im[jv];
                const double t1_re = a_re * u_re + a_im * u_im;
                const double t1_im = a_re * u_im - a_im * u_re;
                const double t2_re = c_re * v_re + c_im * v_im;
                const double t2_im = c_re * v_im - c_im * v_re;
                const double s1_re = a_re * v_re - a_im * v_im;
                const double s1_im = a_re * v_im + a_im * v_re;
                const double s2_re = c_re * u_re - c_im * u_im;
                const double s2_im = c_re * u_im + c_im * u_re;
                b_re[ju] = (t1_re + t2_re) * inv;
                b_im[ju] = (t1_im + t2_im) * inv;
                b_re[jv] = (s1_re - s2_re) * inv;
                b_im[jv] = (s1_im - s2_im) * inv;
            }
            {
                const std::size_t iu = static_cast<std::size_t>(k) * kLanes + lane;
                const std::size_t iv = static_cast<std::size_t>(k + 1) * kLanes + lane;
                const double u_re = y_re[iu], u_im = y_im[iu];
                const double v_re = y_re[iv], v_im = y_im[iv];
                const double t1_re = a_re * u_re + a_im * u_im;
                const double t1_im = a_re * u_im - a_im * u_re;
                const double t2_re = c_re * v_re + c_im * v_im;
                const double t2_im = c_re * v_im - c_im * v_re;
                const double s1_re = a_re * v_re - a_im * v_im;
                const double s1_im = a_re * v_im + a_im * v_re;
                const double s2_re = c_re * u_re - c_im * u_im;
                const double s2_im = c_re * u_im + c_im * u_re;
                y_re[iu] = (t1_re + t2_re) * inv;
                y_im[iu] = (t1_im + t2_im) * inv;
                y_re[iv] = (s1_re - s2_re) * inv;
                y_im[iv] = (s1_im - s2_im) * inv;
            }
        }

        // Back substitution on the resulting upper triangle.
        for (int i = n - 1; i >= 0; --i) {
            double s_re = y_re[static_cast<std::size_t>(i) * kLanes + lane];
            double s_im = y_im[static_cast<std::size_t>(i) * kLanes + lane];
            for (int j = i + 1; j < n; ++j) {
                const std::size_t ij = (static_cast<std::size_t>(i) * n + j) * kLanes + lane;
                const std::size_t jz = static_cast<std::size_t>(j) * kLanes + lane;
                const double m_re = b_re[ij], m_im = b_im[ij];
                const double x_re = args.z_re[jz], x_im = args.z_im[jz];
                s_re = s_re - (m_re * x_re - m_im * x_im);
                s_im = s_im - (m_re * x_im + m_im * x_re);
            }
            const std::size_t ii = (static_cast<std::size_t>(i) * n + i) * kLanes + lane;
            const double d_re = b_re[ii], d_im = b_im[ii];
            const double den = d_re * d_re + d_im * d_im;
            const double idn = 1.0 / den;
            const std::size_t iz = static_cast<std::size_t>(i) * kLanes + lane;
            args.z_re[iz] = (s_re * d_re + s_im * d_im) * idn;
            args.z_im[iz] = (s_im * d_re - s_re * d_im) * idn;
        }
    }
}

}  // namespace cascade::kernels::detail
