#if defined(__aarch64__)

#include <arm_neon.h>

#include "kernels_internal.hpp"

// NEON kernel: float64x2_t carries two lanes, so one block is processed as
// two half-blocks. Instruction-per-line mirroring of the scalar kernel, as
// in the AVX2 variant; vfma is deliberately not used.

namespace cascade::kernels::detail {

namespace {

inline float64x2_t ld(const double* p) { return vld1q_f64(p); }
inline void st(double* p, float64x2_t v) { vst1q_f64(p, v); }
inline float64x2_t mul(float64x2_t a, float64x2_t b) { return vmulq_f64(a, b); }
inline float64x2_t add(float64x2_t a, float64x2_t b) { return vaddq_f64(a, b); }
inline float64x2_t sub(float64x2_t a, float64x2_t b) { return vsubq_f64(a, b); }

void solve_half_block(const BlockArgs& args, int half) {
    const int n = args.n;
    const int off = half * 2;  // lane offset of this float64x2 pair
    double* b_re = args.work;
    double* b_im = b_re + static_cast<std::size_t>(n) * n * kLanes;
    double* y_re = b_im + static_cast<std::size_t>(n) * n * kLanes;
    double* y_im = y_re + static_cast<std::size_t>(n) * kLanes;

    const float64x2_t w = ld(args.omega + off);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t src = static_cast<std::size_t>(i) * n + j;
            const std::size_t dst = src * kLanes + off;
            st(b_re + dst, vdupq_n_f64(-args.h_re[src]));
            st(b_im + dst, vdupq_n_f64(-args.h_im[src]));
        }
        const std::size_t diag = (static_cast<std::size_t>(i) * n + i) * kLanes + off;
        st(b_im + diag, sub(ld(b_im + diag), w));
        st(y_re + static_cast<std::size_t>(i) * kLanes + off, vdupq_n_f64(args.rhs_re[i]));
        st(y_im + static_cast<std::size_t>(i) * kLanes + off, vdupq_n_f64(args.rhs_im[i]));
    }

    for (int k = 0; k + 1 < n; ++k) {
        const std::size_t ka = (static_cast<std::size_t>(k) * n + k) * kLanes + off;
        const std::size_t kb = (static_cast<std::size_t>(k + 1) * n + k) * kLanes + off;
        const float64x2_t a_re = ld(b_re + ka), a_im = ld(b_im + ka);
        const float64x2_t c_re = ld(b_re + kb), c_im = ld(b_im + kb);
        const float64x2_t na = add(mul(a_re, a_re), mul(a_im, a_im));
        const float64x2_t nc = add(mul(c_re, c_re), mul(c_im, c_im));
        const float64x2_t r = vsqrtq_f64(add(na, nc));
        const float64x2_t inv = vdivq_f64(vdupq_n_f64(1.0), r);

        for (int j = k; j < n; ++j) {
            const std::size_t ju = (static_cast<std::size_t>(k) * n + j) * kLanes + off;
            const std::size_t jv = (static_cast<std::size_t>(k + 1) * n + j) * kLanes + off;
            const float64x2_t u_re = ld(b_re + ju), u_im = ld(b_im + ju);
            const float64x2_t v_re = ld(b_re + jv), v_im = ld(b_im + jv);
            const float64x2_t t1_re = add(mul(a_re, u_re), mul(a_im, u_im));
            const float64x2_t t1_im = sub(mul(a_re, u_im), mul(a_im, u_re));
            const float64x2_t t2_re = add(mul(c_re, v_re), mul(c_im, v_im));
            const float64x2_t t2_im = sub(mul(c_re, v_im), mul(c_im, v_re));
            const float64x2_t s1_re = sub(mul(a_re, v_re), mul(a_im, v_im));
            const float64x2_t s1_im = add(mul(a_re, v_im), mul(a_im, v_re));
            const float64x2_t s2_re = sub(mul(c_re, u_re), mul(c_im, u_im));
            const float64x2_t s2_im = add(mul(c_re, u_im), mul(c_im, u_re));
            st(b_re + ju, mul(add(t1_re, t2_re), inv));
            st(b_im + ju, mul(add(t1_im, t2_im), inv));
            st(b_re + jv, mul(sub(s1_re, s2_re), inv));
            st(b_im + jv, mul(sub(s1_im, s2_im), inv));
        }
        {
            const std::size_t iu = static_cast<std::size_t>(k) * kLanes + off;
            const std::size_t iv = static_cast<std::size_t>(k + 1) * kLanes + off;
            const float64x2_t u_re = ld(y_re + iu), u_im = ld(y_im + iu);
            const float64x2_t v_re = ld(y_re + iv), v_im = ld(y_im + iv);
            const float64x2_t t1_re = add(mul(a_re, u_re), mul(a_im, u_im));
            const float64x2_t t1_im = sub(mul(a_re, u_im), mul(a_im, u_re));
            const float64x2_t t2_re = add(mul(c_re, v_re), mul(c_im, v_im));
            const float64x2_t t2_im = sub(mul(c_re, v_im), mul(c_im, v_re));
            const float64x2_t s1_re = sub(mul(a_re, v_re), mul(a_im, v_im));
            const float64x2_t s1_im = add(mul(a_re, v_im), mul(a_im, v_re));
            const float64x2_t s2_re = sub(mul(c_re, u_re), mul(c_im, u_im));
            const float64x2_t s2_im = add(mul(c_re, u_im), mul(c_im, u_re));
            st(y_re + iu, mul(add(t1_re, t2_re), inv));
            st(y_im + iu, mul(add(t1_im, t2_im), inv));
            st(y_re + iv, mul(sub(s1_re, s2_re), inv));
            st(y_im + iv, mul(sub(s1_im, s2_im), inv));
        }
    }

    for (int i = n - 1; i >= 0; --i) {
        float64x2_t s_re = ld(y_re + static_cast<std::size_t>(i) * kLanes + off);
        float64x2_t s_im = ld(y_im + static_cast<std::size_t>(i) * kLanes + off);
        for (int j = i + 1; j < n; ++j) {
            const std::size_t ij = (static_cast<std::size_t>(i) * n + j) * kLanes + off;
            const std::size_t jz = static_cast<std::size_t>(j) * kLanes + off;
            const float64x2_t m_re = ld(b_re + ij), m_im = ld(b_im + ij);
            const float64x2_t x_re = ld(args.z_re + jz), x_im = ld(args.z_im + jz);
            s_re = sub(s_re, sub(mul(m_re, x_re), mul(m_im, x_im)));
            s_im = sub(s_im, add(mul(m_re, x_im), mul(m_im, x_re)));
        }
        const std::size_t ii = (static_cast<std::size_t>(i) * n + i) * kLanes + off;
        const float64x2_t d_re = ld(b_re + ii), d_im = ld(b_im + ii);
        const float64x2_t den = add(mul(d_re, d_re), mul(d_im, d_im));
        const float64x2_t idn = vdivq_f64(vdupq_n_f64(1.0), den);
        const std::size_t iz = static_cast<std::size_t>(i) * kLanes + off;
        st(args.z_re + iz, mul(add(mul(s_re, d_re), mul(s_im, d_im)), idn));
        st(args.z_im + iz, mul(sub(mul(s_im, d_re), mul(s_re, d_im)), idn));
    }
}

}  // namespace

void solve_block_neon(const BlockArgs& args) {
    solve_half_block(args, 0);
    solve_half_block(args, 1);
}

}  // namespace cascade::kernels::detail

#endif  // aarch64
