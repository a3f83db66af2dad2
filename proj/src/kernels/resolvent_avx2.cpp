#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "kernels_internal.hpp"

// AVX2 kernel: the four lanes of one block ride in one __m256d. Every vector
// instruction below mirrors one arithmetic line of the scalar kernel, in the
// same order, so results are bit-identical (vaddpd/vmulpd/vdivpd/vsqrtpd are
// correctly rounded and no FMA contraction is allowed in this TU).

namespace cascade::kernels::detail {

bool cpu_has_avx2() { return __builtin_cpu_supports("avx2"); }

namespace {

inline __m256d ld(const double* p) { return _mm256_loadu_pd(p); }
inline void st(double* p, __m256d v) { _mm256_storeu_pd(p, v); }

}  // namespace

void solve_block_avx2(const BlockArgs& args) {
    const int n = args.n;
    double* b_re = args.work;
    double* b_im = b_re + static_cast<std::size_t>(n) * n * kLanes;
    double* y_re = b_im + static_cast<std::size_t>(n) * n * kLanes;
    double* y_im = y_re + static_cast<std::size_t>(n) * kLanes;

    const __m256d w = ld(args.omega);

    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t src = static_cast<std::size_t>(i) * n + j;
            const std::size_t dst = src * kLanes;
            st(b_re + dst, _mm256_set1_pd(-args.h_re[src]));
            st(b_im + dst, _mm256_set1_pd(-args.h_im[src]));
        }
        const std::size_t diag = (static_cast<std::size_t>(i) * n + i) * kLanes;
        st(b_im + diag, _mm256_sub_pd(ld(b_im + diag), w));
        st(y_re + static_cast<std::size_t>(i) * kLanes, _mm256_set1_pd(args.rhs_re[i]));
        st(y_im + static_cast<std::size_t>(i) * kLanes, _mm256_set1_pd(args.rhs_im[i]));
    }

    for (int k = 0; k + 1 < n; ++k) {
        const std::size_t ka = (static_cast<std::size_t>(k) * n + k) * kLanes;
        const std::size_t kb = (static_cast<std::size_t>(k + 1) * n + k) * kLanes;
        const __m256d a_re = ld(b_re + ka), a_im = ld(b_im + ka);
        const __m256d c_re = ld(b_re + kb), c_im = ld(b_im + kb);
        const __m256d na = _mm256_add_pd(_mm256_mul_pd(a_re, a_re), _mm256_mul_pd(a_im, a_im));
        const __m256d nc = _mm256_add_pd(_mm256_mul_pd(c_re, c_re), _mm256_mul_pd(c_im, c_im));
        const __m256d r = _mm256_sqrt_pd(_mm256_add_pd(na, nc));
        const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), r);

        for (int j = k; j < n; ++j) {
            const std::size_t ju = (static_cast<std::size_t>(k) * n + j) * kLanes;
            const std::size_t jv = (static_cast<std::size_t>(k + 1) * n + j) * kLanes;
            const __m256d u_re = ld(b_re + ju), u_im = ld(b_im + ju);
            const __m256d v_re = ld(b_re + jv), v_im = ld(b_im + jv);
            const __m256d t1_re = _mm256_add_pd(_mm256_mul_pd(a_re, u_re), _mm256_mul_pd(a_im, u_im));
            const __m256d t1_im = _mm256_sub_pd(_mm256_mul_pd(a_re, u_im), _mm256_mul_pd(a_im, u_re));
            const __m256d t2_re = _mm256_add_pd(_mm256_mul_pd(c_re, v_re), _mm256_mul_pd(c_im, v_im));
            const __m256d t2_im = _mm256_sub_pd(_mm256_mul_pd(c_re, v_im), _mm256_mul_pd(c_im, v_re));
            const __m256d s1_re = _mm256_sub_pd(_mm256_mul_pd(a_re, v_re), _mm256_mul_pd(a_im, v_im));
            const __m256d s1_im = _mm256_add_pd(_mm256_mul_pd(a_re, v_im), _mm256_mul_pd(a_im, v_re));
            const __m256d s2_re = _mm256_sub_pd(_mm256_mul_pd(c_re, u_re), _mm256_mul_pd(c_im, u_im));
            const __m256d s2_im = _mm256_add_pd(_mm256_mul_pd(c_re, u_im), _mm256_mul_pd(c_im, u_re));
            st(b_re + ju, _mm256_mul_pd(_mm256_add_pd(t1_re, t2_re), inv));
            st(b_im + ju, _mm256_mul_pd(_mm256_add_pd(t1_im, t2_im), inv));
            st(b_re + jv, _mm256_mul_pd(_mm256_sub_pd(s1_re, s2_re), inv));
            st(b_im + jv, _mm256_mul_pd(_mm256_sub_pd(s1_im, s2_im), inv));
        }
        {
            const std::size_t iu = static_cast<std::size_t>(k) * kLanes;
            const std::size_t iv = static_cast<std::size_t>(k + 1) * kLanes;
            const __m256d u_re = ld(y_re + iu), u_im = ld(y_im + iu);
            const __m256d v_re = ld(y_re + iv), v_im = ld(y_im + iv);
            const __m256d t1_re = _mm256_add_pd(_mm256_mul_pd(a_re, u_re), _mm256_mul_pd(a_im, u_im));
            const __m256d t1_im = _mm256_sub_pd(_mm256_mul_pd(a_re, u_im), _mm256_mul_pd(a_im, u_re));
            const __m256d t2_re = _mm256_add_pd(_mm256_mul_pd(c_re, v_re), _mm256_mul_pd(c_im, v_im));
            const __m256d t2_im = _mm256_sub_pd(_mm256_mul_pd(c_re, v_im), _mm256_mul_pd(c_im, v_re));
            const __m256d s1_re = _mm256_sub_pd(_mm256_mul_pd(a_re, v_re), _mm256_mul_pd(a_im, v_im));
            const __m256d s1_im = _mm256_add_pd(_mm256_mul_pd(a_re, v_im), _mm256_mul_pd(a_im, v_re));
            const __m256d s2_re = _mm256_sub_pd(_mm256_mul_pd(c_re, u_re), _mm256_mul_pd(c_im, u_im));
            const __m256d s2_im = _mm256_add_pd(_mm256_mul_pd(c_re, u_im), _mm256_mul_pd(c_im, u_re));
            st(y_re + iu, _mm256_mul_pd(_mm256_add_pd(t1_re, t2_re), inv));
            st(y_im + iu, _mm256_mul_pd(_mm256_add_pd(t1_im, t2_im), inv));
            st(y_re + iv, _mm256_mul_pd(_mm256_sub_pd(s1_re, s2_re), inv));
            st(y_im + iv, _mm256_mul_pd(_mm256_sub_pd(s1_im, s2_im), inv));
        }
    }

    for (int i = n - 1; i >= 0; --i) {
        __m256d s_re = ld(y_re + static_cast<std::size_t>(i) * kLanes);
        __m256d s_im = ld(y_im + static_cast<std::size_t>(i) * kLanes);
        for (int j = i + 1; j < n; ++j) {
            const std::size_t ij = (static_cast<std::size_t>(i) * n + j) * kLanes;
            const std::size_t jz = static_cast<std::size_t>(j) * kLanes;
            const __m256d m_re = ld(b_re + ij), m_im = ld(b_im + ij);
            const __m256d x_re = ld(args.z_re + jz), x_im = ld(args.z_im + jz);
            s_re = _mm256_sub_pd(s_re, _mm256_sub_pd(_mm256_mul_pd(m_re, x_re), _mm256_mul_pd(m_im, x_im)));
            s_im = _mm256_sub_pd(s_im, _mm256_add_pd(_mm256_mul_pd(m_re, x_im), _mm256_mul_pd(m_im, x_re)));
        }
        const std::size_t ii = (static_cast<std::size_t>(i) * n + i) * kLanes;
        const __m256d d_re = ld(b_re + ii), d_im = ld(b_im + ii);
        const __m256d den = _mm256_add_pd(_mm256_mul_pd(d_re, d_re), _mm256_mul_pd(d_im, d_im));
        const __m256d idn = _mm256_div_pd(_mm256_set1_pd(1.0), den);
        const std::size_t iz = static_cast<std::size_t>(i) * kLanes;
        st(args.z_re + iz,
           _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(s_re, d_re), _mm256_mul_pd(s_im, d_im)), idn));
        st(args.z_im + iz,
           _mm256_mul_pd(_mm256_sub_pd(_mm256_mul_pd(s_im, d_re), _mm256_mul_pd(s_re, d_im)), idn));
    }
}

}  // namespace cascade::kernels::detail

#endif  // x86_64
