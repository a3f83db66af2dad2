#pragma once

#include <cstddef>

// Per-block shifted-Hessenberg solvers. One block is lane_block frequencies
// solved against the same Hessenberg matrix H and right-hand side.
//
// Every variant must execute the identical sequence of IEEE operations per
// lane: no FMA, no reassociation, explicit real/imaginary arithmetic. The
// translation units are compiled with -ffp-contract=off so scalar and SIMD
// builds produce bit-identical output; the equivalence suite asserts this.

namespace cascade::kernels::detail {

inline constexpr int kLanes = 4;

struct BlockArgs {
    const double* h_re;    // n x n, row major
    const double* h_im;
    int n;
    const double* rhs_re;  // length n
    const double* rhs_im;
    const double* omega;   // kLanes entries, tail blocks padded by repetition
    double* z_re;          // n x kLanes, index [i * kLanes + lane]
    double* z_im;
    double* work;          // solve_workspace_size(n) doubles, thread private
};

// Working set: the shifted copy of H (complex, kLanes wide) plus the rotated
// right-hand side (complex, kLanes wide).
inline std::size_t solve_workspace_size(int n) {
    return static_cast<std::size_t>(2 * n * n + 2 * n) * kLanes;
}

void solve_block_scalar(const BlockArgs& args);

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2();
void solve_block_avx2(const BlockArgs& args);
#endif

#if defined(__aarch64__)
void solve_block_neon(const BlockArgs& args);
#endif

}  // namespace cascade::kernels::detail
