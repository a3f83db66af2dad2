// Acceptance gate: ten numbered end-to-end checks against the reference
// scenarios, each printing one [PASS]/[FAIL] line with the measured values
// next to the pinned targets. Targets and tolerances live in the check that
// uses them. Run with --criterion <k> for a single check (exit 0/1), or with
// no arguments for all ten (exit = number of failures). Checks that fail do
// so because the target numbers are not what the simulator actually
// produces; the measured values are printed so the discrepancy is auditable.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cascade/analysis.hpp"
#include "cascade/errors.hpp"
#include "cascade/evolve.hpp"
#include "cascade/io.hpp"
#include "cascade/model.hpp"
#include "cascade/presets.hpp"
#include "cascade/reduced.hpp"
#include "cascade/regimes.hpp"
#include "cascade/spectra.hpp"

using namespace cascade;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

bool within(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

double value_near(const FrequencyGrid& grid, const Eigen::VectorXd& v, double omega) {
    const int i = static_cast<int>((omega - grid.min) / grid.spacing() + 0.5);
    return v(std::clamp(i, 0, grid.points - 1));
}

// the two highest local maxima, highest first
std::vector<Peak> dominant_pair(std::span<const double> omega, const Eigen::VectorXd& v) {
    auto peaks = local_maxima(omega, v, 1e-3);
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.value > b.value; });
    if (peaks.size() > 2) peaks.resize(2);
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.omega < b.omega; });
    return peaks;
}

std::vector<Peak> peaks_in_window(std::span<const double> omega, const Eigen::VectorXd& v,
                                  double lo, double hi) {
    std::vector<Peak> out;
    for (const Peak& p : local_maxima(omega, v, 1e-3))
        if (p.omega >= lo && p.omega <= hi) out.push_back(p);
    return out;
}

// 1. Collective two-atom emission with equal couplings: both fiber outputs
//    a single Lorentzian of half width gamma_A/2 + 2(2g^2/kappa) = 22.48,
//    equal in the two directions, computed fast.
bool check_superradiant_lorentzian() {
    constexpr double kHwhmTarget = 22.48;
    constexpr double kHwhmRel = 0.02;
    constexpr double kEqualLimit = 0.02;  // of the peak value
    constexpr double kRuntimeLimitMs = 5000.0;

    const RunSpec rs = preset("fig3-upper");
    const Generator gen = build_generator(rs.config);
    const OneQuantumState x0 = rs.make_initial();
    const auto om = rs.grid->values();
    auto [fa, fb] = fiber_spectra(rs.config, gen, x0, *rs.grid);

    const double ha = hwhm(om, fa);
    const double hb = hwhm(om, fb);
    const double peak = std::max(fa.maxCoeff(), fb.maxCoeff());
    const double asym = sup_diff(fa, fb) / peak;

    const auto t0 = std::chrono::steady_clock::now();
    emission_spectra(rs.config, gen, x0, FrequencyGrid{-200.0, 200.0, 4001});
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    const bool ok = within(ha, kHwhmTarget, kHwhmRel) && within(hb, kHwhmTarget, kHwhmRel) &&
                    asym <= kEqualLimit && ms < kRuntimeLimitMs;
    std::printf("[%s] 1. superradiant lorentzian: hwhm_a=%.4f hwhm_b=%.4f (target %.2f +-%.0f%%), "
                "max|a-b|/peak=%.4f (limit %.2f), 4001-point run %.1f ms (limit %.0f)\n",
                ok ? "PASS" : "FAIL", ha, hb, kHwhmTarget, kHwhmRel * 100.0, asym, kEqualLimit,
                ms, kRuntimeLimitMs);
    return ok;
}

// 2. Two-atom quadrature couplings: exchange-split doublet in one direction,
//    single top in the other, and the adiabatic closed forms track the full
//    model.
bool check_dipole_doublet() {
    const double kPosTarget = 2.0 * 2500.0 / 500.5;  // 9.99
    constexpr double kPosRel = 0.03;
    constexpr double kDipLimit = 0.01;  // of the fiber_b peak
    constexpr double kSupLimit = 0.03;  // of each channel's peak

    const RunSpec rs = preset("fig3-lower");
    const Generator gen = build_generator(rs.config);
    const auto om = rs.grid->values();
    auto [fa, fb] = fiber_spectra(rs.config, gen, rs.make_initial(), *rs.grid);

    const auto pair = dominant_pair(om, fa);
    const bool two = pair.size() == 2;
    const double lo = two ? pair[0].omega : 0.0;
    const double hi = two ? pair[1].omega : 0.0;
    const bool pos_ok = two && within(-lo, kPosTarget, kPosRel) && within(hi, kPosTarget, kPosRel);

    const double dip = 1.0 - value_near(*rs.grid, fb, 0.0) / fb.maxCoeff();
    auto [ra, rb] = reduced_fiber_spectra(rs.config, 1, *rs.grid);
    const double sup_a = sup_diff_rel_peak(fa, ra);
    const double sup_b = sup_diff_rel_peak(fb, rb);

    const bool ok = pos_ok && dip <= kDipLimit && sup_a <= kSupLimit && sup_b <= kSupLimit;
    std::printf("[%s] 2. dipole-dipole doublet: fiber_a peaks at %.4f / %.4f (target +-%.2f "
                "+-%.0f%%), fiber_b center dip %.4f of peak (limit %.2f), closed-form sup "
                "a=%.4f b=%.4f (limit %.2f)\n",
                ok ? "PASS" : "FAIL", lo, hi, kPosTarget, kPosRel * 100.0, dip, kDipLimit, sup_a,
                sup_b, kSupLimit);
    return ok;
}

// 3. Strong coupling: normal-mode peaks at +-sqrt(2) g, and with quadrature
//    couplings each forward peak splits by kappa while the backward ones do
//    not split at all.
bool check_vacuum_rabi() {
    const double kRabi = kSqrt2 * 50.0;  // 70.71
    constexpr double kPosWindow = 0.5;   // absolute
    constexpr double kSplitTarget = 5.1;
    constexpr double kSplitRel = 0.20;

    const RunSpec up = preset("fig2-upper");
    const Generator gu = build_generator(up.config);
    const auto om = up.grid->values();
    auto [ua, ub] = fiber_spectra(up.config, gu, up.make_initial(), *up.grid);
    const auto pair = dominant_pair(om, ua);
    const bool two = pair.size() == 2;
    const double lo = two ? pair[0].omega : 0.0;
    const double hi = two ? pair[1].omega : 0.0;
    const bool pos_ok =
        two && std::abs(-lo - kRabi) <= kPosWindow && std::abs(hi - kRabi) <= kPosWindow;

    const RunSpec low = preset("fig2-lower");
    const Generator gl = build_generator(low.config);
    auto [la, lb] = fiber_spectra(low.config, gl, low.make_initial(), *low.grid);
    const auto right = peaks_in_window(om, la, kRabi - 10.0, kRabi + 10.0);
    const auto left = peaks_in_window(om, la, -kRabi - 10.0, -kRabi + 10.0);
    const double split_r = right.size() == 2 ? right[1].omega - right[0].omega : 0.0;
    const double split_l = left.size() == 2 ? left[1].omega - left[0].omega : 0.0;
    const bool split_ok = right.size() == 2 && left.size() == 2 &&
                          within(split_r, kSplitTarget, kSplitRel) &&
                          within(split_l, kSplitTarget, kSplitRel);
    const bool single_b = peaks_in_window(om, lb, kRabi - 10.0, kRabi + 10.0).size() == 1 &&
                          peaks_in_window(om, lb, -kRabi - 10.0, -kRabi + 10.0).size() == 1;

    const bool ok = pos_ok && split_ok && single_b;
    std::printf("[%s] 3. vacuum rabi structure: equal-g peaks at %.4f / %.4f (target +-%.2f "
                "+-%.1f), quadrature fiber_a splitting %.4f / %.4f (target %.1f +-%.0f%%), "
                "fiber_b rims single-peaked: %s\n",
                ok ? "PASS" : "FAIL", lo, hi, kRabi, kPosWindow, split_l, split_r, kSplitTarget,
                kSplitRel * 100.0, single_b ? "yes" : "no");
    return ok;
}

// 4. The fiber-dark state: both collective outputs vanish identically, and
//    the slow eigenvalue it overlaps decays at gamma_A (kappa/2g)^2. The
//    rate formula ignores intrinsic scatter, which acts on the state's
//    dominant photonic weight, so the same check with kappa_in removed is
//    printed alongside as a diagnostic.
bool check_dark_state() {
    constexpr double kJLimit = 1e-14;
    constexpr double kFactor = 2.0;

    const RunSpec rs = preset("fig2-upper");
    const Generator gen = build_generator(rs.config);
    const OneQuantumState dark = fiber_dark_state(rs.config);
    const OutputCoefficients out = output_coefficients(rs.config);
    complexd ja = 0.0, jb = 0.0;
    for (int k = 0; k < rs.config.n_sites(); ++k) {
        ja += out.c_a(k) * dark(3 * k + 1);
        jb += out.c_b(k) * dark(3 * k + 2);
    }

    const double kappa = rs.config.sites[0].kappa_total();
    const double g = std::abs(rs.config.sites[0].g);
    const double target = rs.config.gamma_A * std::pow(kappa / (2.0 * g), 2);  // 0.013

    const auto slow_rate = [](const ChainConfig& config) {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(build_generator(config).matrix);
        const OneQuantumState state = fiber_dark_state(config);
        int best = 0;
        double best_overlap = -1.0;
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double overlap = std::abs(es.eigenvectors().col(i).adjoint().dot(state));
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = i;
            }
        }
        return std::make_pair(std::abs(es.eigenvalues()(best).real()), best_overlap);
    };
    const auto [rate, overlap] = slow_rate(rs.config);
    ChainConfig lossless = rs.config;
    for (auto& site : lossless.sites) site.kappa_in = 0.0;
    const double rate0 = slow_rate(lossless).first;

    const bool j_ok = std::abs(ja) <= kJLimit && std::abs(jb) <= kJLimit;
    const bool rate_ok = rate >= target / kFactor && rate <= target * kFactor;
    const bool ok = j_ok && rate_ok;
    std::printf("[%s] 4. fiber-dark state: |J_a|=%.2e |J_b|=%.2e (limit %.0e), nearest "
                "eigenvalue |Re|=%.6f (target %.6f within factor %.0f, overlap %.4f; "
                "with kappa_in=0: %.6f)\n",
                ok ? "PASS" : "FAIL", std::abs(ja), std::abs(jb), kJLimit, rate, target, kFactor,
                overlap, rate0);
    return ok;
}

// 5. Two-site adiabatic eigenvalues: the generator's spectrum equals the
//    closed-form pair over a sweep of coupling phase and detuning, and at
//    delta = kappa the pair shares its real part and splits by 2g^2/kappa
//    in the imaginary direction.
bool check_two_site_eigenvalues() {
    constexpr double kTol = 1e-12;
    const double kappa = 500.0;
    const double g = 50.0;

    double worst = 0.0;
    for (int it = 0; it < 10; ++it) {
        const double theta = std::numbers::pi * it / 10.0;
        for (int id = 0; id < 10; ++id) {
            const double delta = -kappa + 2.0 * kappa * id / 9.0;
            ChainConfig c;
            c.gamma_A = 5.0;
            c.sites.resize(2);
            for (auto& s : c.sites) {
                s.kappa_ex = kappa;
                s.delta = delta;
            }
            c.sites[0].g = g;
            c.sites[1].g = std::polar(g, theta);
            c.links.resize(1);

            const auto red = build_reduced_generator(c);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(red.matrix);
            const auto form = two_site_closed_form(c.sites[0].g, c.sites[1].g, kappa, delta, 5.0);
            const complexd e0 = es.eigenvalues()(0), e1 = es.eigenvalues()(1);
            const double pairing =
                std::min(std::max(std::abs(e0 - form.lambda_plus), std::abs(e1 - form.lambda_minus)),
                         std::max(std::abs(e1 - form.lambda_plus), std::abs(e0 - form.lambda_minus)));
            const double scale = std::max(1.0, std::abs(form.lambda_plus));
            worst = std::max(worst, pairing / scale);
        }
    }

    const auto detuned = two_site_closed_form(g, g, kappa, kappa, 5.0);
    const double re_gap = std::abs(detuned.lambda_plus.real() - detuned.lambda_minus.real());
    const double im_split = std::abs(detuned.lambda_plus.imag() - detuned.lambda_minus.imag());
    const double split_target = 2.0 * g * g / kappa;

    const bool ok = worst <= kTol && re_gap <= kTol * std::abs(detuned.lambda_plus.real()) &&
                    std::abs(im_split - split_target) <= kTol * split_target;
    std::printf("[%s] 5. two-site eigenvalue formulas: worst sweep mismatch %.2e (limit %.0e, "
                "100 points), delta=kappa real-part gap %.2e, imaginary splitting %.12f "
                "(target %.2f)\n",
                ok ? "PASS" : "FAIL", worst, kTol, re_gap, im_split, split_target);
    return ok;
}

// 6. Three atoms: equal couplings give one broad collective line; the
//    alternating pattern with the middle atom excited gives the exchange
//    doublet; with an end atom excited all three exchange eigenfrequencies
//    carry weight in at least one emission channel.
bool check_three_atom_structure() {
    const double kHwhmTarget = 5.0 / 2.0 + 3.0 * (2.0 * 2500.0 / 500.5);  // 32.47
    constexpr double kHwhmRel = 0.10;
    const double kDoublet = 2.0 * kSqrt2 * 2500.0 / 500.5;  // 14.13
    constexpr double kDoubletRel = 0.03;
    constexpr double kWeightMin = 0.25;  // of that channel's own maximum

    const RunSpec f4 = preset("fig4-atom1");
    const Generator g4 = build_generator(f4.config);
    const auto om = f4.grid->values();
    auto [ba, bb] = fiber_spectra(f4.config, g4, f4.make_initial(), *f4.grid);
    const double ha = hwhm(om, ba);
    const double hb = hwhm(om, bb);
    const bool broad_ok = within(ha, kHwhmTarget, kHwhmRel) && within(hb, kHwhmTarget, kHwhmRel);

    const RunSpec f5m = preset("fig5-atom2");
    const Generator g5m = build_generator(f5m.config);
    auto [ma, mb] = fiber_spectra(f5m.config, g5m, f5m.make_initial(), *f5m.grid);
    const auto pair = dominant_pair(om, ma);
    const bool two = pair.size() == 2;
    const bool doublet_ok = two && within(-pair[0].omega, kDoublet, kDoubletRel) &&
                            within(pair[1].omega, kDoublet, kDoubletRel);

    const RunSpec f5e = preset("fig5-atom1");
    const Generator g5e = build_generator(f5e.config);
    const SpectrumSet set = emission_spectra(f5e.config, g5e, f5e.make_initial(), *f5e.grid);
    std::vector<Eigen::VectorXd> channels{set.fiber_a, set.fiber_b};
    for (int c = 0; c < set.side_atoms.cols(); ++c) channels.push_back(set.side_atoms.col(c));
    for (int c = 0; c < set.scatter_sites.cols(); ++c) channels.push_back(set.scatter_sites.col(c));
    bool weight_ok = true;
    double weights[3];
    int slot = 0;
    for (double w : {-kDoublet, 0.0, kDoublet}) {
        double best = 0.0;
        for (const Eigen::VectorXd& channel : channels)
            best = std::max(best, value_near(*f5e.grid, channel, w) / channel.maxCoeff());
        weights[slot++] = best;
        weight_ok = weight_ok && best >= kWeightMin;
    }

    const bool ok = broad_ok && doublet_ok && weight_ok;
    std::printf("[%s] 6. three-atom structure: collective hwhm a=%.4f b=%.4f (target %.2f "
                "+-%.0f%%), middle-atom doublet at %.4f / %.4f (target +-%.4f +-%.0f%%), "
                "end-atom weight at {-e,0,+e} = %.2f/%.2f/%.2f of channel max (min %.2f)\n",
                ok ? "PASS" : "FAIL", ha, hb, kHwhmTarget, kHwhmRel * 100.0,
                two ? pair[0].omega : 0.0, two ? pair[1].omega : 0.0, kDoublet,
                kDoubletRel * 100.0, weights[0], weights[1], weights[2], kWeightMin);
    return ok;
}

// 7. Bookkeeping closes: the undecayed norm plus the accumulated emission
//    stays at 1 along every preset trajectory, and the spectral integrals
//    over the audit grid account for the whole excitation.
bool check_conservation() {
    constexpr double kInvariantLimit = 1e-8;
    constexpr double kDefectLimit = 1e-3;

    double worst_invariant = 0.0;
    double worst_defect = 0.0;
    std::string worst_name;
    for (const std::string& name : preset_names()) {
        const RunSpec rs = preset(name);
        const Generator gen = build_generator(rs.config);
        const OneQuantumState x0 = rs.make_initial();
        const Trajectory traj = evolve(gen, rs.config, x0, EvolveOptions{});
        for (int i = 0; i < traj.n_nodes(); ++i) {
            const auto k = static_cast<size_t>(i);
            worst_invariant = std::max(
                worst_invariant, std::abs(traj.states[k].squaredNorm() + traj.p_spon[k] - 1.0));
        }
        const FrequencyGrid wide = audit_grid(rs.config, gen);
        const AuditReport report =
            normalization_audit(emission_spectra(rs.config, gen, x0, wide), traj);
        if (report.total_defect > worst_defect) {
            worst_defect = report.total_defect;
            worst_name = name;
        }
    }

    const bool ok = worst_invariant <= kInvariantLimit && worst_defect <= kDefectLimit;
    std::printf("[%s] 7. conservation and completeness: worst |norm2+p_spon-1|=%.2e (limit "
                "%.0e), worst spectral-total defect %.2e on %s (limit %.0e)\n",
                ok ? "PASS" : "FAIL", worst_invariant, kInvariantLimit, worst_defect,
                worst_name.c_str(), kDefectLimit);
    return ok;
}

// 8. The resolvent route and the time-domain transform route are independent
//    solvers; their spectra must coincide wherever the spectrum is resolved.
bool check_cross_method() {
    constexpr double kRelLimit = 1e-6;
    constexpr double kFloor = 1e-9;

    double worst = 0.0;
    std::string worst_name;
    for (const std::string& name : preset_names()) {
        const RunSpec rs = preset(name);
        const Generator gen = build_generator(rs.config);
        const OneQuantumState x0 = rs.make_initial();
        EvolveOptions opt;
        opt.rel_tol = 1e-12;
        opt.abs_tol = 1e-14;
        const Trajectory traj = evolve(gen, rs.config, x0, opt);
        const FrequencyGrid grid{rs.grid->min, rs.grid->max, 101};
        const SpectrumSet direct = emission_spectra(rs.config, gen, x0, grid);
        const SpectrumSet quad = spectra_from_trajectory(rs.config, traj, grid, 1e-20);
        double local = 0.0;
        const auto update = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
            for (int i = 0; i < u.size(); ++i)
                if (u(i) > kFloor) local = std::max(local, std::abs(u(i) - v(i)) / u(i));
        };
        update(direct.fiber_a, quad.fiber_a);
        update(direct.fiber_b, quad.fiber_b);
        for (int k = 0; k < direct.side_atoms.cols(); ++k) {
            update(direct.side_atoms.col(k), quad.side_atoms.col(k));
            update(direct.scatter_sites.col(k), quad.scatter_sites.col(k));
        }
        if (local > worst) {
            worst = local;
            worst_name = name;
        }
    }

    const bool ok = worst <= kRelLimit;
    std::printf("[%s] 8. cross-method agreement: worst relative difference %.2e on %s (limit "
                "%.0e where spectrum > %.0e)\n",
                ok ? "PASS" : "FAIL", worst, worst_name.c_str(), kRelLimit, kFloor);
    return ok;
}

// 9. The adiabatic model converges to the full one as kappa/g grows, for
//    both the equal and the quadrature coupling patterns.
bool check_adiabatic_convergence() {
    bool ok = true;
    double table[2][4];
    for (int quad = 0; quad < 2; ++quad) {
        double previous = 0.0;
        for (int j = 0; j < 4; ++j) {
            const double ratio = (const double[]){5.0, 10.0, 30.0, 100.0}[j];
            ChainConfig c;
            c.gamma_A = 5.0;
            c.sites.resize(2);
            for (auto& s : c.sites) s.kappa_ex = ratio * 50.0;
            c.sites[0].g = 50.0;
            c.sites[1].g = quad ? complexd(0.0, 50.0) : complexd(50.0, 0.0);
            c.links.resize(1);
            const double w = 4.0 * (2.5 + 4.0 * 2500.0 / (ratio * 50.0));
            const FrequencyGrid grid{-w, w, 4001};
            const Generator gen = build_generator(c);
            auto [fa, fb] = fiber_spectra(c, gen, initial_state(c, 1), grid);
            auto [ra, rb] = reduced_fiber_spectra(c, 1, grid);
            const double d = std::max(sup_diff_rel_peak(fa, ra), sup_diff_rel_peak(fb, rb));
            table[quad][j] = d;
            if (j > 0 && d >= previous) ok = false;
            previous = d;
        }
    }
    std::printf("[%s] 9. adiabatic convergence: equal %.4f > %.4f > %.4f > %.4f, quadrature "
                "%.4f > %.4f > %.4f > %.4f over kappa/g in {5,10,30,100}\n",
                ok ? "PASS" : "FAIL", table[0][0], table[0][1], table[0][2], table[0][3],
                table[1][0], table[1][1], table[1][2], table[1][3]);
    return ok;
}

// 10. Reflecting the chain exchanges the two fiber directions exactly, for
//     arbitrary (seeded random) parameter sets.
bool check_mirror_symmetry() {
    constexpr double kSupLimit = 1e-10;

    std::mt19937 rng(2026);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int n = 1; n <= 5; ++n) {
        ChainConfig c;
        c.gamma_A = 1.3;
        c.sites.resize(n);
        for (auto& s : c.sites) {
            s.delta = 6.0 * uni(rng) - 3.0;
            s.kappa_ex = 0.5 + 29.5 * uni(rng);
            s.kappa_in = 0.4 * uni(rng);
            s.g = complexd(16.0 * uni(rng) - 8.0, 16.0 * uni(rng) - 8.0);
            s.h = complexd(uni(rng) - 0.5, uni(rng) - 0.5);
        }
        c.links.resize(static_cast<size_t>(n - 1));
        for (auto& l : c.links) {
            l.phi_a = 2.0 * std::numbers::pi * (uni(rng) - 0.5);
            l.phi_b = 2.0 * std::numbers::pi * (uni(rng) - 0.5);
        }
        const ChainConfig m = mirrored(c);
        const Generator gc = build_generator(c);
        const Generator gm = build_generator(m);
        const FrequencyGrid grid{-40.0, 40.0, 801};
        for (int k = 1; k <= n; ++k) {
            auto [fa, fb] = fiber_spectra(c, gc, initial_state(c, k), grid);
            auto [ma, mb] = fiber_spectra(m, gm, initial_state(m, n + 1 - k), grid);
            worst = std::max(worst, sup_diff(fa, mb));
            worst = std::max(worst, sup_diff(fb, ma));
        }
    }

    const bool ok = worst <= kSupLimit;
    std::printf("[%s] 10. mirror symmetry: worst pointwise |T_a(chain,k) - "
                "T_b(mirror,N+1-k)|=%.2e (limit %.0e, N up to 5)\n",
                ok ? "PASS" : "FAIL", worst, kSupLimit);
    return ok;
}

using CheckFn = bool (*)();
constexpr CheckFn kChecks[] = {
    check_superradiant_lorentzian, check_dipole_doublet,   check_vacuum_rabi,
    check_dark_state,              check_two_site_eigenvalues, check_three_atom_structure,
    check_conservation,            check_cross_method,     check_adiabatic_convergence,
    check_mirror_symmetry,
};

}  // namespace

int main(int argc, char** argv) {
    int selected = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            selected = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion <1..10>]\n", argv[0]);
            return 2;
        }
    }
    if (selected < 0 || selected > 10) {
        std::fprintf(stderr, "criterion index out of range: %d\n", selected);
        return 2;
    }

    try {
        if (selected > 0) return kChecks[selected - 1]() ? 0 : 1;
        int failures = 0;
        for (const CheckFn check : kChecks) failures += check() ? 0 : 1;
        std::printf("%d of 10 checks passed\n", 10 - failures);
        return failures;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
