#include "cascade/evolve.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

// Dormand-Prince 4(5) tableau. The fifth-order weights are the last stage row
// (first-same-as-last), the e[] row is b5 - b4 and feeds the error estimate.
constexpr int kStages = 7;
constexpr double kC[kStages] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr double kA[kStages][kStages - 1] = {
    {},
    {1.0 / 5.0},
    {3.0 / 40.0, 9.0 / 40.0},
    {44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0},
    {19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0},
    {9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0},
    {35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0},
};
constexpr double kE[kStages] = {71.0 / 57600.0,      0.0,          -71.0 / 16695.0, 71.0 / 1920.0,
                                -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0};

// Emission rates in channel order fiber_a, fiber_b, side_atom_1..N,
// scatter_site_1..N. Their sum equals -d/dt ||x||^2 identically, which is
// what makes the conservation invariant a pure integrator-error probe.
void channel_rates(const ChainConfig& config, const OutputCoefficients& out,
                   const Eigen::VectorXcd& x, Eigen::VectorXd& r) {
    const int n = config.n_sites();
    complexd ja = 0.0, jb = 0.0;
    for (int k = 0; k < n; ++k) {
        ja += out.c_a(k) * x(3 * k + 1);
        jb += out.c_b(k) * x(3 * k + 2);
    }
    r(0) = std::norm(ja);
    r(1) = std::norm(jb);
    for (int k = 0; k < n; ++k) {
        r(2 + k) = config.gamma_A * std::norm(x(3 * k));
        r(2 + n + k) = 2.0 * config.sites[k].kappa_in *
                       (std::norm(x(3 * k + 1)) + std::norm(x(3 * k + 2)));
    }
}

double auto_t_end(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    double slowest = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        const double re = std::abs(ev(i).real());
        if (re <= 1e-12 * scale) continue;
        if (slowest == 0.0 || re < slowest) slowest = re;
    }
    if (slowest == 0.0)
        throw ConfigError("evolve: generator has no decaying mode, supply t_end explicitly");
    return 40.0 / slowest;
}

}  // namespace

Trajectory evolve(const Generator& generator, const ChainConfig& config,
                  const OneQuantumState& state0, const EvolveOptions& options) {
    config.validate();
    const int n = config.n_sites();
    const int dim = 3 * n;
    if (generator.matrix.rows() != dim || generator.matrix.cols() != dim)
        throw ConfigError("evolve: generator size does not match config");
    if (state0.size() != dim) throw ConfigError("evolve: initial state size does not match config");
    if (state0.squaredNorm() > 1.0 + 1e-12)
        throw ConfigError("evolve: initial state norm exceeds 1");
    if (options.rel_tol <= 0.0 || options.abs_tol <= 0.0)
        throw ConfigError("evolve: tolerances must be positive");

    const double t_end = options.t_end > 0.0 ? options.t_end : auto_t_end(generator.matrix);
    const int n_channels = 2 + 2 * n;
    const Eigen::MatrixXcd& m = generator.matrix;
    const OutputCoefficients out = output_coefficients(config);

    Trajectory traj;
    traj.generator = m;
    traj.n_atoms = n;
    traj.rel_tol_used = options.rel_tol;
    traj.abs_tol_used = options.abs_tol;
    traj.channel_names = {"fiber_a", "fiber_b"};
    for (int k = 1; k <= n; ++k) traj.channel_names.push_back("side_atom_" + std::to_string(k));
    for (int k = 1; k <= n; ++k) traj.channel_names.push_back("scatter_site_" + std::to_string(k));

    // Controlled state: amplitudes plus the channel accumulators, so the
    // emission integrals see the same error control as the dynamics.
    Eigen::VectorXcd x = state0;
    Eigen::VectorXd ch = Eigen::VectorXd::Zero(n_channels);

    std::vector<Eigen::VectorXcd> kx(kStages, Eigen::VectorXcd(dim));
    std::vector<Eigen::VectorXd> kc(kStages, Eigen::VectorXd(n_channels));
    Eigen::VectorXcd x_stage(dim), x_new(dim), x_err(dim);
    Eigen::VectorXd c_stage(n_channels), c_new(n_channels), c_err(n_channels);

    std::vector<std::pair<double, double>> store_rows;  // (t, p_spon) alongside states
    std::vector<Eigen::VectorXd> store_ch;
    auto store = [&](double t) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        store_ch.push_back(ch);
    };
    store(0.0);

    double t = 0.0;
    kx[0] = m * x;
    channel_rates(config, out, x, kc[0]);
    double h = std::min(t_end, 1e-2 / (1.0 + kx[0].cwiseAbs().maxCoeff()));
    bool first_same_as_last = false;
    double last_stored = 0.0;
    std::uint64_t steps = 0;

    while (t < t_end) {
        if (++steps > options.max_steps)
            throw NumericalError("evolve: step budget exhausted at t = " + std::to_string(t));
        if (h < 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t)) {
            std::ostringstream msg;
            msg << "evolve: step size underflow at t = " << t << " (stiffness failure)";
            throw NumericalError(msg.str());
        }
        bool final_step = false;
        if (t + h >= t_end) {
            h = t_end - t;
            final_step = true;
        }

        if (!first_same_as_last) {
            kx[0] = m * x;
            channel_rates(config, out, x, kc[0]);
        }
        for (int s = 1; s < kStages; ++s) {
            x_stage = x;
            c_stage = ch;
            for (int j = 0; j < s; ++j) {
                if (kA[s][j] == 0.0) continue;
                x_stage += (h * kA[s][j]) * kx[j];
                c_stage += (h * kA[s][j]) * kc[j];
            }
            kx[s] = m * x_stage;
            channel_rates(config, out, x_stage, kc[s]);
        }
        // Stage 7 is evaluated at the fifth-order result, so x_new equals the
        // last stage state and k7 can seed the next step.
        x_new = x_stage;
        c_new = c_stage;
        x_err.setZero();
        c_err.setZero();
        for (int s = 0; s < kStages; ++s) {
            if (kE[s] == 0.0) continue;
            x_err += (h * kE[s]) * kx[s];
            c_err += (h * kE[s]) * kc[s];
        }

        double acc = 0.0;
        for (int i = 0; i < dim; ++i) {
            const double scale_re = options.abs_tol +
                                    options.rel_tol * std::max(std::abs(x(i).real()),
                                                               std::abs(x_new(i).real()));
            const double scale_im = options.abs_tol +
                                    options.rel_tol * std::max(std::abs(x(i).imag()),
                                                               std::abs(x_new(i).imag()));
            const double er = x_err(i).real() / scale_re;
            const double ei = x_err(i).imag() / scale_im;
            acc += er * er + ei * ei;
        }
        for (int i = 0; i < n_channels; ++i) {
            const double scale =
                options.abs_tol + options.rel_tol * std::max(std::abs(ch(i)), std::abs(c_new(i)));
            const double e = c_err(i) / scale;
            acc += e * e;
        }
        const double err = std::sqrt(acc / (2 * dim + n_channels));

        if (err <= 1.0) {
            // Land on t_end exactly; t + (t_end - t) can round 1 ulp short.
            t = final_step ? t_end : t + h;
            x.swap(x_new);
            ch.swap(c_new);
            kx[0].swap(kx[kStages - 1]);
            kc[0].swap(kc[kStages - 1]);
            first_same_as_last = true;
            if (!x.allFinite())
                throw NumericalError("evolve: non-finite state at t = " + std::to_string(t));

            const double norm2 = x.squaredNorm();
            const bool tail_done = options.tail_threshold > 0.0 && norm2 < options.tail_threshold;
            if (final_step || tail_done || options.store_dt <= 0.0 ||
                t - last_stored >= options.store_dt * (1.0 - 1e-9)) {
                store(t);
                last_stored = t;
            }
            if (tail_done) break;
        } else {
            first_same_as_last = false;
        }
        const double factor = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
    }

    const int nodes = static_cast<int>(traj.times.size());
    traj.p_spon.resize(nodes);
    traj.channel_fractions.resize(nodes, n_channels);
    for (int i = 0; i < nodes; ++i) {
        traj.channel_fractions.row(i) = store_ch[i].transpose();
        traj.p_spon[i] = store_ch[i].sum();
    }
    return traj;
}

Trajectory evolve(const Generator& generator, const ChainConfig& config,
                  const OneQuantumState& state0, double t_end, double tolerance) {
    if (t_end <= 0.0) throw ConfigError("evolve: t_end must be positive");
    if (tolerance <= 0.0) throw ConfigError("evolve: tolerance must be positive");
    EvolveOptions options;
    options.rel_tol = tolerance;
    options.abs_tol = tolerance * 1e-2;
    options.t_end = t_end;
    return evolve(generator, config, state0, options);
}

namespace {

// Moments m_k(w, d) = integral over [0, d] of e^{iws} s^k ds for k = 0..3.
// The upward recurrence divides by iw, so below |wd| = 0.5 it loses digits
// and the series m_k = d^{k+1} sum_j (iwd)^j / (j! (k+j+1)) is used instead.
void oscillatory_moments(double w, double d, complexd m[4]) {
    const double wd = w * d;
    if (std::abs(wd) >= 0.5) {
        const complexd iw(0.0, w);
        const complexd e = std::polar(1.0, wd);
        m[0] = (e - 1.0) / iw;
        double dk = 1.0;
        for (int k = 1; k < 4; ++k) {
            dk *= d;
            m[k] = (dk * e - static_cast<double>(k) * m[k - 1]) / iw;
        }
        return;
    }
    const complexd z(0.0, wd);
    for (int k = 0; k < 4; ++k) {
        complexd term = 1.0 / static_cast<double>(k + 1);
        complexd sum = term;
        complexd zj = 1.0;
        double fact = 1.0;
        for (int j = 1; j <= 16; ++j) {
            zj *= z;
            fact *= j;
            term = zj / (fact * static_cast<double>(k + j + 1));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        }
        m[k] = sum;
        for (int p = 0; p <= k; ++p) m[k] *= d;
    }
}

complexd least_damped_eigenvalue(const Eigen::MatrixXcd& m) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    int best = 0;
    for (int i = 1; i < ev.size(); ++i)
        if (ev(i).real() > ev(best).real()) best = i;
    return ev(best);
}

}  // namespace

Eigen::MatrixXcd numerical_laplace(const Trajectory& trajectory, std::span<const double> omega,
                                   double tail_threshold) {
    const int nodes = trajectory.n_nodes();
    if (nodes < 2) throw ConfigError("numerical_laplace: trajectory needs at least two nodes");
    const int dim = static_cast<int>(trajectory.states[0].size());
    const double final_norm2 = trajectory.final_norm2();
    if (!(final_norm2 < tail_threshold)) {
        std::ostringstream msg;
        msg << "numerical_laplace: final ||x||^2 = " << final_norm2
            << " has not decayed below tail_threshold = " << tail_threshold;
        throw NumericalError(msg.str());
    }
    for (double w : omega)
        if (!std::isfinite(w)) throw ConfigError("numerical_laplace: non-finite frequency");

    const Eigen::MatrixXcd& m = trajectory.generator;
    const complexd lam = least_damped_eigenvalue(m);
    const int nw = static_cast<int>(omega.size());
    Eigen::MatrixXcd result = Eigen::MatrixXcd::Zero(dim, nw);
    if (nw == 0) return result;

    // Cubic Hermite pieces use exact node derivatives M x, so the store
    // stride, not the integrator step, sets the quadrature error. Chunking
    // keeps the omega-independent coefficients in a small reusable buffer.
    constexpr int kChunk = 4096;
    Eigen::MatrixXcd deriv(dim, kChunk + 1);
    Eigen::MatrixXcd coeff(dim, 4 * kChunk);
    std::vector<double> t0s(kChunk), deltas(kChunk);

    for (int begin = 0; begin + 1 < nodes; begin += kChunk) {
        const int count = std::min(kChunk, nodes - 1 - begin);
        for (int i = 0; i <= count; ++i) deriv.col(i) = m * trajectory.states[begin + i];
        for (int i = 0; i < count; ++i) {
            const double t0 = trajectory.times[begin + i];
            const double d = trajectory.times[begin + i + 1] - t0;
            t0s[i] = t0;
            deltas[i] = d;
            const auto& x0 = trajectory.states[begin + i];
            const auto& x1 = trajectory.states[begin + i + 1];
            coeff.col(4 * i + 0) = x0;
            coeff.col(4 * i + 1) = deriv.col(i);
            coeff.col(4 * i + 2) =
                ((3.0 / d) * (x1 - x0) - 2.0 * deriv.col(i) - deriv.col(i + 1)) / d;
            coeff.col(4 * i + 3) =
                ((2.0 / d) * (x0 - x1) + deriv.col(i) + deriv.col(i + 1)) / (d * d);
        }
        for (int j = 0; j < nw; ++j) {
            const double w = omega[j];
            complexd moments[4];
            for (int i = 0; i < count; ++i) {
                oscillatory_moments(w, deltas[i], moments);
                const complexd phase = std::polar(1.0, w * t0s[i]);
                result.col(j) += phase * (coeff.col(4 * i + 0) * moments[0] +
                                          coeff.col(4 * i + 1) * moments[1] +
                                          coeff.col(4 * i + 2) * moments[2] +
                                          coeff.col(4 * i + 3) * moments[3]);
            }
        }
    }

    // Past the last node the state is taken as x(T) e^{lam (t-T)} with lam the
    // least-damped eigenvalue; tail_threshold bounds what this approximation
    // can contribute.
    const double t_final = trajectory.times.back();
    const Eigen::VectorXcd& x_final = trajectory.states.back();
    const double lam_scale = std::max(1.0, std::abs(lam));
    for (int j = 0; j < nw; ++j) {
        const complexd denom = lam + complexd(0.0, omega[j]);
        if (std::abs(denom) < 1e-12 * lam_scale) {
            std::ostringstream msg;
            msg << "numerical_laplace: tail completion is singular at omega = " << omega[j]
                << " (least-damped eigenvalue " << lam.real() << (lam.imag() < 0 ? " - " : " + ")
                << std::abs(lam.imag()) << "i lies on the axis there)";
            throw NumericalError(msg.str());
        }
        result.col(j) -= (std::polar(1.0, omega[j] * t_final) / denom) * x_final;
    }
    return result;
}

Eigen::VectorXcd numerical_laplace(const Trajectory& trajectory, double omega,
                                   double tail_threshold) {
    const double w[1] = {omega};
    return numerical_laplace(trajectory, std::span<const double>(w, 1), tail_threshold);
}

}  // namespace cascade
