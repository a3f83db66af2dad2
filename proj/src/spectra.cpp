#include "cascade/spectra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/analysis.hpp"
#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;

// laplace_amplitudes requires a decaying flow. Modes with Re = 0 (dark states
// at gamma_A = 0) are tolerated here; the per-frequency pole check reports
// them only when a grid point actually lands on one.
void require_no_growth(const kernels::ResolventContext& ctx) {
    const double scale = std::max(1.0, ctx.eigenvalues.cwiseAbs().maxCoeff());
    const double worst = ctx.eigenvalues.real().maxCoeff();
    if (worst > 1e-9 * scale) {
        std::ostringstream msg;
        msg << "spectra: generator has a non-decaying mode (Re = " << worst
            << "), transforms do not exist";
        throw NumericalError(msg.str());
    }
}

void check_sizes(const Generator& generator, const OneQuantumState& state0) {
    if (generator.matrix.rows() != state0.size())
        throw ConfigError("spectra: state length does not match generator");
}

// Channel assembly shared by the resolvent and trajectory routes. Column j of
// amps is x~(omega_j) in [xi_k, alpha_k, beta_k] site-major order. The caller
// attaches grid metadata; only the amplitudes matter here.
SpectrumSet assemble_channels(const ChainConfig& config, const Eigen::MatrixXcd& amps) {
    const int n = config.n_sites();
    const int nw = static_cast<int>(amps.cols());
    const OutputCoefficients out = output_coefficients(config);

    SpectrumSet s;
    s.fiber_a.resize(nw);
    s.fiber_b.resize(nw);
    s.side_atoms.resize(nw, n);
    s.scatter_sites.resize(nw, n);
    for (int j = 0; j < nw; ++j) {
        complexd ja = 0.0, jb = 0.0;
        for (int k = 0; k < n; ++k) {
            ja += out.c_a(k) * amps(3 * k + 1, j);
            jb += out.c_b(k) * amps(3 * k + 2, j);
        }
        s.fiber_a(j) = std::norm(ja) / (2.0 * kPi);
        s.fiber_b(j) = std::norm(jb) / (2.0 * kPi);
        for (int k = 0; k < n; ++k) {
            s.side_atoms(j, k) = config.gamma_A * std::norm(amps(3 * k, j)) / (2.0 * kPi);
            s.scatter_sites(j, k) =
                config.sites[k].kappa_in *
                (std::norm(amps(3 * k + 1, j)) + std::norm(amps(3 * k + 2, j))) / kPi;
        }
    }
    return s;
}

}  // namespace

std::vector<double> FrequencyGrid::values() const {
    validate();
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) v[i] = value(i);
    return v;
}

void FrequencyGrid::validate() const {
    if (!(std::isfinite(min) && std::isfinite(max)))
        throw ConfigError("frequency grid bounds must be finite");
    if (!(min < max)) throw ConfigError("frequency grid needs min < max");
    if (points < 2) throw ConfigError("frequency grid needs at least 2 points");
}

Eigen::VectorXd SpectrumSet::total() const {
    Eigen::VectorXd t = fiber_a + fiber_b;
    t += side_atoms.rowwise().sum();
    t += scatter_sites.rowwise().sum();
    return t;
}

Eigen::MatrixXcd laplace_amplitudes(const Generator& generator, const OneQuantumState& state0,
                                    std::span<const double> omega,
                                    const kernels::SolveOptions& options) {
    check_sizes(generator, state0);
    kernels::ResolventContext ctx(generator.matrix);
    require_no_growth(ctx);
    return kernels::solve_resolvent(ctx, state0, omega, options);
}

Eigen::VectorXcd laplace_amplitudes(const Generator& generator, const OneQuantumState& state0,
                                    double omega) {
    const double w[1] = {omega};
    return laplace_amplitudes(generator, state0, std::span<const double>(w, 1));
}

SpectrumSet emission_spectra(const ChainConfig& config, const Generator& generator,
                             const OneQuantumState& state0, const FrequencyGrid& grid,
                             const kernels::SolveOptions& options) {
    config.validate();
    grid.validate();
    check_sizes(generator, state0);
    if (generator.matrix.rows() != 3 * config.n_sites())
        throw ConfigError("spectra: generator size does not match config");

    kernels::ResolventContext ctx(generator.matrix);
    require_no_growth(ctx);

    const int n = config.n_sites();
    const int nw = grid.points;
    const std::vector<double> omegas = grid.values();

    SpectrumSet s;
    s.grid = grid;
    s.omega = omegas;
    s.fiber_a.resize(nw);
    s.fiber_b.resize(nw);
    s.side_atoms.resize(nw, n);
    s.scatter_sites.resize(nw, n);

    // Audit grids run to millions of points; solving in slices bounds the
    // amplitude buffer without changing any per-frequency result.
    constexpr int kSlice = 1 << 16;
    for (int begin = 0; begin < nw; begin += kSlice) {
        const int count = std::min(kSlice, nw - begin);
        const Eigen::MatrixXcd amps = kernels::solve_resolvent(
            ctx, state0, std::span<const double>(omegas.data() + begin, count), options);
        const SpectrumSet part = assemble_channels(config, amps);
        s.fiber_a.segment(begin, count) = part.fiber_a;
        s.fiber_b.segment(begin, count) = part.fiber_b;
        s.side_atoms.middleRows(begin, count) = part.side_atoms;
        s.scatter_sites.middleRows(begin, count) = part.scatter_sites;
    }
    return s;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> fiber_spectra(const ChainConfig& config,
                                                          const Generator& generator,
                                                          const OneQuantumState& state0,
                                                          const FrequencyGrid& grid,
                                                          const kernels::SolveOptions& options) {
    SpectrumSet s = emission_spectra(config, generator, state0, grid, options);
    return {std::move(s.fiber_a), std::move(s.fiber_b)};
}

Eigen::VectorXd side_spectrum_atom(const ChainConfig& config, const Generator& generator,
                                   const OneQuantumState& state0, const FrequencyGrid& grid,
                                   int atom, const kernels::SolveOptions& options) {
    if (atom < 1 || atom > config.n_sites())
        throw ConfigError("side_spectrum_atom: atom index out of range");
    SpectrumSet s = emission_spectra(config, generator, state0, grid, options);
    return s.side_atoms.col(atom - 1);
}

Eigen::VectorXd side_spectrum_general(const ChainConfig& config, const Generator& generator,
                                      const OneQuantumState& state0, const FrequencyGrid& grid,
                                      const Eigen::VectorXcd& e_coeff,
                                      const Eigen::VectorXcd& a_coeff,
                                      const Eigen::VectorXcd& b_coeff,
                                      const kernels::SolveOptions& options) {
    config.validate();
    grid.validate();
    const int n = config.n_sites();
    if (e_coeff.size() != n || a_coeff.size() != n || b_coeff.size() != n)
        throw ConfigError("side_spectrum_general: coefficient vectors must have one entry per site");

    kernels::ResolventContext ctx(generator.matrix);
    require_no_growth(ctx);
    const std::vector<double> omegas = grid.values();
    Eigen::VectorXd result(grid.points);

    constexpr int kSlice = 1 << 16;
    for (int begin = 0; begin < grid.points; begin += kSlice) {
        const int count = std::min(kSlice, grid.points - begin);
        const Eigen::MatrixXcd amps = kernels::solve_resolvent(
            ctx, state0, std::span<const double>(omegas.data() + begin, count), options);
        for (int j = 0; j < count; ++j) {
            complexd sum = 0.0;
            for (int k = 0; k < n; ++k)
                sum += e_coeff(k) * amps(3 * k, j) + a_coeff(k) * amps(3 * k + 1, j) +
                       b_coeff(k) * amps(3 * k + 2, j);
            result(begin + j) = std::norm(sum);
        }
    }
    return result;
}

SpectrumSet spectra_from_trajectory(const ChainConfig& config, const Trajectory& trajectory,
                                    const FrequencyGrid& grid, double tail_threshold) {
    config.validate();
    grid.validate();
    if (static_cast<int>(trajectory.states[0].size()) != 3 * config.n_sites())
        throw ConfigError("spectra: trajectory dimension does not match config");
    const std::vector<double> omegas = grid.values();
    const Eigen::MatrixXcd amps = numerical_laplace(
        trajectory, std::span<const double>(omegas.data(), omegas.size()), tail_threshold);
    SpectrumSet s = assemble_channels(config, amps);
    s.grid = grid;
    s.omega = omegas;
    return s;
}

FrequencyGrid default_grid(const ChainConfig& config) {
    double w = 0.0;
    for (const SiteParams& site : config.sites) {
        const double g = std::abs(site.g);
        w = std::max(w, std::max(g, std::numbers::sqrt2 * g));
        const double kappa = site.kappa_total();
        if (kappa > 0.0) w = std::max(w, 4.0 * g * g / kappa);
    }
    // Zero coupling leaves only the bare atomic line.
    if (w == 0.0) w = std::max(config.gamma_A, 1.0);
    return FrequencyGrid{-3.0 * w, 3.0 * w, 4001};
}

FrequencyGrid audit_grid(const ChainConfig& config, const Generator& generator) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(generator.matrix,
                                                   /*computeEigenvectors=*/false);
    const Eigen::VectorXcd ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();

    // The atomic side channels decay only as 1/omega^2; mass gamma_A/(pi W)
    // sits outside +-W, and 2e-4 of it keeps the grand total inside 1e-3.
    double w = 3.0 * scale;
    if (config.gamma_A > 0.0) w = std::max(w, config.gamma_A / (kPi * 2e-4));
    if (w <= 0.0) w = 1.0;

    double min_decay = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
        const double re = std::abs(ev(i).real());
        if (re <= 1e-12 * std::max(1.0, scale)) continue;
        if (min_decay == 0.0 || re < min_decay) min_decay = re;
    }
    // A third of the narrowest half width per sample keeps the trapezoid
    // error exponentially small next to the tail truncation above.
    const double h = min_decay > 0.0 ? 0.35 * min_decay : w / 2000.0;
    const long long half = static_cast<long long>(std::ceil(w / h));
    if (half > 40'000'000)
        throw NumericalError("audit grid would exceed 80M points; linewidth ratio too extreme");
    return FrequencyGrid{-w, w, static_cast<int>(2 * half + 1)};
}

double AuditReport::worst_channel_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < spectral_integrals.size(); ++i)
        worst = std::max(worst, std::abs(spectral_integrals[i] - time_fractions[i]));
    return worst;
}

AuditReport normalization_audit(const SpectrumSet& spectra, const Trajectory& trajectory) {
    const int n = static_cast<int>(spectra.side_atoms.cols());
    if (trajectory.n_atoms != n)
        throw ConfigError("normalization_audit: spectrum set and trajectory disagree on N");

    AuditReport report;
    report.grid = spectra.grid;
    report.channel_names = trajectory.channel_names;
    const std::span<const double> x(spectra.omega.data(), spectra.omega.size());

    report.spectral_integrals.push_back(trapezoid(x, spectra.fiber_a));
    report.spectral_integrals.push_back(trapezoid(x, spectra.fiber_b));
    for (int k = 0; k < n; ++k)
        report.spectral_integrals.push_back(trapezoid(x, spectra.side_atoms.col(k)));
    for (int k = 0; k < n; ++k)
        report.spectral_integrals.push_back(trapezoid(x, spectra.scatter_sites.col(k)));

    const Eigen::VectorXd last = trajectory.channel_fractions.row(trajectory.n_nodes() - 1);
    for (int i = 0; i < last.size(); ++i) report.time_fractions.push_back(last(i));

    report.spectral_total = 0.0;
    for (double v : report.spectral_integrals) report.spectral_total += v;
    report.time_total = trajectory.p_spon.back();
    report.residual_norm2 = trajectory.final_norm2();
    report.total_defect = std::abs(report.spectral_total - 1.0);
    return report;
}

}  // namespace cascade
