#include "cascade/reduced.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr complexd kI(0.0, 1.0);

// The adiabatic elimination behind this module assumes one shared kappa,
// delta across sites, no backscattering and no link phases.
void require_homogeneous(const ChainConfig& config, const char* who) {
    config.validate();
    const SiteParams& first = config.sites[0];
    const double scale = std::max({1.0, first.kappa_total(), std::abs(first.delta)});
    for (const SiteParams& site : config.sites) {
        if (std::abs(site.kappa_ex - first.kappa_ex) > 1e-12 * scale ||
            std::abs(site.kappa_in - first.kappa_in) > 1e-12 * scale)
            throw ConfigError(std::string(who) + ": kappa must be homogeneous across sites");
        if (std::abs(site.delta - first.delta) > 1e-12 * scale)
            throw ConfigError(std::string(who) + ": delta must be homogeneous across sites");
        if (std::abs(site.h) > 0.0)
            throw ConfigError(std::string(who) + ": requires h = 0 on every site");
    }
    for (const LinkPhases& link : config.links)
        if (link.phi_a != 0.0 || link.phi_b != 0.0)
            throw ConfigError(std::string(who) + ": requires zero link phases");
    if (first.kappa_total() <= 0.0)
        throw ConfigError(std::string(who) + ": requires kappa_ex + kappa_in > 0");
}

bool close(complexd a, complexd b, double scale) { return std::abs(a - b) <= 1e-12 * scale; }

}  // namespace

ReducedGenerator build_reduced_generator(const ChainConfig& config) {
    require_homogeneous(config, "build_reduced_generator");
    const int n = config.n_sites();
    const double kappa = config.sites[0].kappa_total();
    const double delta = config.sites[0].delta;
    const complexd d(kappa, delta);
    const complexd eta = -std::conj(d) / d;

    ReducedGenerator red;
    red.matrix.resize(n, n);
    for (int k = 0; k < n; ++k)
        red.matrix(k, k) = -config.gamma_A / 2.0 - 2.0 * std::norm(config.sites[k].g) / d;
    for (int m = 0; m < n; ++m)
        for (int M = m + 1; M < n; ++M) {
            complexd entry =
                2.0 * config.sites[M].g * std::conj(config.sites[m].g) * kappa / (d * d);
            for (int p = 0; p < M - m - 1; ++p) entry *= eta;
            red.matrix(m, M) = entry;
            red.matrix(M, m) = entry;
        }
    return red;
}

TwoSiteClosedForm two_site_closed_form(complexd g1, complexd g2, double kappa, double delta,
                                       double gamma_A) {
    if (!std::isfinite(kappa) || !std::isfinite(delta) || !std::isfinite(gamma_A) ||
        !std::isfinite(std::abs(g1)) || !std::isfinite(std::abs(g2)))
        throw ConfigError("two_site_closed_form: parameters must be finite");
    const complexd d(kappa, delta);
    if (std::abs(d) == 0.0) throw ConfigError("two_site_closed_form: kappa + i delta must be nonzero");

    const complexd lambda_bar = -gamma_A / 2.0 - (std::norm(g1) + std::norm(g2)) / d;
    const complexd a = (std::norm(g1) - std::norm(g2)) / d;
    const complexd b = 2.0 * std::conj(g1) * g2 * kappa / (d * d);
    const complexd p = 2.0 * std::sqrt(a * a + b * b);

    TwoSiteClosedForm form;
    form.p = p;
    form.lambda_plus = lambda_bar + p / 2.0;
    form.lambda_minus = lambda_bar - p / 2.0;
    // Cancellation in a^2 + b^2 floors |p| near sqrt(eps); anything under this
    // is treated as the confluent double root.
    form.degenerate = std::abs(p) <= 1e-7 * 2.0 * (std::abs(a) + std::abs(b));

    if (form.degenerate) {
        form.xi1 = [lambda_bar, a](double t) { return std::exp(lambda_bar * t) * (1.0 - a * t); };
        form.xi2 = [lambda_bar, b](double t) { return std::exp(lambda_bar * t) * (b * t); };
        return form;
    }
    // Assembled from e^{lambda_pm t} directly; the cosh/sinh form overflows at
    // large t before the decaying product is formed.
    const complexd lp = form.lambda_plus;
    const complexd lm = form.lambda_minus;
    const complexd ca = 2.0 * a / p;
    const complexd cb = 2.0 * b / p;
    form.xi1 = [lp, lm, ca](double t) {
        return ((1.0 - ca) * std::exp(lp * t) + (1.0 + ca) * std::exp(lm * t)) / 2.0;
    };
    form.xi2 = [lp, lm, cb](double t) {
        return cb * (std::exp(lp * t) - std::exp(lm * t)) / 2.0;
    };
    return form;
}

namespace {

// Triangular solves of the full model's field rows with time derivatives set
// to zero. Reading the blocks out of the built generator keeps this tied to
// the model equations rather than a reimplementation of them.
std::pair<Eigen::VectorXcd, Eigen::VectorXcd> reconstruct_fields(const Eigen::MatrixXcd& m,
                                                                 const Eigen::VectorXcd& xi) {
    const int n = static_cast<int>(xi.size());
    Eigen::VectorXcd alpha(n), beta(n);
    for (int k = 0; k < n; ++k) {
        complexd acc = m(3 * k + 1, 3 * k) * xi(k);
        for (int j = 0; j < k; ++j) acc += m(3 * k + 1, 3 * j + 1) * alpha(j);
        alpha(k) = -acc / m(3 * k + 1, 3 * k + 1);
    }
    for (int k = n - 1; k >= 0; --k) {
        complexd acc = m(3 * k + 2, 3 * k) * xi(k);
        for (int j = k + 1; j < n; ++j) acc += m(3 * k + 2, 3 * j + 2) * beta(j);
        beta(k) = -acc / m(3 * k + 2, 3 * k + 2);
    }
    return {std::move(alpha), std::move(beta)};
}

void require_reconstructible(const ChainConfig& config) {
    config.validate();
    for (const SiteParams& site : config.sites) {
        if (std::abs(site.h) > 0.0)
            throw ConfigError(
                "adiabatic_field_reconstruction: h != 0 couples the two directions and breaks "
                "the triangular structure");
        if (site.kappa_total() <= 0.0)
            throw ConfigError("adiabatic_field_reconstruction: requires kappa_ex + kappa_in > 0");
    }
}

}  // namespace

std::pair<Eigen::VectorXcd, Eigen::VectorXcd> adiabatic_field_reconstruction(
    const ChainConfig& config, const Eigen::VectorXcd& xi) {
    require_reconstructible(config);
    if (xi.size() != config.n_sites())
        throw ConfigError("adiabatic_field_reconstruction: xi must have one amplitude per site");
    return reconstruct_fields(build_generator(config).matrix, xi);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> reduced_fiber_spectra(const ChainConfig& config,
                                                                  int excited_atom,
                                                                  const FrequencyGrid& grid) {
    require_homogeneous(config, "reduced_fiber_spectra");
    grid.validate();
    const int n = config.n_sites();
    if (excited_atom < 1 || excited_atom > n)
        throw ConfigError("reduced_fiber_spectra: excited atom index out of range");

    const Eigen::MatrixXcd red = build_reduced_generator(config).matrix;
    const Eigen::MatrixXcd full = build_generator(config).matrix;
    const OutputCoefficients out = output_coefficients(config);
    Eigen::VectorXcd xi0 = Eigen::VectorXcd::Zero(n);
    xi0(excited_atom - 1) = 1.0;

    Eigen::VectorXd fiber_a(grid.points), fiber_b(grid.points);
    Eigen::MatrixXcd shifted(n, n);
    for (int j = 0; j < grid.points; ++j) {
        shifted = -red;
        shifted.diagonal().array() += complexd(0.0, -grid.value(j));
        const Eigen::VectorXcd xi = shifted.partialPivLu().solve(xi0);
        const auto [alpha, beta] = reconstruct_fields(full, xi);
        complexd ja = 0.0, jb = 0.0;
        for (int k = 0; k < n; ++k) {
            ja += out.c_a(k) * alpha(k);
            jb += out.c_b(k) * beta(k);
        }
        fiber_a(j) = std::norm(ja) / (2.0 * kPi);
        fiber_b(j) = std::norm(jb) / (2.0 * kPi);
    }
    return {std::move(fiber_a), std::move(fiber_b)};
}

SpecialCaseReport special_case_structure(const ChainConfig& config) {
    require_homogeneous(config, "special_case_structure");
    const double kappa = config.sites[0].kappa_total();
    const double scale = std::max(1.0, std::abs(config.sites[0].g));
    if (std::abs(config.sites[0].delta) > 1e-12 * std::max(1.0, kappa))
        throw ConfigError("special_case_structure: requires delta = 0");

    const int n = config.n_sites();
    const Eigen::MatrixXcd x = build_reduced_generator(config).matrix;
    SpecialCaseReport report;
    report.residual_rate = config.gamma_A / 2.0;
    report.phase_note = "phi_a = phi_b = 0, h = 0, delta = 0 (eta = -1)";

    const complexd g1 = config.sites[0].g;
    bool all_equal_real = std::abs(g1.imag()) <= 1e-12 * scale && g1 != 0.0;
    for (int k = 1; k < n && all_equal_real; ++k)
        all_equal_real = close(config.sites[k].g, g1, scale);

    bool alternating = n >= 2 && std::abs(g1.imag()) <= 1e-12 * scale && g1 != 0.0;
    for (int k = 0; k < n && alternating; ++k) {
        const complexd want = (k % 2 == 0) ? g1 : kI * g1;
        alternating = close(config.sites[k].g, want, scale);
    }

    const double g = std::abs(g1);
    const double rate = 2.0 * g * g / kappa;
    const Eigen::MatrixXcd unit = Eigen::MatrixXcd::Identity(n, n);

    if (all_equal_real) {
        Eigen::VectorXcd jump(n);
        for (int k = 0; k < n; ++k) jump(k) = (k % 2 == 0) ? 1.0 : -1.0;
        const Eigen::MatrixXcd reassembled =
            -config.gamma_A / 2.0 * unit - rate * (jump * jump.transpose());
        if ((reassembled - x).cwiseAbs().maxCoeff() <= 1e-13 * x.cwiseAbs().maxCoeff()) {
            report.pattern = CouplingPattern::superradiant_equal;
            report.collective_rate = rate;
            report.jump_all = jump;
            report.dipole_hamiltonian = Eigen::MatrixXcd::Zero(n, n);
            report.reassembled = reassembled;
            return report;
        }
    } else if (alternating) {
        Eigen::VectorXcd jump_odd = Eigen::VectorXcd::Zero(n);
        Eigen::VectorXcd jump_even = Eigen::VectorXcd::Zero(n);
        for (int k = 0; k < n; ++k) ((k % 2 == 0) ? jump_odd : jump_even)(k) = 1.0;
        // Sites an odd distance apart couple coherently; strength carries the
        // (-1)^k sign of the smaller 1-based index.
        Eigen::MatrixXcd dipole = Eigen::MatrixXcd::Zero(n, n);
        for (int k = 0; k < n; ++k)
            for (int l = k + 1; l < n; ++l)
                if ((l - k) % 2 == 1) {
                    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
                    dipole(k, l) = sign * rate;
                    dipole(l, k) = sign * rate;
                }
        const Eigen::MatrixXcd reassembled =
            -config.gamma_A / 2.0 * unit -
            rate * (jump_odd * jump_odd.transpose() + jump_even * jump_even.transpose()) -
            kI * dipole;
        if ((reassembled - x).cwiseAbs().maxCoeff() <= 1e-13 * x.cwiseAbs().maxCoeff()) {
            report.pattern = CouplingPattern::alternating_quadrature;
            report.collective_rate = rate;
            report.jump_odd = jump_odd;
            report.jump_even = jump_even;
            report.dipole_hamiltonian = dipole;
            report.reassembled = reassembled;
            return report;
        }
    }

    // No structural pattern: split the generator into its dissipative (Re)
    // and Hamiltonian (Im) tables, which reassemble exactly by construction.
    Eigen::MatrixXcd decay(n, n);
    Eigen::MatrixXcd dipole = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const complexd entry =
                (k == l) ? x(k, k) + complexd(config.gamma_A / 2.0, 0.0) : x(k, l);
            decay(k, l) = -2.0 * entry.real();
            if (k != l) dipole(k, l) = -entry.imag();
        }
    report.pattern = CouplingPattern::general;
    report.dipole_hamiltonian = dipole;
    report.reassembled = -config.gamma_A / 2.0 * unit - 0.5 * decay - kI * dipole;
    return report;
}

N3Eigenstructure n3_eigenstructure(const ChainConfig& config) {
    require_homogeneous(config, "n3_eigenstructure");
    if (config.n_sites() != 3) throw ConfigError("n3_eigenstructure: requires N = 3");
    const double kappa = config.sites[0].kappa_total();
    if (std::abs(config.sites[0].delta) > 1e-12 * std::max(1.0, kappa))
        throw ConfigError("n3_eigenstructure: requires delta = 0");
    const complexd g1 = config.sites[0].g;
    const double scale = std::max(1.0, std::abs(g1));
    if (std::abs(g1.imag()) > 1e-12 * scale || g1 == 0.0 ||
        !close(config.sites[1].g, kI * g1, scale) || !close(config.sites[2].g, g1, scale))
        throw ConfigError("n3_eigenstructure: requires g_1 = -i g_2 = g_3 real and nonzero");

    const double g = g1.real();
    const double energy = 2.0 * kSqrt2 * g * g / kappa;

    N3Eigenstructure s;
    s.e_plus.resize(3);
    s.e_minus.resize(3);
    s.e_zero.resize(3);
    s.e_plus << 0.5, -kSqrt2 / 2.0, -0.5;
    s.e_minus << 0.5, kSqrt2 / 2.0, -0.5;
    s.e_zero << 1.0 / kSqrt2, 0.0, 1.0 / kSqrt2;
    s.energy_plus = energy;
    s.energy_minus = -energy;
    s.energy_zero = 0.0;
    s.atom1_coeffs << 0.5, 0.5, 1.0 / kSqrt2;
    s.atom2_coeffs << -1.0 / kSqrt2, 1.0 / kSqrt2, 0.0;
    return s;
}

}  // namespace cascade
