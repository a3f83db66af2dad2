#include "cascade/regimes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr complexd kI(0.0, 1.0);

void require_two_sites(const OneQuantumState& state) {
    if (state.size() != 6)
        throw ConfigError("delocalized/dressed transforms are defined for N = 2 only");
}

bool close(complexd a, complexd b, double scale) { return std::abs(a - b) <= 1e-12 * scale; }

// Shared symmetry gate for the strong-coupling analysis: two identical sites
// on resonance, no backscattering, no link phases. The coupling pattern is
// checked by the caller.
void require_symmetric_pair(const ChainConfig& config, const char* who) {
    config.validate();
    if (config.n_sites() != 2) throw ConfigError(std::string(who) + ": requires N = 2");
    const SiteParams& s1 = config.sites[0];
    const SiteParams& s2 = config.sites[1];
    const double scale = std::max({1.0, s1.kappa_total(), std::abs(s1.g)});
    if (std::abs(s1.kappa_ex - s2.kappa_ex) > 1e-12 * scale ||
        std::abs(s1.kappa_in - s2.kappa_in) > 1e-12 * scale)
        throw ConfigError(std::string(who) + ": sites must have identical kappa");
    if (std::abs(s1.delta) > 1e-12 * scale || std::abs(s2.delta) > 1e-12 * scale)
        throw ConfigError(std::string(who) + ": requires delta = 0");
    if (std::abs(s1.h) > 0.0 || std::abs(s2.h) > 0.0)
        throw ConfigError(std::string(who) + ": requires h = 0");
    for (const LinkPhases& link : config.links)
        if (link.phi_a != 0.0 || link.phi_b != 0.0)
            throw ConfigError(std::string(who) + ": requires zero link phases");
}

}  // namespace

DelocalizedAmplitudes delocalized_transform(const OneQuantumState& state) {
    require_two_sites(state);
    const complexd xi1 = state(0), a1 = state(1), b1 = state(2);
    const complexd xi2 = state(3), a2 = state(4), b2 = state(5);
    DelocalizedAmplitudes d;
    d.x_plus = (xi1 + xi2) / kSqrt2;
    d.x_minus = (xi1 - xi2) / kSqrt2;
    d.y_plus = ((a1 + b1) + (a2 + b2)) / 2.0;
    d.y_minus = ((a1 + b1) - (a2 + b2)) / 2.0;
    d.z_plus = ((a1 - b1) - (a2 - b2)) / 2.0;
    d.z_minus = ((a1 - b1) + (a2 - b2)) / 2.0;
    return d;
}

OneQuantumState delocalized_inverse(const DelocalizedAmplitudes& amps) {
    OneQuantumState state(6);
    state(0) = (amps.x_plus + amps.x_minus) / kSqrt2;
    state(3) = (amps.x_plus - amps.x_minus) / kSqrt2;
    const complexd s1 = amps.y_plus + amps.y_minus;   // alpha_1 + beta_1
    const complexd s2 = amps.y_plus - amps.y_minus;   // alpha_2 + beta_2
    const complexd d1 = amps.z_plus + amps.z_minus;   // alpha_1 - beta_1
    const complexd d2 = amps.z_minus - amps.z_plus;   // alpha_2 - beta_2
    state(1) = (s1 + d1) / 2.0;
    state(2) = (s1 - d1) / 2.0;
    state(4) = (s2 + d2) / 2.0;
    state(5) = (s2 - d2) / 2.0;
    return state;
}

DressedAmplitudes dressed_transform(const OneQuantumState& state) {
    require_two_sites(state);
    const complexd xi1 = state(0), a1 = state(1), b1 = state(2);
    const complexd xi2 = state(3), a2 = state(4), b2 = state(5);
    DressedAmplitudes d;
    d.x_plus = xi1 / kSqrt2 + (a1 + b1) / 2.0;
    d.x_minus = xi1 / kSqrt2 - (a1 + b1) / 2.0;
    d.y_plus = xi2 / kSqrt2 - kI * (a2 - b2) / 2.0;
    d.y_minus = xi2 / kSqrt2 + kI * (a2 - b2) / 2.0;
    d.v = (a1 - b1) / kSqrt2;
    d.w = (a2 + b2) / kSqrt2;
    return d;
}

OneQuantumState dressed_inverse(const DressedAmplitudes& amps) {
    OneQuantumState state(6);
    state(0) = (amps.x_plus + amps.x_minus) / kSqrt2;
    state(3) = (amps.y_plus + amps.y_minus) / kSqrt2;
    const complexd s1 = amps.x_plus - amps.x_minus;            // alpha_1 + beta_1
    const complexd d1 = kSqrt2 * amps.v;                       // alpha_1 - beta_1
    const complexd s2 = kSqrt2 * amps.w;                       // alpha_2 + beta_2
    const complexd d2 = kI * (amps.y_plus - amps.y_minus);     // alpha_2 - beta_2
    state(1) = (s1 + d1) / 2.0;
    state(2) = (s1 - d1) / 2.0;
    state(4) = (s2 + d2) / 2.0;
    state(5) = (s2 - d2) / 2.0;
    return state;
}

OneQuantumState fiber_dark_state(const ChainConfig& config) {
    require_symmetric_pair(config, "fiber_dark_state");
    const complexd g1 = config.sites[0].g;
    const complexd g2 = config.sites[1].g;
    const double scale = std::max(1.0, std::abs(g1));
    if (std::abs(g1.imag()) > 1e-12 * scale || !close(g1, g2, scale))
        throw ConfigError("fiber_dark_state: requires g_1 = g_2 real");
    if (g1 == 0.0) throw ConfigError("fiber_dark_state: requires g != 0");

    const double g = g1.real();
    const double kappa = config.sites[0].kappa_total();
    const double norm = std::sqrt(2.0 * kappa * kappa + 4.0 * g * g);

    // The field part is antisymmetric between the sites and between the two
    // directions, so both collective fiber outputs vanish identically; only
    // free space and intrinsic scatter remain open.
    OneQuantumState state(6);
    state(0) = -kI * kappa / norm;  // xi_1
    state(1) = -g / norm;           // alpha_1
    state(2) = g / norm;            // beta_1
    state(3) = -kI * kappa / norm;  // xi_2
    state(4) = g / norm;            // alpha_2
    state(5) = -g / norm;           // beta_2
    return state;
}

namespace {

// Exact 3x3 blocks of the equal-g case in the delocalized variables. Valid
// for any kappa_in; at kappa_in = 0 eliminating Z~_- reproduces the one-pole
// closed form T_a/b = (kappa/pi)|Y~_+ -+ kappa Y~_-/(2 kappa - i omega)|^2.
void equal_g_blocks(double gamma_A, double g, double kappa_total, double kappa_ex,
                    Eigen::Matrix3cd& plus, Eigen::Matrix3cd& minus) {
    const complexd cg(0.0, -kSqrt2 * g);  // -i sqrt(2) g
    plus << complexd(-gamma_A / 2.0), cg, 0.0,
            cg, complexd(-(kappa_total + kappa_ex)), complexd(-kappa_ex),
            0.0, complexd(kappa_ex), complexd(-(kappa_total - kappa_ex));
    minus << complexd(-gamma_A / 2.0), cg, 0.0,
             cg, complexd(-(kappa_total - kappa_ex)), complexd(kappa_ex),
             0.0, complexd(-kappa_ex), complexd(-(kappa_total + kappa_ex));
}

}  // namespace

std::pair<Eigen::VectorXd, Eigen::VectorXd> strong_coupling_spectrum_oracle(
    const ChainConfig& config, const FrequencyGrid& grid, OracleVariant variant) {
    require_symmetric_pair(config, "strong_coupling_spectrum_oracle");
    grid.validate();
    const SiteParams& site = config.sites[0];
    if (site.kappa_in > 0.02 * site.kappa_ex)
        throw ConfigError(
            "strong_coupling_spectrum_oracle: kappa_in > 0.02 kappa_ex is outside the "
            "closed-form expressions' validity");

    const complexd g1 = config.sites[0].g;
    const complexd g2 = config.sites[1].g;
    const double scale = std::max(1.0, std::abs(g1));
    if (std::abs(g1.imag()) > 1e-12 * scale)
        throw ConfigError("strong_coupling_spectrum_oracle: g_1 must be real");
    const double g = g1.real();
    const double kappa_ex = site.kappa_ex;
    const double kappa_total = site.kappa_total();

    Eigen::VectorXd fiber_a(grid.points), fiber_b(grid.points);

    if (variant == OracleVariant::equal_g) {
        if (!close(g2, g1, scale))
            throw ConfigError("strong_coupling_spectrum_oracle: equal_g variant needs g_1 = g_2");
        Eigen::Matrix3cd bp, bm;
        equal_g_blocks(config.gamma_A, g, kappa_total, kappa_ex, bp, bm);
        const Eigen::Vector3cd x0(complexd(1.0 / kSqrt2), 0.0, 0.0);
        for (int j = 0; j < grid.points; ++j) {
            const complexd shift(0.0, -grid.value(j));
            Eigen::Matrix3cd ap = -bp;
            Eigen::Matrix3cd am = -bm;
            for (int i = 0; i < 3; ++i) {
                ap(i, i) += shift;
                am(i, i) += shift;
            }
            const Eigen::Vector3cd vp = ap.partialPivLu().solve(x0);
            const Eigen::Vector3cd vm = am.partialPivLu().solve(x0);
            const complexd y_plus = vp(1);
            const complexd z_minus = vm(2);
            fiber_a(j) = kappa_ex / kPi * std::norm(y_plus + z_minus);
            fiber_b(j) = kappa_ex / kPi * std::norm(y_plus - z_minus);
        }
        return {std::move(fiber_a), std::move(fiber_b)};
    }

    // quadrature_g: rotating-wave blocks (counter-rotating terms at 2 sqrt(2) g
    // dropped), hence an approximation with peak-position error ~ kappa^2/g.
    if (!close(g1, kI * g2, scale))
        throw ConfigError("strong_coupling_spectrum_oracle: quadrature_g variant needs g_1 = i g_2");
    const double kappa = kappa_total;
    const complexd d_plus = complexd(config.gamma_A / 2.0 + kappa, 0.0) / 2.0 + kI * kSqrt2 * g;
    const complexd d_minus = complexd(config.gamma_A / 2.0 + kappa, 0.0) / 2.0 - kI * kSqrt2 * g;
    for (int j = 0; j < grid.points; ++j) {
        const complexd iw(0.0, grid.value(j));
        // 2x2 solve of (-i w - B) v = (1/sqrt(2), 0), B = -d I + i(kappa/2) sx.
        auto block = [&](complexd d) {
            const complexd a = d - iw;
            const complexd b = complexd(0.0, -kappa / 2.0);
            const complexd det = a * a - b * b;
            const complexd x = a / det / kSqrt2;
            const complexd y = -b / det / kSqrt2;
            return std::pair<complexd, complexd>(x, y);
        };
        const auto [xp, yp] = block(d_plus);
        const auto [xm, ym] = block(d_minus);
        // V and W stay dark for the atom-1 initial state.
        fiber_a(j) = kappa_ex / (4.0 * kPi) * std::norm((xp + kI * yp) - (xm + kI * ym));
        fiber_b(j) = kappa_ex / (4.0 * kPi) * std::norm((xp - kI * yp) - (xm - kI * ym));
    }
    return {std::move(fiber_a), std::move(fiber_b)};
}

std::vector<DressedAmplitudes> rwa_evolve(const ChainConfig& config,
                                          std::span<const double> t_grid) {
    require_symmetric_pair(config, "rwa_evolve");
    const complexd g1 = config.sites[0].g;
    const complexd g2 = config.sites[1].g;
    const double scale = std::max(1.0, std::abs(g1));
    if (std::abs(g1.imag()) > 1e-12 * scale || !close(g1, kI * g2, scale))
        throw ConfigError("rwa_evolve: requires g_1 = i g_2 with g_1 real");
    const double g = g1.real();
    const double kappa = config.sites[0].kappa_total();
    const complexd d_plus = complexd(config.gamma_A / 2.0 + kappa, 0.0) / 2.0 + kI * kSqrt2 * g;
    const complexd d_minus = complexd(config.gamma_A / 2.0 + kappa, 0.0) / 2.0 - kI * kSqrt2 * g;

    // exp(Bt) for B = -d I + i(kappa/2) sx is e^{-dt}[cos(kt/2) I + i sin(kt/2) sx];
    // the V/W block starts and stays at zero for the atom-1 initial state.
    std::vector<DressedAmplitudes> result;
    result.reserve(t_grid.size());
    for (double t : t_grid) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw ConfigError("rwa_evolve: times must be finite and nonnegative");
        const double c = std::cos(kappa * t / 2.0);
        const double s = std::sin(kappa * t / 2.0);
        DressedAmplitudes a;
        a.x_plus = std::exp(-d_plus * t) * c / kSqrt2;
        a.y_plus = std::exp(-d_plus * t) * kI * s / kSqrt2;
        a.x_minus = std::exp(-d_minus * t) * c / kSqrt2;
        a.y_minus = std::exp(-d_minus * t) * kI * s / kSqrt2;
        a.v = 0.0;
        a.w = 0.0;
        result.push_back(a);
    }
    return result;
}

}  // namespace cascade
