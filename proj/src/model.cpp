#include "cascade/model.hpp"

#include <cmath>
#include <string>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

constexpr complexd kI{0.0, 1.0};

// Accumulated propagation phase from site j to site k (0-based, j < k),
// direction a; and from site k to site j (k < j), direction b.
double phase_a(const ChainConfig& c, int j, int k) {
    double phi = 0.0;
    for (int m = j; m < k; ++m) phi += c.links[m].phi_a;
    return phi;
}

double phase_b(const ChainConfig& c, int k, int j) {
    double phi = 0.0;
    for (int m = k; m < j; ++m) phi += c.links[m].phi_b;
    return phi;
}

}  // namespace

Generator build_generator(const ChainConfig& config) {
    config.validate();
    const int n = config.n_sites();
    Generator gen;
    gen.matrix = Eigen::MatrixXcd::Zero(3 * n, 3 * n);
    Eigen::MatrixXcd& m = gen.matrix;

    for (int k = 0; k < n; ++k) {
        const SiteParams& s = config.sites[k];
        const int xi = 3 * k, al = 3 * k + 1, be = 3 * k + 2;
        const complexd mode_decay = -(s.kappa_total() + kI * s.delta);

        m(xi, xi) = -0.5 * config.gamma_A;
        m(xi, al) = -kI * s.g;
        m(xi, be) = -kI * std::conj(s.g);

        m(al, al) = mode_decay;
        m(al, xi) = -kI * std::conj(s.g);
        m(al, be) = -kI * s.h;

        m(be, be) = mode_decay;
        m(be, xi) = -kI * s.g;
        m(be, al) = -kI * std::conj(s.h);

        // Downstream feeds only: direction a runs left to right, direction b
        // right to left. The feed amplitude is set by the fiber couplings of
        // both end sites; the segment phases accumulate along the path.
        for (int j = 0; j < k; ++j) {
            const double amp = 2.0 * std::sqrt(config.sites[j].kappa_ex * s.kappa_ex);
            m(al, 3 * j + 1) = -amp * std::exp(kI * phase_a(config, j, k));
        }
        for (int j = k + 1; j < n; ++j) {
            const double amp = 2.0 * std::sqrt(config.sites[j].kappa_ex * s.kappa_ex);
            m(be, 3 * j + 2) = -amp * std::exp(kI * phase_b(config, k, j));
        }
    }
    return gen;
}

OutputCoefficients output_coefficients(const ChainConfig& config) {
    config.validate();
    const int n = config.n_sites();
    OutputCoefficients out;
    out.c_a.resize(n);
    out.c_b.resize(n);
    for (int k = 0; k < n; ++k) {
        const double root = std::sqrt(2.0 * config.sites[k].kappa_ex);
        out.c_a(k) = root * std::exp(-kI * phase_a(config, 0, k));
        out.c_b(k) = root * std::exp(-kI * phase_b(config, k, n - 1));
    }
    return out;
}

OneQuantumState initial_state(const ChainConfig& config, int excited_atom) {
    config.validate();
    if (excited_atom < 1 || excited_atom > config.n_sites())
        throw ConfigError("initial_state: atom index " + std::to_string(excited_atom) +
                          " outside 1.." + std::to_string(config.n_sites()));
    OneQuantumState x = OneQuantumState::Zero(3 * config.n_sites());
    x(3 * (excited_atom - 1)) = 1.0;
    return x;
}

double total_decay_rate(const ChainConfig& config, const OneQuantumState& x) {
    const int n = config.n_sites();
    if (x.size() != 3 * n)
        throw ConfigError("total_decay_rate: state length does not match config");
    const OutputCoefficients coeff = output_coefficients(config);
    double rate = 0.0;
    complexd field_a = 0.0, field_b = 0.0;
    for (int k = 0; k < n; ++k) {
        rate += config.gamma_A * std::norm(x(3 * k));
        rate += 2.0 * config.sites[k].kappa_in *
                (std::norm(x(3 * k + 1)) + std::norm(x(3 * k + 2)));
        field_a += coeff.c_a(k) * x(3 * k + 1);
        field_b += coeff.c_b(k) * x(3 * k + 2);
    }
    return rate + std::norm(field_a) + std::norm(field_b);
}

}  // namespace cascade
