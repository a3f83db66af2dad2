#include "cascade/analysis.hpp"

#include <cmath>

#include "cascade/errors.hpp"

namespace cascade {

namespace {

void check_lengths(std::span<const double> x, const Eigen::VectorXd& y, const char* who) {
    if (x.size() != static_cast<size_t>(y.size()))
        throw ConfigError(std::string(who) + ": abscissa and values differ in length");
    if (x.size() < 3) throw ConfigError(std::string(who) + ": needs at least 3 samples");
}

}  // namespace

std::vector<Peak> local_maxima(std::span<const double> omega, const Eigen::VectorXd& values,
                               double min_ratio) {
    check_lengths(omega, values, "local_maxima");
    const double top = values.maxCoeff();
    std::vector<Peak> peaks;
    for (Eigen::Index i = 1; i + 1 < values.size(); ++i) {
        // Plateaus count once, at their left edge.
        if (!(values[i] > values[i - 1] && values[i] >= values[i + 1])) continue;
        if (values[i] < min_ratio * top) continue;
        const double ym = values[i - 1], y0 = values[i], yp = values[i + 1];
        Peak peak{omega[i], y0};
        // Vertex of the parabola through the three samples, in local
        // coordinates t with t = 0 at the center sample. Spacing may be
        // uneven, so fit y0 + b t + a t^2 through (-hl, ym) and (hr, yp).
        const double hl = omega[i] - omega[i - 1];
        const double hr = omega[i + 1] - omega[i];
        const double denom = hl * hr * (hl + hr);
        const double a = ((ym - y0) * hr + (yp - y0) * hl) / denom;
        const double b = ((yp - y0) * hl * hl - (ym - y0) * hr * hr) / denom;
        if (a < 0.0) {
            const double shift = -b / (2.0 * a);
            if (std::isfinite(shift) && shift >= -hl && shift <= hr) {
                peak.omega = omega[i] + shift;
                peak.value = y0 - b * b / (4.0 * a);
            }
        }
        peaks.push_back(peak);
    }
    return peaks;
}

Peak global_maximum(std::span<const double> omega, const Eigen::VectorXd& values) {
    check_lengths(omega, values, "global_maximum");
    Eigen::Index at = 0;
    values.maxCoeff(&at);
    // The grid argmax is the fallback when the maximum sits on the boundary,
    // where no parabolic refinement is possible.
    Peak best{omega[at], values[at]};
    for (const Peak& p : local_maxima(omega, values, 0.0))
        if (p.value > best.value) best = p;
    return best;
}

double hwhm(std::span<const double> omega, const Eigen::VectorXd& values) {
    check_lengths(omega, values, "hwhm");
    Eigen::Index at = 0;
    const double top = values.maxCoeff(&at);
    const double half = top / 2.0;

    auto cross = [&](Eigen::Index from, Eigen::Index step) -> double {
        for (Eigen::Index i = from; i + step >= 0 && i + step < values.size(); i += step) {
            const double y0 = values[i], y1 = values[i + step];
            if (y1 <= half && y0 > half) {
                const double frac = (y0 - half) / (y0 - y1);
                return omega[i] + frac * (omega[i + step] - omega[i]);
            }
        }
        throw NumericalError("hwhm: half level not crossed inside the grid");
    };
    const double left = cross(at, -1);
    const double right = cross(at, +1);
    return (right - left) / 2.0;
}

double sup_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ConfigError("sup_diff: length mismatch");
    if (a.size() == 0) return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

double sup_diff_rel_peak(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ConfigError("sup_diff_rel_peak: length mismatch");
    if (a.size() == 0) return 0.0;
    const double peak = std::max(a.maxCoeff(), b.maxCoeff());
    if (peak <= 0.0) throw NumericalError("sup_diff_rel_peak: no positive peak to normalize by");
    return sup_diff(a, b) / peak;
}

double trapezoid(std::span<const double> x, const Eigen::VectorXd& y) {
    if (x.size() != static_cast<size_t>(y.size())) throw ConfigError("trapezoid: length mismatch");
    double sum = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) sum += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return sum;
}

}  // namespace cascade
