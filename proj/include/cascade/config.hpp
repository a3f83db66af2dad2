#pragma once

#include <complex>
#include <vector>

namespace cascade {

using complexd = std::complex<double>;

/// Physical parameters of one resonator site and its atom.
/// All rates and couplings share one angular-frequency unit; time is its
/// reciprocal. Everything is expressed in the frame rotating at the atomic
/// frequency, so only the cavity-atom detuning appears.
struct SiteParams {
    double delta = 0.0;      ///< cavity-atom detuning
    double kappa_ex = 0.0;   ///< fiber out-coupling rate, >= 0
    double kappa_in = 0.0;   ///< intrinsic (non-fiber) loss rate, >= 0
    complexd g{0.0, 0.0};    ///< atom to traveling-mode coupling
    complexd h{0.0, 0.0};    ///< backscattering between the two mode directions

    double kappa_total() const { return kappa_ex + kappa_in; }
};

/// Propagation phases of the fiber segment between two adjacent sites,
/// one per direction.
struct LinkPhases {
    double phi_a = 0.0;  ///< accumulated phase, left-to-right direction
    double phi_b = 0.0;  ///< accumulated phase, right-to-left direction
};

/// Complete description of an N-site chain. sites.size() >= 1 and
/// links.size() == sites.size() - 1.
struct ChainConfig {
    double gamma_A = 0.0;  ///< free-space atomic decay rate, >= 0
    std::vector<SiteParams> sites;
    std::vector<LinkPhases> links;

    int n_sites() const { return static_cast<int>(sites.size()); }

    /// Throws ConfigError on rate signs, length mismatches, or non-finite
    /// entries. Every public operation validates its config on entry.
    void validate() const;
};

/// Spatially reversed chain: site order flipped, every g and h conjugated,
/// phi_a and phi_b exchanged with the link order reversed. Emission into
/// direction a of the original equals emission into direction b of the
/// mirror (with the excited atom index reflected).
ChainConfig mirrored(const ChainConfig& config);

}  // namespace cascade
