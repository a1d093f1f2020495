#pragma once

#include <string>
#include <vector>

#include "phasespace/common.hpp"

namespace phasespace {

/// Quasiprobability representation choice. The ordering parameter s and the
/// reweighting exponent r used by estimators follow from it.
enum class Qpd { husimi, wigner, glauber };

inline int qpd_s(Qpd q) {
    switch (q) {
        case Qpd::husimi: return -1;
        case Qpd::wigner: return 0;
        case Qpd::glauber: return 1;
    }
    return 0;
}

/// Sampling exponent: Husimi densities are non-negative and are sampled
/// directly (r = 1); Wigner functions may go negative and are sampled from
/// |p| with sign reweighting applied twice (r = 2).
inline int qpd_r(Qpd q) { return q == Qpd::husimi ? 1 : 2; }

std::string qpd_name(Qpd q);
Qpd qpd_from_name(const std::string& name);

struct HopEdge {
    int a = 0;
    int b = 0;
    double coupling = 0.0;
};

/// Driven-dissipative bosonic lattice. All rates and energies are in units
/// of the reference loss rate; time is measured in inverse reference loss.
struct ModelSpec {
    int n_modes = 1;
    std::vector<double> detuning;     // rotating-frame detuning per mode
    std::vector<double> kerr;         // self-interaction strength U
    std::vector<double> drive1;       // coherent one-photon drive amplitude F
    std::vector<double> drive2;       // two-photon (parametric) drive G
    std::vector<double> loss1;        // single-photon loss rate
    std::vector<double> gain;         // single-photon gain (incoherent pump)
    std::vector<double> loss2;        // two-photon loss rate
    std::vector<HopEdge> hops;        // beam-splitter couplings

    /// Throws ConfigError on structural problems; returns human-readable
    /// warnings (e.g. attractive interaction) without failing.
    std::vector<std::string> validate() const;

    std::string content_hash() const;

    static ModelSpec single_mode(double delta, double u, double f, double g, double kappa_a,
                                 double kappa_b, double eta);
    /// Uniform chain/ring with nearest-neighbour coupling j; drive may be a
    /// single value (applied to every mode) or one value per mode.
    static ModelSpec chain(int m, double delta, double u, const std::vector<double>& f,
                           double j, double kappa_a, double kappa_b, bool periodic);
};

}  // namespace phasespace
