#pragma once

#include <string>

#include "phasespace/ansatz.hpp"
#include "phasespace/gridfield.hpp"

namespace phasespace {

struct CompareReport {
    double f_h = 1.0;       // overlap fidelity in [0, 1]
    double mse = 0.0;       // mean squared pointwise difference, normalized
    std::string grid_hash;  // hash of the shared grid geometry
    double abs_sum_a = 0.0;  // pre-normalization Riemann sums (diagnostics)
    double abs_sum_b = 0.0;

    std::string to_json() const;
};

/// Hash of axis geometry alone (not values); compare stamps this into its
/// reports so rows from different windows cannot be mixed up.
std::string grid_spec_hash(const GridSpec& spec);

/// Overlap fidelity sum_i sqrt(q_a q_b) where q are the absolute values
/// normalized to unit sum over the grid. 1 iff the normalized fields match;
/// 0 for disjoint supports. Symmetric and scale-invariant.
double hellinger_fidelity(const GridField& a, const GridField& b);

/// Mean over grid points of the squared difference of the same normalized
/// absolute fields used by hellinger_fidelity.
double mse(const GridField& a, const GridField& b);

CompareReport compare_fields(const GridField& a, const GridField& b);

/// Fraction of |field| mass on the outermost grid shell; large values mean
/// the window clips the state.
double boundary_mass_fraction(const GridField& f);

/// Pointwise density render of an ansatz over a grid. No normalization.
GridField ansatz_to_grid(const Ansatz& ansatz, Qpd qpd, const GridSpec& spec,
                         const std::string& model_hash = "", double time = 0.0);

}  // namespace phasespace
