#pragma once

#include <string>
#include <vector>

#include "phasespace/model.hpp"
#include "phasespace/poly.hpp"

namespace phasespace {

/// A generator contribution whose derivative order exceeds two and is
/// dropped from the drift-diffusion form. Reported, never silently lost.
struct TruncatedTerm {
    std::string source;       // which physical process produced it
    int order = 0;            // total derivative order of the dropped piece
    int n_monomials = 0;      // how many monomials were dropped
    double max_abs_coeff = 0; // largest dropped coefficient magnitude
};

/// Second-order convection-diffusion form of the evolution generator in the
/// 2M real phase-space coordinates x = (Re a_1, Im a_1, ..., Re a_M, Im a_M):
///   dp/dt = -sum_i d_i [ drift_i p ] + sum_{ij} d_i d_j [ D_ij p ]
/// with D symmetric, stored as the upper triangle.
struct DriftDiffusion {
    int n_modes = 0;
    Qpd qpd = Qpd::husimi;
    std::vector<PolyExpr> drift;             // size 2M
    std::vector<PolyExpr> diffusion_upper;   // size M(2M+1), index via upper_index
    std::vector<TruncatedTerm> truncated;

    int dim() const { return 2 * n_modes; }
    int upper_index(int i, int j) const;              // requires i <= j
    const PolyExpr& diffusion(int i, int j) const;    // any order

    void eval_drift(const double* x, double* nu) const;
    /// Full symmetric matrix, row-major dim x dim.
    void eval_diffusion(const double* x, double* d) const;

    /// Pairs (i, j), i <= j, with a nonzero diffusion polynomial.
    std::vector<std::pair<int, int>> diffusion_support() const;

    std::string describe() const;
    std::string content_hash() const;
};

/// Compiles the master equation of `model` into drift-diffusion form for the
/// chosen representation. Glauber-P compilation is supported as a target for
/// inspection; sampling layers reject it elsewhere.
/// Throws CompileError if the order-zero (trace-violating) residue does not
/// cancel, which would indicate an inconsistent translation table.
DriftDiffusion compile_generator(const ModelSpec& model, Qpd qpd);

}  // namespace phasespace
