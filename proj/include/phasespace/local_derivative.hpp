#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "phasespace/ansatz.hpp"
#include "phasespace/fp_compiler.hpp"

namespace phasespace {

/// Evaluates L(x) = (dp/dt)/p for a drift-diffusion generator applied to a
/// log-density with known gradient g and Hessian H:
///   L = -sum_i [d_i nu_i + nu_i g_i]
///       + sum_{ij} [d_i d_j D_ij + d_i D_ij g_j + d_j D_ij g_i
///                   + D_ij (H_ij + g_i g_j)]
/// All polynomial derivatives of nu and D are expanded once at construction;
/// the symmetric D sum iterates only the nonzero upper triangle.
class LocalDerivative {
public:
    explicit LocalDerivative(const DriftDiffusion& dd);

    int dim() const { return dim_; }

    /// Hot path: caller supplies grad (dim) and Hessian (row-major dim x dim,
    /// symmetric) of log p at x.
    double operator()(const double* x, const double* grad, const double* hess) const;

    /// Convenience wrapper evaluating the ansatz derivatives itself.
    double eval(const Ansatz& ansatz, const double* x) const;

private:
    struct DriftEntry {
        int i;
        PolyExpr nu;
        PolyExpr dnu;
    };
    struct DiffEntry {
        int i, j;
        double mult;  // 1 on the diagonal, 2 off it
        PolyExpr d;
        PolyExpr di;   // d_i D_ij
        PolyExpr dj;   // d_j D_ij
        PolyExpr dij;  // d_i d_j D_ij
    };

    int dim_ = 0;
    std::vector<DriftEntry> drift_;
    std::vector<DiffEntry> diff_;
};

}  // namespace phasespace
