#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "phasespace/gridfield.hpp"
#include "phasespace/model.hpp"

namespace phasespace {

/// Number-basis reference solver. Evolves the density matrix directly with
/// RK4; deliberately shares no code with the phase-space pipeline so the two
/// routes stay independent checks of each other.
class FockOracle {
public:
    using Dense = Eigen::MatrixXcd;

    /// cutoffs: per-mode basis size (levels 0..cutoff-1). The product of
    /// cutoffs is capped to keep memory and runtime sane.
    FockOracle(const ModelSpec& model, std::vector<int> cutoffs);

    int total_dim() const { return total_dim_; }
    const std::vector<int>& cutoffs() const { return cutoffs_; }

    Dense generator(const Dense& rho) const;

    void rk4_step(Dense& rho, double dt) const;

    /// Evolves in place; calls on_output(t, rho) at t = 0 and every
    /// `output_stride` steps (and at the final time). Re-hermitizes at
    /// output points and checks trace drift.
    void evolve(Dense& rho, double t_max, double dt, int output_stride,
                const std::function<void(double, const Dense&)>& on_output) const;

    /// Evolves until ||generator(rho)||_F < tol or t_max is hit; returns the
    /// reached state. `converged` reports which happened.
    Dense steady_state(Dense rho, double dt, double tol, double t_max, bool* converged) const;

    // --- state constructors ---
    static Eigen::VectorXcd coherent_vector(cplx alpha, int dim);
    Dense coherent_state(const std::vector<cplx>& alphas) const;
    /// Even (parity=+1) or odd (parity=-1) superposition of +/- alpha; one mode.
    Dense cat_state(cplx alpha, int parity) const;

    // --- measurements ---
    cplx expval_a(const Dense& rho, int mode) const;
    double expval_n(const Dense& rho, int mode) const;
    double trace_error(const Dense& rho) const;
    double hermiticity_error(const Dense& rho) const;
    double min_eigenvalue(const Dense& rho) const;
    /// Total population in any mode's top level; truncation-quality guard.
    double edge_occupation(const Dense& rho) const;

    Dense partial_trace(const Dense& rho, int keep_mode) const;

    /// Husimi or Wigner function of a one-mode density matrix on a grid.
    /// For multi-mode states pass a partial trace.
    GridField qpd_grid(const Dense& rho1, Qpd qpd, const GridSpec& spec) const;

private:
    void apply_generator(const Dense& rho, Dense& out) const;

    ModelSpec model_;
    std::vector<int> cutoffs_;
    std::vector<int> strides_;
    int total_dim_ = 0;

    Eigen::SparseMatrix<cplx> hamiltonian_;
    struct Jump {
        Eigen::SparseMatrix<cplx> op;       // C, scaled by sqrt(rate)
        Eigen::VectorXd cdc_diag;           // diagonal of C^dag C, scaled by rate
    };
    std::vector<Jump> jumps_;
};

/// Closed-form evolution of the mode amplitudes when every nonlinearity is
/// off (no kerr, no two-photon drive, no two-photon loss): the first-moment
/// equations close and are integrated exactly via the matrix exponential.
/// Throws ConfigError if the model has any nonlinear term.
std::vector<std::vector<cplx>> linear_meanfield(const ModelSpec& model,
                                                const std::vector<cplx>& alpha0,
                                                const std::vector<double>& times);

}  // namespace phasespace
