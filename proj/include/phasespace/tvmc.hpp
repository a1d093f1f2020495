#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasespace/ansatz.hpp"
#include "phasespace/fp_compiler.hpp"
#include "phasespace/local_derivative.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/sampler.hpp"

namespace phasespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct TvmcConfig {
    double dt = 1e-4;
    double total_time = 1.0;
    int output_stride = 100;    // dynamics steps between recorded outputs
    double svd_cutoff = 1e-8;   // relative spectral threshold for the pseudo-inverse
    double diag_shift = 0.0;    // additive regularization on the diagonal
    bool centering = true;      // subtract E[O], E[L] before assembling S, F
    double trust_threshold = 10.0;  // abort when |theta_dot|*dt exceeds this
    double min_acceptance = 1e-3;
    bool track_wehrl = false;       // entropy column (needs a known normalization)
    bool track_negativity = false;  // negative-volume column (wigner runs)
    // Observable batches come from a dedicated r=1 sampler; its batch size,
    // proposal width and refresh can differ from the dynamics sampler
    // (0 inherits). Wider proposals decorrelate the recorded estimates.
    int obs_samples_per_chain = 0;
    double obs_proposal_sigma = 0.0;
    int obs_refresh_sweeps = 10;
};

/// Raised by solve_update when every spectral direction falls below the
/// cutoff; the driver converts it into an unstable-trajectory flag.
struct RankCollapse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolveResult {
    Eigen::VectorXd theta_dot;
    double residual = 0.0;  // |S theta_dot - F| against the unshifted S
    int rank = 0;           // spectral directions retained
    double eig_min = 0.0;   // spectrum summary (LDLT path reports pivot range)
    double eig_max = 0.0;
};

struct StepDiag {
    double t = 0.0;
    double theta_dot_norm = 0.0;
    double residual = 0.0;
    int rank = 0;
    double eig_min = 0.0;
    double eig_max = 0.0;
    double sign_mean = 1.0;
    double acceptance = 0.0;
};

/// One assembled tVMC step: geometric tensor, forces, solved update.
struct TvmcStep {
    Eigen::MatrixXd S;
    Eigen::VectorXd F;
    Eigen::VectorXd theta_dot;
    StepDiag diag;
};

struct Trajectory {
    Qpd qpd = Qpd::husimi;
    std::vector<double> times;               // output grid
    std::vector<ObservableRecord> records;   // one per output time
    std::vector<Eigen::VectorXd> thetas;     // parameter snapshots per output
    std::vector<StepDiag> step_diags;        // one per dynamics step
    bool unstable = false;
    std::string breakdown_reason;
    double end_time = 0.0;
    long steps = 0;
};

/// S_ij = E_w[O_i O_j] - centering * E_w[O_i] E_w[O_j], symmetrized exactly.
/// E_w uses weights sign^r matching the sampling rule. Rows of O are
/// per-sample log-derivatives.
Eigen::MatrixXd estimate_S(const SampleSet& s, const RowMat& O, bool centering);

/// F_i = E_w[L O_i] - centering * E_w[L] E_w[O_i].
Eigen::VectorXd estimate_F(const SampleSet& s, const RowMat& O, const Eigen::VectorXd& L,
                           bool centering);

/// theta_dot = pinv(S + diag_shift I) F, discarding spectral directions with
/// |eigenvalue| < svd_cutoff * max. With svd_cutoff == 0 and diag_shift > 0
/// the shifted system is solved directly (LDLT) instead, which skips the
/// eigendecomposition. Residual is measured against the unshifted S.
SolveResult solve_update(const Eigen::MatrixXd& S, const Eigen::VectorXd& F, double svd_cutoff,
                         double diag_shift);

/// Time evolution driver: sample, assemble S and F, solve, Euler-step theta.
/// Breakdown conditions (non-finite estimates, acceptance or sign collapse,
/// rank collapse, trust-region violation, degenerate parameters) terminate
/// the run early and mark the returned trajectory unstable.
class TvmcEngine {
public:
    TvmcEngine(const ModelSpec& model, Qpd qpd, std::unique_ptr<Ansatz> ansatz,
               const SamplerConfig& scfg, const TvmcConfig& tcfg);
    TvmcEngine(DriftDiffusion dd, std::unique_ptr<Ansatz> ansatz, const SamplerConfig& scfg,
               const TvmcConfig& tcfg);

    const Ansatz& ansatz() const { return *ansatz_; }
    const DriftDiffusion& generator() const { return dd_; }
    const TvmcConfig& config() const { return tcfg_; }

    /// Collects a batch with the dynamics sampler and assembles one step
    /// without advancing theta. Exposed for estimator tests.
    TvmcStep assemble();
    TvmcStep assemble(const SampleSet& batch) const;

    /// Progress callback, invoked at each recorded output.
    using OutputHook = std::function<void(double t, const ObservableRecord&)>;

    Trajectory run(const OutputHook& on_output = {});

private:
    void fill_o_l(const SampleSet& batch, RowMat& O, Eigen::VectorXd& L) const;
    ObservableRecord observe(double t);

    DriftDiffusion dd_;
    LocalDerivative local_;
    std::unique_ptr<Ansatz> ansatz_;
    SamplerConfig scfg_;
    TvmcConfig tcfg_;
    std::unique_ptr<MetropolisSampler> sampler_;      // dynamics measure, r per QPD
    std::unique_ptr<MetropolisSampler> obs_sampler_;  // r=1 measure for recorded observables
};

}  // namespace phasespace
