#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "phasespace/ansatz.hpp"
#include "phasespace/rng.hpp"

namespace phasespace {

struct SamplerConfig {
    int n_chains = 16;
    int samples_per_chain = 63;
    int burn_in = 200;        // sweeps discarded when chains are (re)started
    int refresh_sweeps = 2;   // sweeps between collections on persistent chains
    double proposal_sigma = 0.1;
    double init_spread = 1.0; // gaussian spread of fresh chain starts
    uint64_t seed = 1;
    int r = 1;                // stationary density is |p|^r
};

/// Batch of Metropolis samples. Rows of `positions` are phase-space points;
/// `signs` carries sgn p(x). Estimators divide sign-weighted sums by the
/// summed signs, so a batch is only usable while `sign_mean` stays away
/// from zero.
struct SampleSet {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> positions;
    std::vector<int8_t> signs;
    int n_chains = 1;
    int r = 1;
    double acceptance = 0.0;

    int size() const { return static_cast<int>(positions.rows()); }
    int dim() const { return static_cast<int>(positions.cols()); }
    double sign_mean() const;
};

struct MeanErr {
    double value = 0.0;
    double std_error = 0.0;
};

/// Random-walk Metropolis with acceptance min(1, (|p'|/|p|)^r), i.e. the
/// stationary density is |p|^r: r = 1 for direct sampling of |p| with sign
/// weights, r = 2 for the squared-density measure used by sign-problem
/// estimators. One sweep = dim full-vector Gaussian proposals; one sample is
/// kept per sweep. Chains persist between collections so the walker state
/// tracks slowly moving densities.
class MetropolisSampler {
public:
    MetropolisSampler(const Ansatz& ansatz, const SamplerConfig& cfg);

    /// Re-draws chain starts from the ansatz's natural centers and burns in.
    void reset(const Ansatz& ansatz);

    /// Runs refresh sweeps then collects samples_per_chain per chain.
    SampleSet collect(const Ansatz& ansatz);

    const SamplerConfig& config() const { return cfg_; }

private:
    void sweep(const Ansatz& ansatz, int chain, long* accept_tally);

    SamplerConfig cfg_;
    int dim_;
    std::vector<Eigen::VectorXd> pos_;
    std::vector<LogDensity> lp_;
    std::vector<Rng> rng_;
    bool fresh_ = true;
};

/// One-shot convenience: fresh chains, burn-in, one collection.
SampleSet sample_density(const Ansatz& ansatz, const SamplerConfig& cfg);

/// Sign-weighted expectation of per-sample values f with a chain-blocked
/// standard error (spread of per-chain ratio estimates).
MeanErr expectation(const SampleSet& s, const Eigen::VectorXd& f);

}  // namespace phasespace
