#pragma once

#include <optional>
#include <vector>

#include "phasespace/ansatz.hpp"
#include "phasespace/model.hpp"
#include "phasespace/sampler.hpp"

namespace phasespace {

struct ComplexMeanErr {
    cplx value{0.0, 0.0};
    double re_err = 0.0;
    double im_err = 0.0;
};

/// One row of a trajectory: physical quantities plus estimator diagnostics.
struct ObservableRecord {
    double t = 0.0;
    std::vector<ComplexMeanErr> a_mean;  // per mode
    std::vector<MeanErr> n_mean;         // per mode
    std::optional<MeanErr> wehrl;
    std::optional<MeanErr> neg_volume;
    double sign_mean = 1.0;
    double acceptance = 0.0;
};

/// Unweighted sample mean with the same chain-blocked standard error as
/// expectation(); used for estimators defined on the |p| measure itself.
MeanErr plain_mean(const SampleSet& s, const Eigen::VectorXd& f);

/// <a_m> = E_w[x_{2m} + i x_{2m+1}]. First moments carry no ordering
/// correction, so the formula is shared by both distributions.
ComplexMeanErr expval_field(const SampleSet& s, int mode);

/// <a†a> for one mode: E_w[x_{2m}^2 + x_{2m+1}^2] minus the ordering
/// offset (1 for husimi, 1/2 for wigner).
MeanErr expval_number(const SampleSet& s, Qpd qpd, int mode);

/// Total occupation across modes, estimated in a single pass.
MeanErr total_number(const SampleSet& s, Qpd qpd);

/// S = −E_w[log p] + log Z. Requires a known normalization; meaningful for
/// samples drawn with r=1 from a nonnegative density.
MeanErr wehrl_entropy(const Ansatz& ansatz, const SampleSet& s);

/// Fraction of negative-sign samples; with positions |W|-distributed (r=1)
/// this estimates the relative weight of the negative region.
MeanErr negative_volume(const SampleSet& s);

/// Convenience bundle used by the trajectory loop and the CLI.
ObservableRecord measure_basic(const SampleSet& s, Qpd qpd, double t);

}  // namespace phasespace
