#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "phasespace/ansatz.hpp"
#include "phasespace/gridfield.hpp"
#include "phasespace/sampler.hpp"

using namespace phasespace;

namespace {

SamplerConfig wide_cfg(int chains, int per, double sigma, uint64_t seed, int r) {
    SamplerConfig cfg;
    cfg.n_chains = chains;
    cfg.samples_per_chain = per;
    cfg.burn_in = 400;
    cfg.proposal_sigma = sigma;
    cfg.seed = seed;
    cfg.r = r;
    return cfg;
}

double column_moment(const SampleSet& s, int col, double center, int power) {
    double acc = 0.0;
    for (int i = 0; i < s.size(); ++i) acc += std::pow(s.positions(i, col) - center, power);
    return acc / s.size();
}

// Two-sample Kolmogorov-Smirnov p-value (asymptotic), one coordinate.
double ks_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        double fa = static_cast<double>(i) / a.size();
        double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::abs(fa - fb));
    }
    double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    double lam = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lam * lam);
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> thinned_column(const SampleSet& s, int col, int stride) {
    std::vector<double> out;
    for (int i = 0; i < s.size(); i += stride) out.push_back(s.positions(i, col));
    return out;
}

// Near-independent draws: one record per chain per collection, with
// decorrelating sweeps in between.
SampleSet collect_decorrelated(const Ansatz& ans, int chains, int records, double sigma,
                               uint64_t seed, int r) {
    SamplerConfig cfg = wide_cfg(chains, 1, sigma, seed, r);
    cfg.refresh_sweeps = 8;
    MetropolisSampler sampler(ans, cfg);
    SampleSet all;
    all.n_chains = chains;
    all.r = r;
    all.positions.resize(static_cast<long>(chains) * records, ans.dim());
    all.signs.assign(static_cast<size_t>(chains) * records, 0);
    for (int k = 0; k < records; ++k) {
        SampleSet batch = sampler.collect(ans);
        all.positions.middleRows(static_cast<long>(k) * chains, chains) = batch.positions;
        std::copy(batch.signs.begin(), batch.signs.end(), all.signs.begin() + k * chains);
        all.acceptance = batch.acceptance;
    }
    return all;
}

}  // namespace

TEST_CASE("gaussian target moments match analytic values") {
    auto gm = init_coherent_mixture(1, {cplx(2.0, 0.0)}, Qpd::husimi, 1, 0.0, 3);
    SampleSet s = collect_decorrelated(*gm, 40, 2500, 1.2, 72, 1);
    REQUIRE(s.size() == 100000);
    CHECK(s.dim() == 2);
    CHECK(s.sign_mean() == 1.0);

    const double neff = s.size() / 1.3;  // residual correlation margin
    const double var = 0.5;

    // first four central moments per coordinate, 4 sigma gates
    const double se1 = std::sqrt(var / neff);
    const double se2 = var * std::sqrt(2.0 / neff);
    const double se3 = std::sqrt(6.0 * std::pow(var, 3) / neff);
    const double se4 = std::sqrt(96.0 * std::pow(var, 4) / neff);

    const double centers[2] = {2.0, 0.0};
    for (int col = 0; col < 2; ++col) {
        INFO("coordinate ", col);
        CHECK(std::abs(column_moment(s, col, 0.0, 1) - centers[col]) < 4.0 * se1);
        CHECK(std::abs(column_moment(s, col, centers[col], 2) - var) < 4.0 * se2);
        CHECK(std::abs(column_moment(s, col, centers[col], 3)) < 4.0 * se3);
        CHECK(std::abs(column_moment(s, col, centers[col], 4) - 3.0 * var * var) <
              4.0 * se4);
    }

    // headline bound: mean within 3 iid standard errors of (2, 0)
    for (int col = 0; col < 2; ++col)
        CHECK(std::abs(column_moment(s, col, 0.0, 1) - centers[col]) <
              3.0 * std::sqrt(var) / std::sqrt(double(s.size())));

    MeanErr m = expectation(s, s.positions.col(0));
    CHECK(m.value == doctest::Approx(2.0).epsilon(0.01));
    CHECK(m.std_error > 0.0);
    CHECK(std::abs(m.value - 2.0) < 5.0 * m.std_error);
}

TEST_CASE("squared-density sampling halves the covariance") {
    auto gm = init_coherent_mixture(1, {cplx(2.0, 0.0)}, Qpd::husimi, 1, 0.0, 3);
    SampleSet s2 = sample_density(*gm, wide_cfg(40, 2500, 0.9, 72, 2));
    CHECK(s2.r == 2);
    CHECK(s2.sign_mean() == 1.0);

    for (int col = 0; col < 2; ++col) {
        double c = (col == 0) ? 2.0 : 0.0;
        double v = column_moment(s2, col, c, 2);
        INFO("coordinate ", col, " variance ", v);
        CHECK(std::abs(v - 0.25) < 0.05 * 0.25);
    }

    // same law as r=1 sampling of the half-covariance gaussian
    auto half = init_coherent_mixture(1, {cplx(2.0, 0.0)}, Qpd::wigner, 1, 0.0, 3);
    SampleSet s1 = sample_density(*half, wide_cfg(40, 2500, 0.9, 73, 1));
    for (int col = 0; col < 2; ++col) {
        double p = ks_pvalue(thinned_column(s2, col, 7), thinned_column(s1, col, 7));
        INFO("coordinate ", col, " ks p ", p);
        CHECK(p > 0.01);
    }
}

TEST_CASE("fixed seed reproduces the batch bitwise") {
    auto gm = init_coherent_mixture(1, {cplx(1.0, -1.0)}, Qpd::husimi, 2, 0.3, 5);
    SamplerConfig cfg = wide_cfg(8, 200, 0.5, 99, 1);

    SampleSet a = sample_density(*gm, cfg);
    SampleSet b = sample_density(*gm, cfg);
    REQUIRE(a.size() == b.size());
    CHECK(a.acceptance == b.acceptance);
    CHECK((a.positions.array() == b.positions.array()).all());
    CHECK(std::equal(a.signs.begin(), a.signs.end(), b.signs.begin()));

    cfg.seed = 100;
    SampleSet c = sample_density(*gm, cfg);
    CHECK_FALSE((a.positions.array() == c.positions.array()).all());
}

TEST_CASE("narrow proposals on a unit gaussian keep acceptance high") {
    GaussianMixture unit(1, 1);  // default: zero mean, identity covariance
    SamplerConfig cfg = wide_cfg(16, 400, 0.1, 31, 1);
    SampleSet s = sample_density(unit, cfg);
    INFO("acceptance ", s.acceptance);
    CHECK(s.acceptance >= 0.6);
    CHECK(s.acceptance <= 0.99);
}

TEST_CASE("wigner cat batches carry negative signs") {
    auto cat = init_cat_mixture(cplx(2.0, 0.0), 1, Qpd::wigner, 4, 0.0, 7);
    SamplerConfig cfg = wide_cfg(24, 3000, 0.5, 17, 2);
    cfg.burn_in = 300;
    SampleSet s = sample_density(*cat, cfg);

    long neg = 0;
    for (int8_t sg : s.signs) neg += (sg < 0);
    INFO("negative fraction ", double(neg) / s.size());
    CHECK(neg > 0);
    CHECK(s.sign_mean() < 1.0);

    // the r=2 walker visits the negative set with probability
    // int W^2 1_{W<0} / int W^2; check it against grid quadrature
    Eigen::VectorXd indicator(s.size());
    for (int i = 0; i < s.size(); ++i) indicator[i] = s.signs[i] < 0 ? 1.0 : 0.0;
    MeanErr frac = expectation(s, indicator);

    GridField w = tabulate(GridSpec::square2d(5.0, 401),
                           [&](const double* x) { return cat->density(x); });
    double neg_mass = 0.0, tot_mass = 0.0;
    for (double v : w.values) {
        tot_mass += v * v;
        if (v < 0) neg_mass += v * v;
    }
    double want = neg_mass / tot_mass;
    INFO("sampled ", frac.value, " +- ", frac.std_error, " quadrature ", want);
    REQUIRE(frac.std_error > 0.0);
    CHECK(std::abs(frac.value - want) < 3.0 * frac.std_error);
}

TEST_CASE("sign-weighted expectations on a signed density") {
    auto cat = init_cat_mixture(cplx(2.0, 0.0), 1, Qpd::wigner, 4, 0.0, 7);
    SamplerConfig cfg = wide_cfg(16, 1500, 0.5, 19, 1);
    cfg.burn_in = 300;
    SampleSet s = sample_density(*cat, cfg);
    CHECK(s.sign_mean() < 1.0);

    // the normalized weighted mean of f = 1 is exactly one however the signs fall
    MeanErr one = expectation(s, Eigen::VectorXd::Ones(s.size()));
    CHECK(one.value == 1.0);

    CHECK_THROWS_AS(expectation(s, Eigen::VectorXd::Ones(3)), ConfigError);

    // negative-volume fraction of |W|: the plain visit frequency of the r=1
    // walker (signs off); reference from grid quadrature
    Eigen::VectorXd indicator(s.size());
    for (int i = 0; i < s.size(); ++i) indicator[i] = s.signs[i] < 0 ? 1.0 : 0.0;
    SampleSet plain = s;
    plain.r = 2;  // even power: expectation() drops the sign weights
    MeanErr frac = expectation(plain, indicator);

    GridField w = tabulate(GridSpec::square2d(5.0, 401),
                           [&](const double* x) { return cat->density(x); });
    double neg_mass = 0.0, abs_mass = 0.0;
    for (double v : w.values) {
        abs_mass += std::abs(v);
        if (v < 0) neg_mass += -v;
    }
    double want = neg_mass / abs_mass;
    INFO("sampled ", frac.value, " +- ", frac.std_error, " quadrature ", want);
    REQUIRE(frac.std_error > 0.0);
    CHECK(std::abs(frac.value - want) < 3.0 * frac.std_error);
}

TEST_CASE("husimi batches of a nonnegative density are all positive") {
    auto cat = init_cat_mixture(cplx(1.5, 0.0), 1, Qpd::husimi, 4, 0.0, 7);
    SampleSet s = sample_density(*cat, wide_cfg(8, 500, 0.6, 23, 1));
    CHECK(s.sign_mean() == 1.0);
    for (int8_t sg : s.signs) REQUIRE(sg == 1);
}

TEST_CASE("rbm targets start from the origin and still find the peak") {
    auto rbm = init_rbm_coherent(1, {cplx(1.0, 0.5)}, Qpd::husimi, 2, 0.0, 11);
    SamplerConfig cfg = wide_cfg(20, 2000, 0.8, 41, 1);
    SampleSet s = sample_density(*rbm, cfg);

    MeanErr mx = expectation(s, s.positions.col(0));
    MeanErr my = expectation(s, s.positions.col(1));
    REQUIRE(mx.std_error > 0.0);
    CHECK(std::abs(mx.value - 1.0) < 5.0 * mx.std_error);
    CHECK(std::abs(my.value - 0.5) < 5.0 * my.std_error);
}

TEST_CASE("chain-blocked errors are calibrated") {
    auto gm = init_coherent_mixture(1, {cplx(0.0, 0.0)}, Qpd::husimi, 1, 0.0, 3);
    double dev2 = 0.0, se2 = 0.0;
    for (uint64_t seed = 1; seed <= 8; ++seed) {
        SampleSet s = sample_density(*gm, wide_cfg(16, 600, 1.0, seed, 1));
        MeanErr m = expectation(s, s.positions.col(0));
        dev2 += m.value * m.value;
        se2 += m.std_error * m.std_error;
    }
    double ratio = std::sqrt(dev2 / se2);
    INFO("rms deviation over rms quoted error: ", ratio);
    CHECK(ratio > 0.3);
    CHECK(ratio < 3.0);
}

TEST_CASE("config validation and degenerate targets") {
    auto gm = init_coherent_mixture(1, {cplx(0.0, 0.0)}, Qpd::husimi, 1, 0.0, 3);
    SamplerConfig cfg;

    cfg.n_chains = 0;
    CHECK_THROWS_AS(MetropolisSampler(*gm, cfg), ConfigError);
    cfg = SamplerConfig{};
    cfg.r = 3;
    CHECK_THROWS_AS(MetropolisSampler(*gm, cfg), ConfigError);
    cfg = SamplerConfig{};
    cfg.proposal_sigma = 0.0;
    CHECK_THROWS_AS(MetropolisSampler(*gm, cfg), ConfigError);

    // two components cancelling exactly: no nonzero density to start from
    GaussianMixture zero(1, 2);
    Eigen::VectorXd th = zero.theta();
    GaussianMixture::weight(th, 0, 2) = 1.0;
    GaussianMixture::weight(th, 1, 2) = -1.0;
    zero.set_theta(th);
    CHECK_THROWS_AS(MetropolisSampler(zero, SamplerConfig{}), SamplerError);
}

TEST_CASE("persistent chains refresh instead of re-burning") {
    auto gm = init_coherent_mixture(1, {cplx(2.0, 0.0)}, Qpd::husimi, 1, 0.0, 3);
    SamplerConfig cfg = wide_cfg(8, 400, 0.8, 57, 1);
    cfg.refresh_sweeps = 3;
    MetropolisSampler sampler(*gm, cfg);

    SampleSet first = sampler.collect(*gm);
    SampleSet second = sampler.collect(*gm);
    CHECK_FALSE((first.positions.array() == second.positions.array()).all());

    // the persistent walker keeps tracking after a parameter update
    auto moved = init_coherent_mixture(1, {cplx(2.3, -0.1)}, Qpd::husimi, 1, 0.0, 3);
    SampleSet third = sampler.collect(*moved);
    MeanErr mx = expectation(third, third.positions.col(0));
    CHECK(std::abs(mx.value - 2.3) < 6.0 * mx.std_error);
}
