#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "phasespace/ansatz.hpp"
#include "phasespace/gridfield.hpp"
#include "phasespace/observables.hpp"
#include "phasespace/sampler.hpp"

using namespace phasespace;

namespace {

SampleSet draw(const Ansatz& ans, int chains, int per, double sigma, uint64_t seed, int r) {
    SamplerConfig cfg;
    cfg.n_chains = chains;
    cfg.samples_per_chain = per;
    cfg.burn_in = 500;
    cfg.proposal_sigma = sigma;
    cfg.seed = seed;
    cfg.r = r;
    MetropolisSampler sampler(ans, cfg);
    return sampler.collect(ans);
}

double signed_value(const Ansatz& ans, const double* x) {
    LogDensity ld = ans.log_density(x);
    return ld.sign == 0 ? 0.0 : ld.sign * std::exp(ld.log_abs);
}

}  // namespace

TEST_CASE("coherent field and occupation under both distributions") {
    for (Qpd qpd : {Qpd::husimi, Qpd::wigner}) {
        CAPTURE(static_cast<int>(qpd));
        auto ans = init_coherent_mixture(1, {cplx(2.0, 0.0)}, qpd, 1, 0.0, 7);
        SampleSet s = draw(*ans, 32, 600, 0.9, 21, 1);

        ComplexMeanErr a = expval_field(s, 0);
        REQUIRE(a.re_err > 0.0);
        CHECK(std::abs(a.value.real() - 2.0) <= 4.0 * a.re_err);
        CHECK(std::abs(a.value.imag()) <= 4.0 * a.im_err);

        MeanErr n = expval_number(s, qpd, 0);
        REQUIRE(n.std_error > 0.0);
        CHECK(std::abs(n.value - 4.0) <= 4.0 * n.std_error);
    }
}

TEST_CASE("vacuum occupation vanishes for both distributions") {
    for (Qpd qpd : {Qpd::husimi, Qpd::wigner}) {
        CAPTURE(static_cast<int>(qpd));
        auto ans = init_coherent_mixture(1, {cplx(0.0, 0.0)}, qpd, 1, 0.0, 3);
        SampleSet s = draw(*ans, 32, 500, 0.8, 5, 1);
        MeanErr n = expval_number(s, qpd, 0);
        CHECK(std::abs(n.value) <= 4.0 * n.std_error);
    }
}

TEST_CASE("total occupation splits across modes") {
    auto ans = init_coherent_mixture(2, {cplx(2.0, 0.0), cplx(0.0, 1.0)}, Qpd::husimi, 1, 0.0, 11);
    SampleSet s = draw(*ans, 32, 500, 0.8, 13, 1);

    MeanErr n0 = expval_number(s, Qpd::husimi, 0);
    MeanErr n1 = expval_number(s, Qpd::husimi, 1);
    MeanErr tot = total_number(s, Qpd::husimi);
    CHECK(std::abs(tot.value - n0.value - n1.value) < 1e-12);
    CHECK(std::abs(n0.value - 4.0) <= 4.0 * n0.std_error);
    CHECK(std::abs(n1.value - 1.0) <= 4.0 * n1.std_error);

    ComplexMeanErr a1 = expval_field(s, 1);
    CHECK(std::abs(a1.value - cplx(0.0, 1.0)) <= 4.0 * (a1.re_err + a1.im_err));
}

TEST_CASE("wehrl entropy of a coherent state is one plus log pi") {
    const double want = 1.0 + std::log(kPi);
    auto ans = init_coherent_mixture(1, {cplx(1.3, -0.4)}, Qpd::husimi, 1, 0.0, 17);
    SampleSet s = draw(*ans, 32, 600, 0.9, 29, 1);

    MeanErr sw = wehrl_entropy(*ans, s);
    REQUIRE(sw.std_error > 0.0);
    CHECK(std::abs(sw.value - want) <= 4.0 * sw.std_error);
    CHECK(sw.std_error < 0.05);

    SUBCASE("agrees with deterministic quadrature") {
        GridSpec spec = GridSpec::square2d(7.0, 281);
        GridField p = tabulate(spec, [&](const double* x) { return signed_value(*ans, x); });
        double vol = spec.cell_volume();
        double quad = 0.0;
        for (double v : p.values)
            if (v > 0.0) quad -= v * std::log(v) * vol;
        CHECK(quad == doctest::Approx(want).epsilon(1e-5));
        CHECK(std::abs(sw.value - quad) <= 3.0 * sw.std_error);
    }

    SUBCASE("rescaling the density leaves the entropy unchanged") {
        auto scaled = ans->clone();
        Eigen::VectorXd th = scaled->theta();
        th[0] *= 2.0;
        scaled->set_theta(th);
        MeanErr sw2 = wehrl_entropy(*scaled, s);
        CHECK(std::abs(sw2.value - sw.value) < 1e-12);
    }
}

TEST_CASE("wehrl entropy through the rbm quadrature normalization") {
    const double want = 1.0 + std::log(kPi);
    auto rbm = init_rbm_coherent(1, {cplx(0.8, 0.2)}, Qpd::husimi, 2, 0.0, 9);
    SampleSet s = draw(*rbm, 32, 500, 0.8, 31, 1);
    MeanErr sw = wehrl_entropy(*rbm, s);
    CHECK(std::abs(sw.value - want) <= 4.0 * sw.std_error);
}

TEST_CASE("even cat symmetry, occupation, and negative volume") {
    auto cat = init_cat_mixture(cplx(2.0, 0.0), +1, Qpd::wigner, 4, 0.0, 23);
    SampleSet s = draw(*cat, 32, 800, 0.9, 37, 1);
    REQUIRE(s.sign_mean() > 0.3);

    ComplexMeanErr a = expval_field(s, 0);
    CHECK(std::abs(a.value.real()) <= 4.0 * a.re_err);
    CHECK(std::abs(a.value.imag()) <= 4.0 * a.im_err);

    const double ov = std::exp(-8.0);
    MeanErr n = expval_number(s, Qpd::wigner, 0);
    CHECK(std::abs(n.value - 4.0 * (1.0 - ov) / (1.0 + ov)) <= 4.0 * n.std_error);

    MeanErr neg = negative_volume(s);
    REQUIRE(neg.std_error > 0.0);
    CHECK(neg.value >= 0.0);
    CHECK(neg.value <= 1.0);

    GridSpec spec = GridSpec::square2d(5.0, 401);
    GridField w = tabulate(spec, [&](const double* x) { return signed_value(*cat, x); });
    double abs_mass = 0.0, neg_mass = 0.0;
    for (double v : w.values) {
        abs_mass += std::abs(v);
        if (v < 0.0) neg_mass += -v;
    }
    CHECK(std::abs(neg.value - neg_mass / abs_mass) <= 3.0 * neg.std_error);
}

TEST_CASE("nonnegative densities report zero negative volume") {
    auto coh = init_coherent_mixture(1, {cplx(1.0, 0.5)}, Qpd::wigner, 1, 0.0, 2);
    SampleSet s = draw(*coh, 8, 200, 0.8, 3, 1);
    CHECK(negative_volume(s).value == 0.0);

    auto cat_q = init_cat_mixture(cplx(2.0, 0.0), +1, Qpd::husimi, 4, 0.0, 4);
    SampleSet sq = draw(*cat_q, 8, 200, 0.9, 5, 1);
    CHECK(negative_volume(sq).value == 0.0);
}

TEST_CASE("negative volume is invariant under positive rescaling") {
    auto cat = init_cat_mixture(cplx(2.0, 0.0), +1, Qpd::wigner, 4, 0.0, 23);
    auto scaled = cat->clone();
    Eigen::VectorXd th = scaled->theta();
    int stride = GaussianMixture::params_per_component(1);
    for (int c = 0; c < 4; ++c) th[c * stride] *= 3.0;
    scaled->set_theta(th);

    SampleSet s1 = draw(*cat, 8, 300, 0.9, 41, 1);
    SampleSet s2 = draw(*scaled, 8, 300, 0.9, 41, 1);
    CHECK((s1.positions.array() == s2.positions.array()).all());
    CHECK(negative_volume(s1).value == negative_volume(s2).value);
}

TEST_CASE("record assembly and error paths") {
    auto ans = init_coherent_mixture(2, {cplx(1.0, 0.0), cplx(0.0, -1.0)}, Qpd::husimi, 1, 0.0, 6);
    SampleSet s = draw(*ans, 16, 200, 0.8, 7, 1);

    ObservableRecord rec = measure_basic(s, Qpd::husimi, 1.25);
    REQUIRE(rec.a_mean.size() == 2);
    REQUIRE(rec.n_mean.size() == 2);
    CHECK(rec.t == 1.25);
    CHECK(rec.sign_mean == 1.0);
    CHECK(rec.acceptance == s.acceptance);
    CHECK(std::abs(rec.a_mean[0].value - expval_field(s, 0).value) < 1e-15);
    CHECK(std::abs(rec.n_mean[1].value - expval_number(s, Qpd::husimi, 1).value) < 1e-15);
    CHECK_FALSE(rec.wehrl.has_value());
    CHECK_FALSE(rec.neg_volume.has_value());

    CHECK_THROWS_AS(expval_field(s, 2), ConfigError);
    CHECK_THROWS_AS(expval_field(s, -1), ConfigError);
    CHECK_THROWS_AS(expval_number(s, Qpd::husimi, 2), ConfigError);
    CHECK_THROWS_AS(plain_mean(s, Eigen::VectorXd::Zero(3)), ConfigError);

    Rbm big(6, 1);
    CHECK_THROWS_AS(wehrl_entropy(big, s), AnsatzError);

    auto one_mode = init_coherent_mixture(1, {cplx(0.0, 0.0)}, Qpd::husimi, 1, 0.0, 8);
    CHECK_THROWS_AS(wehrl_entropy(*one_mode, s), ConfigError);
}
