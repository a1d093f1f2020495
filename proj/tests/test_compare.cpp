#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "phasespace/ansatz.hpp"
#include "phasespace/compare.hpp"
#include "phasespace/gridfield.hpp"

using namespace phasespace;

namespace {

GridField gaussian_field(const GridSpec& spec, double cx, double cy, double scale) {
    return tabulate(spec, [&](const double* x) {
        double d2 = (x[0] - cx) * (x[0] - cx) + (x[1] - cy) * (x[1] - cy);
        return scale * std::exp(-d2);
    });
}

}  // namespace

TEST_CASE("fidelity and mse on identical and rescaled fields") {
    GridSpec spec = GridSpec::square2d(5.0, 101);
    GridField a = gaussian_field(spec, 0.3, -0.2, 1.0);

    CHECK(hellinger_fidelity(a, a) == 1.0);
    CHECK(mse(a, a) == 0.0);

    GridField b = a;
    for (double& v : b.values) v *= 2.0;
    CHECK(hellinger_fidelity(a, b) == 1.0);
    CHECK(mse(a, b) == 0.0);

    GridField c = a;
    for (double& v : c.values) v *= 3.7;
    CHECK(hellinger_fidelity(a, c) >= 1.0 - 1e-12);
    CHECK(mse(a, c) < 1e-24);
}

TEST_CASE("disjoint supports give zero fidelity") {
    GridSpec spec = GridSpec::square2d(5.0, 101);
    GridField a = tabulate(spec, [](const double* x) { return x[0] < -1.0 ? 1.0 : 0.0; });
    GridField b = tabulate(spec, [](const double* x) { return x[0] > 1.0 ? 1.0 : 0.0; });
    CHECK(hellinger_fidelity(a, b) == 0.0);
    CHECK(mse(a, b) > 0.0);
}

TEST_CASE("separated gaussians reproduce the bhattacharyya overlap") {
    GridSpec spec = GridSpec::square2d(5.0, 101);
    GridField a = gaussian_field(spec, -1.0, 0.0, 1.0);
    GridField b = gaussian_field(spec, 1.0, 0.0, 0.6);

    double f = hellinger_fidelity(a, b);
    CHECK(f == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(hellinger_fidelity(b, a) == f);

    // independent direct sums with the same normalization convention
    double sa = 0.0, sb = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        sa += std::abs(a.values[i]);
        sb += std::abs(b.values[i]);
    }
    double fref = 0.0, mref = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        double pa = std::abs(a.values[i]) / sa;
        double pb = std::abs(b.values[i]) / sb;
        fref += std::sqrt(pa * pb);
        mref += (pa - pb) * (pa - pb);
    }
    mref /= a.values.size();
    CHECK(f == doctest::Approx(fref).epsilon(1e-13));
    CHECK(mse(a, b) == doctest::Approx(mref).epsilon(1e-13));
    CHECK(mref > 0.0);
}

TEST_CASE("absolute values make the metric sign-blind") {
    GridSpec spec = GridSpec::square2d(4.0, 81);
    auto cat = init_cat_mixture(cplx(2.0, 0.0), +1, Qpd::wigner, 4, 0.0, 5);
    GridField w = ansatz_to_grid(*cat, Qpd::wigner, spec);
    REQUIRE(w.min_value() < 0.0);

    GridField flipped = w;
    for (double& v : flipped.values) v = -v;
    GridField rectified = w;
    for (double& v : rectified.values) v = std::abs(v);

    CHECK(hellinger_fidelity(w, flipped) == 1.0);
    CHECK(hellinger_fidelity(w, rectified) == 1.0);
    CHECK(mse(w, flipped) == 0.0);
}

TEST_CASE("grid mismatch and degenerate fields are rejected") {
    GridField a = gaussian_field(GridSpec::square2d(5.0, 101), 0, 0, 1.0);
    GridField b = gaussian_field(GridSpec::square2d(5.0, 99), 0, 0, 1.0);
    GridField c = gaussian_field(GridSpec::square2d(4.5, 101), 0, 0, 1.0);
    CHECK_THROWS_AS(hellinger_fidelity(a, b), ConfigError);
    CHECK_THROWS_AS(mse(a, c), ConfigError);

    GridField zero = a;
    for (double& v : zero.values) v = 0.0;
    CHECK_THROWS_AS(hellinger_fidelity(a, zero), ConfigError);
    CHECK_THROWS_AS(mse(zero, a), ConfigError);
}

TEST_CASE("compare report carries the grid hash and raw sums") {
    GridSpec spec = GridSpec::square2d(5.0, 101);
    GridField a = gaussian_field(spec, -1.0, 0.0, 1.0);
    GridField b = gaussian_field(spec, 1.0, 0.0, 1.0);

    CompareReport rep = compare_fields(a, b);
    CHECK(rep.f_h == hellinger_fidelity(a, b));
    CHECK(rep.mse == mse(a, b));
    CHECK(rep.grid_hash == grid_spec_hash(spec));
    CHECK(rep.grid_hash != grid_spec_hash(GridSpec::square2d(5.0, 99)));
    CHECK(rep.abs_sum_a == doctest::Approx(kPi / spec.cell_volume()).epsilon(1e-6));

    std::string js = rep.to_json();
    CHECK(js.find("\"f_h\"") != std::string::npos);
    CHECK(js.find("\"mse\"") != std::string::npos);
    CHECK(js.find("\"grid_hash\"") != std::string::npos);
}

TEST_CASE("boundary mass flags a clipped window") {
    auto vac = init_coherent_mixture(1, {cplx(0.0, 0.0)}, Qpd::husimi, 1, 0.0, 2);
    GridField wide = ansatz_to_grid(*vac, Qpd::husimi, GridSpec::square2d(5.0, 101));
    CHECK(boundary_mass_fraction(wide) < 1e-6);

    GridField tight = ansatz_to_grid(*vac, Qpd::husimi, GridSpec::square2d(1.0, 51));
    CHECK(boundary_mass_fraction(tight) > 1e-3);
}

TEST_CASE("ansatz render matches the closed-form gaussian") {
    GridSpec spec = GridSpec::square2d(5.0, 101);
    cplx alpha(1.1, -0.6);
    auto ans = init_coherent_mixture(1, {alpha}, Qpd::husimi, 1, 0.0, 12);
    GridField f = ansatz_to_grid(*ans, Qpd::husimi, spec, "mhash", 0.75);

    CHECK(f.qpd == "husimi");
    CHECK(f.model_hash == "mhash");
    CHECK(f.time == 0.75);

    double worst = 0.0;
    std::vector<double> x(2);
    for (int i = 0; i < spec.total_points(); ++i) {
        f.point(i, x.data());
        double d2 = (x[0] - alpha.real()) * (x[0] - alpha.real()) +
                    (x[1] - alpha.imag()) * (x[1] - alpha.imag());
        worst = std::max(worst, std::abs(f.values[i] - std::exp(-d2) / kPi));
    }
    CHECK(worst < 1e-12);

    auto rbm = init_rbm_coherent(1, {alpha}, Qpd::husimi, 3, 0.01, 19);
    GridField g = ansatz_to_grid(*rbm, Qpd::husimi, spec);
    for (double v : g.values) {
        CHECK(std::isfinite(v));
        CHECK(v >= 0.0);
    }

    auto two = init_coherent_mixture(2, {alpha, alpha}, Qpd::husimi, 1, 0.0, 3);
    CHECK_THROWS_AS(ansatz_to_grid(*two, Qpd::husimi, spec), ConfigError);
}
