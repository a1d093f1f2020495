#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "phasespace/fock_oracle.hpp"
#include "phasespace/gridfield.hpp"
#include "phasespace/model.hpp"
#include "phasespace/rng.hpp"

using namespace phasespace;

namespace {

FockOracle::Dense random_hermitian(int dim, Rng& rng) {
    FockOracle::Dense m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = cplx(rng.normal(), rng.normal());
    return 0.5 * (m + m.adjoint().eval());
}

}  // namespace

TEST_CASE("liouvillian closed forms") {
    SUBCASE("vacuum is dark under pure loss") {
        ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
        FockOracle oracle(m, {12});
        FockOracle::Dense rho = FockOracle::Dense::Zero(12, 12);
        rho(0, 0) = 1.0;
        CHECK(oracle.generator(rho).norm() < 1e-14);
    }

    SUBCASE("detuning rotates an off-diagonal element") {
        ModelSpec m = ModelSpec::single_mode(2.0, 0, 0, 0, 0, 0, 0);
        FockOracle oracle(m, {6});
        FockOracle::Dense rho = FockOracle::Dense::Zero(6, 6);
        rho(1, 0) = 1.0;
        FockOracle::Dense out = oracle.generator(rho);
        CHECK(std::abs(out(1, 0) - cplx(0.0, -2.0)) < 1e-13);
        out(1, 0) = 0.0;
        CHECK(out.norm() < 1e-13);
    }

    SUBCASE("trace and hermiticity are preserved in form") {
        ModelSpec m = ModelSpec::single_mode(1.0, 0.2, 0.3, 0.1, 1.0, 0.2, 0.15);
        FockOracle oracle(m, {8});
        ModelSpec two = ModelSpec::chain(2, 0.5, 0.1, {0.2}, 0.6, 1.0, 0.0, false);
        FockOracle oracle2(two, {5, 5});
        Rng rng(4, 0);
        for (int trial = 0; trial < 100; ++trial) {
            FockOracle::Dense rho = random_hermitian(8, rng);
            FockOracle::Dense out = oracle.generator(rho);
            CHECK(std::abs(out.trace()) < 1e-12 * rho.norm());
            CHECK((out - out.adjoint().eval()).norm() < 1e-12 * out.norm());

            FockOracle::Dense rho2 = random_hermitian(25, rng);
            CHECK(std::abs(oracle2.generator(rho2).trace()) < 1e-12 * rho2.norm());
        }
    }

    SUBCASE("dimension guard and cutoff validation") {
        ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1, 0, 0);
        CHECK_THROWS_AS(FockOracle(m, {5000}), ConfigError);
        CHECK_THROWS_AS(FockOracle(m, {1}), ConfigError);
        ModelSpec two = ModelSpec::chain(2, 0, 0, {0.0}, 0.1, 1, 0, false);
        CHECK_THROWS_AS(FockOracle(two, {70, 70}), ConfigError);
        CHECK_THROWS_AS(FockOracle(two, {8, 8, 8}), ConfigError);
    }
}

TEST_CASE("damped coherent state follows the analytic trajectory") {
    ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
    FockOracle oracle(m, {30});
    FockOracle::Dense rho = oracle.coherent_state({cplx(2.0, 0.0)});

    double worst = 0.0;
    oracle.evolve(rho, 1.0, 1e-3, 100, [&](double t, const FockOracle::Dense& r) {
        cplx want = 2.0 * std::exp(-0.5 * t);
        worst = std::max(worst, std::abs(oracle.expval_a(r, 0) - want));
        CHECK(oracle.trace_error(r) < 1e-8);
        CHECK(oracle.hermiticity_error(r) < 1e-12);
        CHECK(oracle.min_eigenvalue(r) > -1e-10);
    });
    CHECK(worst <= 1e-6);
    CHECK(oracle.edge_occupation(rho) < 1e-10);
}

TEST_CASE("detuned decay matches the linear heisenberg solution") {
    ModelSpec m = ModelSpec::single_mode(2.0, 0, 0, 0, 1.0, 0, 0);
    FockOracle oracle(m, {30});
    FockOracle::Dense rho = oracle.coherent_state({cplx(2.0, 0.0)});

    double worst = 0.0;
    oracle.evolve(rho, 1.0, 1e-3, 200, [&](double t, const FockOracle::Dense& r) {
        cplx want = 2.0 * std::exp(cplx(-0.5, -2.0) * t);
        worst = std::max(worst, std::abs(oracle.expval_a(r, 0) - want));
    });
    CHECK(worst <= 1e-6);
}

TEST_CASE("kerr benchmark run keeps the cutoff honest") {
    ModelSpec m = ModelSpec::single_mode(2.0, 0.1, 0, 0, 1.0, 0, 0);
    FockOracle oracle(m, {30});
    FockOracle::Dense rho = oracle.coherent_state({cplx(2.0, 0.0)});
    oracle.evolve(rho, 1.0, 1e-3, 1000, nullptr);
    CHECK(oracle.edge_occupation(rho) < 1e-10);
    CHECK(rho(29, 29).real() < 1e-10);

    // doubling the cutoff leaves the observables unchanged
    FockOracle wide(m, {60});
    FockOracle::Dense rho2 = wide.coherent_state({cplx(2.0, 0.0)});
    wide.evolve(rho2, 1.0, 1e-3, 1000, nullptr);
    CHECK(std::abs(wide.expval_n(rho2, 0) - oracle.expval_n(rho, 0)) < 1e-8);
    CHECK(std::abs(wide.expval_a(rho2, 0) - oracle.expval_a(rho, 0)) < 1e-8);
}

TEST_CASE("unstable step size aborts on trace drift") {
    ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
    FockOracle oracle(m, {30});
    FockOracle::Dense rho = oracle.coherent_state({cplx(2.0, 0.0)});
    CHECK_THROWS(oracle.evolve(rho, 4.0, 0.2, 1, nullptr));
}

TEST_CASE("qpd grids from the density matrix") {
    ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
    FockOracle oracle(m, {30});

    SUBCASE("vacuum values at the origin") {
        FockOracle::Dense vac = FockOracle::Dense::Zero(30, 30);
        vac(0, 0) = 1.0;
        GridSpec spec = GridSpec::square2d(5.0, 101);  // odd count: grid hits 0
        GridField q = oracle.qpd_grid(vac, Qpd::husimi, spec);
        GridField w = oracle.qpd_grid(vac, Qpd::wigner, spec);
        int center = (101 * 101 - 1) / 2;
        CHECK(q.values[center] == doctest::Approx(1.0 / kPi).epsilon(1e-10));
        CHECK(w.values[center] == doctest::Approx(2.0 / kPi).epsilon(1e-10));
        CHECK(q.integral() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-3));
        CHECK_THROWS_AS(oracle.qpd_grid(vac, Qpd::glauber, spec), ConfigError);
    }

    SUBCASE("coherent husimi grid equals the analytic gaussian") {
        cplx alpha(1.2, 0.3);
        FockOracle::Dense rho = oracle.coherent_state({alpha});
        GridSpec spec = GridSpec::square2d(5.0, 101);
        GridField q = oracle.qpd_grid(rho, Qpd::husimi, spec);
        double worst = 0.0;
        std::vector<double> x(2);
        for (int i = 0; i < spec.total_points(); ++i) {
            q.point(i, x.data());
            double d2 = (x[0] - alpha.real()) * (x[0] - alpha.real()) +
                        (x[1] - alpha.imag()) * (x[1] - alpha.imag());
            worst = std::max(worst, std::abs(q.values[i] - std::exp(-d2) / kPi));
        }
        CHECK(worst < 1e-8);
    }

    SUBCASE("first moment of the husimi grid reproduces the amplitude") {
        cplx alpha(1.1, -0.7);
        FockOracle::Dense rho = oracle.coherent_state({alpha});
        GridSpec spec = GridSpec::square2d(6.0, 161);
        GridField q = oracle.qpd_grid(rho, Qpd::husimi, spec);
        double vol = spec.cell_volume();
        cplx first = 0.0;
        std::vector<double> x(2);
        for (int i = 0; i < spec.total_points(); ++i) {
            q.point(i, x.data());
            first += q.values[i] * cplx(x[0], x[1]) * vol;
        }
        CHECK(std::abs(first - oracle.expval_a(rho, 0)) < 1e-4);
    }

    SUBCASE("even cat wigner function dips negative") {
        FockOracle::Dense cat = oracle.cat_state(cplx(2.0, 0.0), 1);
        GridField w = oracle.qpd_grid(cat, Qpd::wigner, GridSpec::square2d(4.0, 121));
        CHECK(w.min_value() < -0.05);
        CHECK(w.max_value() > 0.5);
        CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-3));
    }
}

TEST_CASE("partial trace of a product state is the single-mode state") {
    ModelSpec two = ModelSpec::chain(2, 0, 0, {0.0}, 0.0, 1.0, 0, false);
    FockOracle oracle(two, {10, 10});
    FockOracle::Dense rho = oracle.coherent_state({cplx(0.9, 0.2), cplx(-0.4, 0.6)});

    ModelSpec one = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
    FockOracle single(one, {10});
    for (int keep = 0; keep < 2; ++keep) {
        cplx a = (keep == 0) ? cplx(0.9, 0.2) : cplx(-0.4, 0.6);
        FockOracle::Dense want = single.coherent_state({a});
        FockOracle::Dense got = oracle.partial_trace(rho, keep);
        REQUIRE(got.rows() == 10);
        CHECK((got - want).norm() < 1e-10);
    }
}

TEST_CASE("steady states") {
    SUBCASE("pure loss relaxes to vacuum") {
        ModelSpec m = ModelSpec::single_mode(0, 0, 0, 0, 1.0, 0, 0);
        FockOracle oracle(m, {20});
        bool ok = false;
        FockOracle::Dense ss = oracle.steady_state(oracle.coherent_state({cplx(1.5, 0.5)}),
                                                   1e-3, 1e-9, 60.0, &ok);
        CHECK(ok);
        CHECK(ss(0, 0).real() >= 1.0 - 1e-8);
        CHECK(oracle.generator(ss).norm() < 1e-9);
    }

    SUBCASE("driven kerr steady state is step-size independent") {
        ModelSpec m = ModelSpec::single_mode(2.0, 0.07, 0.3, 0, 1.0, 0, 0);
        FockOracle oracle(m, {16});
        bool ok1 = false, ok2 = false;
        FockOracle::Dense a = oracle.steady_state(oracle.coherent_state({cplx(0.0, 0.0)}),
                                                  2e-3, 1e-9, 80.0, &ok1);
        FockOracle::Dense b = oracle.steady_state(oracle.coherent_state({cplx(0.0, 0.0)}),
                                                  1e-3, 1e-9, 80.0, &ok2);
        CHECK(ok1);
        CHECK(ok2);
        double na = oracle.expval_n(a, 0);
        CHECK(na > 0.0);
        CHECK(std::isfinite(na));
        CHECK(std::abs(na - oracle.expval_n(b, 0)) < 1e-6);
    }
}

TEST_CASE("linear meanfield trajectories") {
    SUBCASE("single mode closed form") {
        ModelSpec m = ModelSpec::single_mode(2.0, 0, 0, 0, 1.0, 0, 0);
        std::vector<double> times = {0.0, 0.3, 0.7, 1.4, 2.0};
        auto traj = linear_meanfield(m, {cplx(2.0, 0.0)}, times);
        REQUIRE(traj.size() == times.size());
        for (size_t k = 0; k < times.size(); ++k) {
            cplx want = 2.0 * std::exp(cplx(-0.5, -2.0) * times[k]);
            CHECK(std::abs(traj[k][0] - want) < 1e-12);
        }
    }

    SUBCASE("two coupled modes agree with the full oracle") {
        ModelSpec m = ModelSpec::chain(2, 1.0, 0, {0.0}, 0.7, 1.0, 0, false);
        FockOracle oracle(m, {12, 12});
        FockOracle::Dense rho = oracle.coherent_state({cplx(1.0, 0.0), cplx(0.0, 0.5)});

        std::vector<double> times;
        std::vector<std::vector<cplx>> from_rho;
        oracle.evolve(rho, 1.0, 1e-3, 250, [&](double t, const FockOracle::Dense& r) {
            times.push_back(t);
            from_rho.push_back({oracle.expval_a(r, 0), oracle.expval_a(r, 1)});
        });
        auto mf = linear_meanfield(m, {cplx(1.0, 0.0), cplx(0.0, 0.5)}, times);
        for (size_t k = 0; k < times.size(); ++k) {
            CHECK(std::abs(mf[k][0] - from_rho[k][0]) < 1e-6);
            CHECK(std::abs(mf[k][1] - from_rho[k][1]) < 1e-6);
        }
    }

    SUBCASE("ring field norm decays without drive") {
        ModelSpec ring = ModelSpec::chain(6, 4.0, 0, {0.0}, 1.0, 1.0, 0, true);
        std::vector<cplx> a0 = {cplx(2, 0), cplx(1, 0), cplx(0, 1),
                                cplx(0, 2), cplx(2, 1), cplx(-1, -1)};
        std::vector<double> times;
        for (int k = 0; k <= 40; ++k) times.push_back(0.05 * k);
        auto traj = linear_meanfield(ring, a0, times);
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& frame : traj) {
            double norm2 = 0.0;
            for (cplx v : frame) norm2 += std::norm(v);
            CHECK(norm2 < prev + 1e-12);
            prev = norm2;
        }
        // uniform loss factors out of the linear dynamics exactly
        CHECK(prev == doctest::Approx(17.0 * std::exp(-2.0)).epsilon(1e-9));
    }

    SUBCASE("nonlinear models are rejected") {
        ModelSpec m = ModelSpec::single_mode(1.0, 0.1, 0, 0, 1.0, 0, 0);
        CHECK_THROWS_AS(linear_meanfield(m, {cplx(1.0, 0.0)}, {0.0, 1.0}), ConfigError);
        ModelSpec ok = ModelSpec::single_mode(1.0, 0, 0, 0, 1.0, 0, 0);
        CHECK_THROWS_AS(linear_meanfield(ok, {cplx(1.0, 0.0), cplx(0, 0)}, {0.0}),
                        ConfigError);
    }
}
