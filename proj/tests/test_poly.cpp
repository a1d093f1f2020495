#include <cmath>
#include <vector>

#include "doctest.h"
#include "phasespace/common.hpp"
#include "phasespace/poly.hpp"
#include "phasespace/rng.hpp"

using namespace phasespace;

namespace {

std::vector<double> random_point(int n, Rng& rng) {
    std::vector<double> x(n);
    for (auto& v : x) v = 3.0 * (rng.uniform() - 0.5);
    return x;
}

// 2 x1^2 x2 - 0.5 x4 in four variables
PolyExpr sample_poly() {
    PolyExpr p = PolyExpr::monomial(4, {{0, 2}, {1, 1}}, 2.0);
    return p + PolyExpr::monomial(4, {{3, 1}}, -0.5);
}

}  // namespace

TEST_CASE("construction and evaluation") {
    PolyExpr c = PolyExpr::constant(3, 4.25);
    double x[3] = {1.0, -2.0, 7.0};
    CHECK(c.eval(x) == 4.25);
    CHECK(c.degree() == 0);

    PolyExpr p = sample_poly();
    double y[4] = {2.0, 3.0, -1.0, 4.0};
    CHECK(p.eval(y) == doctest::Approx(2.0 * 4.0 * 3.0 - 0.5 * 4.0));
    CHECK(p.degree() == 3);
    CHECK_FALSE(p.is_zero());
    CHECK(PolyExpr(4).is_zero());
}

TEST_CASE("terms merge and cancel under canonicalization") {
    PolyExpr p(2);
    p.add_term({1, 0}, 1.5);
    p.add_term({0, 1}, 2.0);
    p.add_term({1, 0}, 0.5);
    p.canonicalize();
    CHECK(p.terms().size() == 2);

    PolyExpr q(2);
    q.add_term({1, 1}, 3.0);
    q.add_term({1, 1}, -3.0);
    q.canonicalize();
    CHECK(q.is_zero());

    PolyExpr r(2);
    r.add_term({2, 0}, 1.0);
    r.add_term({0, 2}, 1e-17);  // far below the relative floor
    r.canonicalize();
    CHECK(r.terms().size() == 1);
}

TEST_CASE("arithmetic agrees with pointwise evaluation") {
    Rng rng(5, 0);
    PolyExpr a = sample_poly();
    PolyExpr b = PolyExpr::monomial(4, {{1, 2}}, 1.25) + PolyExpr::constant(4, -0.75);

    PolyExpr sum = a + b;
    PolyExpr diff = a - b;
    PolyExpr prod = a * b;
    PolyExpr sc = a.scaled(-2.5);

    for (int k = 0; k < 25; ++k) {
        auto x = random_point(4, rng);
        double av = a.eval(x.data()), bv = b.eval(x.data());
        CHECK(sum.eval(x.data()) == doctest::Approx(av + bv).epsilon(1e-13));
        CHECK(diff.eval(x.data()) == doctest::Approx(av - bv).epsilon(1e-13));
        CHECK(prod.eval(x.data()) == doctest::Approx(av * bv).epsilon(1e-13));
        CHECK(sc.eval(x.data()) == doctest::Approx(-2.5 * av).epsilon(1e-13));
    }
    CHECK(prod.degree() == a.degree() + b.degree());
}

TEST_CASE("symbolic derivative matches finite differences") {
    Rng rng(6, 0);
    PolyExpr a = sample_poly();
    PolyExpr b = PolyExpr::monomial(4, {{0, 1}, {2, 3}}, 0.7);
    PolyExpr p = a * b + a;

    const double h = 1e-5;
    for (int var = 0; var < 4; ++var) {
        PolyExpr d = p.derivative(var);
        for (int k = 0; k < 10; ++k) {
            auto x = random_point(4, rng);
            auto xp = x, xm = x;
            xp[var] += h;
            xm[var] -= h;
            double fd = (p.eval(xp.data()) - p.eval(xm.data())) / (2.0 * h);
            CHECK(d.eval(x.data()) == doctest::Approx(fd).epsilon(1e-6));
        }
    }

    CHECK(PolyExpr::constant(2, 3.0).derivative(0).is_zero());
    // d/dx1 (2 x1^2 x2) = 4 x1 x2
    PolyExpr dref = PolyExpr::monomial(4, {{0, 1}, {1, 1}}, 4.0);
    CHECK(sample_poly().derivative(0).same_as(dref, 1e-14));
}

TEST_CASE("same_as is order-insensitive") {
    PolyExpr p(3);
    p.add_term({1, 0, 2}, 1.0);
    p.add_term({0, 1, 0}, -2.0);
    PolyExpr q(3);
    q.add_term({0, 1, 0}, -2.0);
    q.add_term({1, 0, 2}, 1.0);
    CHECK(p.same_as(q, 0.0));

    PolyExpr r = q;
    r.add_term({0, 0, 1}, 1e-3);
    CHECK_FALSE(p.same_as(r, 1e-6));
    CHECK(p.max_abs_coeff() == 2.0);
}

TEST_CASE("rendering") {
    CHECK(sample_poly().to_string() == "-0.5 x4 + 2 x1^2 x2");
    CHECK(PolyExpr(2).to_string() == "0");
    CHECK(PolyExpr::constant(1, -1.0).to_string() == "-1");
}

TEST_CASE("hash tracks content") {
    auto digest = [](const PolyExpr& p) {
        Fnv1a h;
        p.hash_into(h);
        return h.hex();
    };
    PolyExpr a = sample_poly();
    PolyExpr b = sample_poly();
    CHECK(digest(a) == digest(b));
    CHECK(digest(a) != digest(a.scaled(1.0 + 1e-9)));
    CHECK(digest(a) != digest(PolyExpr(4)));
}
