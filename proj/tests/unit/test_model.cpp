#include <stdexcept>
#include <limits>
#include <cmath>
#include <random>

#include <doctest.h>

#include "dml/model.hpp"

using namespace dml;

namespace {

const OriginalParams kDefaults{};  // A = 0.0041, alpha = 5.276

// centered finite differences of rhs_original, the independent route for
// every analytic derivative below
State2 rhs_at(double x, double y, const OriginalParams& p) {
    return rhs_original({x, y}, p);
}

}  // namespace

TEST_CASE("rhs_original matches hand evaluation") {
    OriginalParams p;
    p.gamma = 0.315;
    p.I = 0.0;

    SUBCASE("origin") {
        const State2 d = rhs_original({0, 0}, p);
        CHECK(d.x == 0.0);
        CHECK(d.y == doctest::Approx(0.0041).epsilon(1e-14));
    }
    SUBCASE("x = 1: cubic term vanishes, dy = A e^alpha") {
        const State2 d = rhs_original({1, 0}, p);
        CHECK(d.x == 0.0);
        CHECK(d.y == doctest::Approx(0.0041 * std::exp(5.276)).epsilon(1e-14));
        CHECK(d.y == doctest::Approx(0.8019).epsilon(1e-3));
    }
    SUBCASE("interior point") {
        p.I = 0.013;
        p.gamma = 0.315;
        const State2 d = rhs_original({0.5, 0.1}, p);
        CHECK(d.x == doctest::Approx(0.125 - 0.1 + 0.013).epsilon(1e-15));
        const double dy = 0.0041 * std::exp(5.276 * 0.5) - 0.315 * 0.1;
        CHECK(d.y == doctest::Approx(dy).epsilon(1e-15));
        CHECK(d.y == doctest::Approx(0.02584).epsilon(1e-3));
    }
    SUBCASE("non-finite input rejected") {
        CHECK_THROWS_AS(rhs_original({NAN, 0}, p), std::domain_error);
        CHECK_THROWS_AS(
            rhs_original({0, std::numeric_limits<double>::infinity()}, p),
            std::domain_error);
    }
}

TEST_CASE("parameter validation") {
    OriginalParams p;
    p.gamma = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.gamma = 0.2;
    p.A = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    ImprovedParams q;
    q.omega = 0.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}

TEST_CASE("rho is even and matches closed form") {
    ImprovedParams p;
    CHECK(rho(0.0, p) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(rho(1.0, p) == doctest::Approx(0.16).epsilon(1e-15));
    for (double c : {0.3, 1.7, 42.0})
        CHECK(rho(c, p) == rho(-c, p));
}

TEST_CASE("rhs_improved") {
    ImprovedParams p;

    SUBCASE("origin at t = 0: only A and phi_ext survive") {
        const State3 d = rhs_improved({0, 0, 0}, 0.0, p);
        CHECK(d.x == 0.0);
        CHECK(d.y == doctest::Approx(0.0041).epsilon(1e-14));
        CHECK(d.phi == doctest::Approx(0.2).epsilon(1e-14));
    }
    SUBCASE("hand evaluation with forcing and coupling") {
        p.I0 = 0.02;
        p.gamma = 0.315;
        const State3 d = rhs_improved({0.5, 0.1, 0.2}, 0.0, p);
        const double rho_v = 0.1 + 3 * 0.02 * 0.04;
        CHECK(d.x ==
              doctest::Approx(0.125 - 0.1 + 0.003 * rho_v * 0.5).epsilon(1e-14));
        CHECK(d.x == doctest::Approx(0.025154).epsilon(1e-4));
        CHECK(d.phi ==
              doctest::Approx(0.19 * 0.5 - 0.5 * 0.2 + 0.2).epsilon(1e-14));
    }
    SUBCASE("k = 0, I0 = 0 reduces bit-for-bit to rhs_original at I = 0") {
        p.k = 0.0;
        p.I0 = 0.0;
        OriginalParams po = p.planar();
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const State3 s{u(rng), u(rng), u(rng)};
            const State3 d3 = rhs_improved(s, u(rng) * 100.0, p);
            const State2 d2 = rhs_original(s.xy(), po);
            CHECK(d3.x == d2.x);  // exact, same evaluation order
            CHECK(d3.y == d2.y);
        }
    }
}

TEST_CASE("jacobian_original against spec anchors") {
    OriginalParams p;
    p.gamma = 0.28;

    SUBCASE("x = 0 row structure") {
        const Jacobian2 J = jacobian_original({0, 0}, p);
        CHECK(J.a11 == 0.0);
        CHECK(J.a12 == -1.0);
        CHECK(J.a21 == doctest::Approx(0.0041 * 5.276).epsilon(1e-14));
        CHECK(J.a21 == doctest::Approx(0.0216316).epsilon(1e-5));
    }
    SUBCASE("closed-form determinant at x = 0.2") {
        const Jacobian2 J = jacobian_original({0.2, 0.05}, p);
        const double det_ref =
            -0.28 * 0.28 + 0.0041 * 5.276 * std::exp(5.276 * 0.2);
        CHECK(J.det() == doctest::Approx(det_ref).epsilon(1e-14));
        CHECK(J.det() == doctest::Approx(-0.01626).epsilon(1e-3));
    }
    SUBCASE("trace identity") {
        for (double x : {-0.5, 0.0, 0.3, 1.0}) {
            const Jacobian2 J = jacobian_original({x, 0.1}, p);
            CHECK(J.trace() ==
                  doctest::Approx(2 * x - 3 * x * x - p.gamma).epsilon(1e-14));
        }
    }
}

TEST_CASE("higher partials: structure and anchors") {
    OriginalParams p;
    const HigherPartials h0 = higher_partials({0, 0}, p);
    CHECK(h0.fxxx == -6.0);
    CHECK(h0.gyy == 0.0);
    CHECK(h0.gxx == doctest::Approx(0.0041 * 5.276 * 5.276).epsilon(1e-14));
    CHECK(h0.gxx == doctest::Approx(0.114133).epsilon(1e-4));
    for (double x : {-0.7, 0.1, 0.9}) {
        const HigherPartials h = higher_partials({x, 0.2}, p);
        CHECK(h.fxxx == -6.0);
        CHECK(h.fxx == doctest::Approx(2 - 6 * x).epsilon(1e-14));
        CHECK(h.fxy == 0.0);
        CHECK(h.fyy == 0.0);
        CHECK(h.gxy == 0.0);
    }
}

TEST_CASE("finite-difference consistency of all analytic partials") {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.01;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    auto rel_err = [](double fd, double an) {
        return std::abs(fd - an) / std::max(std::abs(an), 1.0);
    };

    for (int trial = 0; trial < 100; ++trial) {
        const double x = u(rng), y = u(rng);

        // first order, h = 1e-6
        {
            const double h = 1e-6;
            const State2 px = rhs_at(x + h, y, p), mx = rhs_at(x - h, y, p);
            const State2 py = rhs_at(x, y + h, p), my = rhs_at(x, y - h, p);
            const Jacobian2 J = jacobian_original({x, y}, p);
            CHECK(rel_err((px.x - mx.x) / (2 * h), J.a11) < 1e-6);
            CHECK(rel_err((py.x - my.x) / (2 * h), J.a12) < 1e-6);
            CHECK(rel_err((px.y - mx.y) / (2 * h), J.a21) < 1e-6);
            CHECK(rel_err((py.y - my.y) / (2 * h), J.a22) < 1e-6);
        }
        const HigherPartials hp = higher_partials({x, y}, p);
        // second order, h = 1e-4
        {
            const double h = 1e-4;
            const State2 c = rhs_at(x, y, p);
            const State2 px = rhs_at(x + h, y, p), mx = rhs_at(x - h, y, p);
            const State2 py = rhs_at(x, y + h, p), my = rhs_at(x, y - h, p);
            const State2 pp = rhs_at(x + h, y + h, p),
                         pm = rhs_at(x + h, y - h, p),
                         mp = rhs_at(x - h, y + h, p),
                         mm = rhs_at(x - h, y - h, p);
            CHECK(rel_err((px.x - 2 * c.x + mx.x) / (h * h), hp.fxx) < 1e-5);
            CHECK(rel_err((px.y - 2 * c.y + mx.y) / (h * h), hp.gxx) < 1e-5);
            CHECK(rel_err((py.x - 2 * c.x + my.x) / (h * h), hp.fyy) < 1e-5);
            CHECK(rel_err((py.y - 2 * c.y + my.y) / (h * h), hp.gyy) < 1e-5);
            CHECK(rel_err((pp.x - pm.x - mp.x + mm.x) / (4 * h * h), hp.fxy) <
                  1e-5);
            CHECK(rel_err((pp.y - pm.y - mp.y + mm.y) / (4 * h * h), hp.gxy) <
                  1e-5);
        }
        // third order in x, h = 7e-4 (the only nonzero third partials are
        // in x; the y-direction ones vanish and are checked via fd ~ 0)
        {
            const double h = 7e-4;
            const State2 p2 = rhs_at(x + 2 * h, y, p),
                         p1 = rhs_at(x + h, y, p), m1 = rhs_at(x - h, y, p),
                         m2 = rhs_at(x - 2 * h, y, p);
            const double fd_f =
                (p2.x - 2 * p1.x + 2 * m1.x - m2.x) / (2 * h * h * h);
            const double fd_g =
                (p2.y - 2 * p1.y + 2 * m1.y - m2.y) / (2 * h * h * h);
            CHECK(rel_err(fd_f, hp.fxxx) < 1e-5);
            CHECK(rel_err(fd_g, hp.gxxx) < 1e-5);
            const State2 q2 = rhs_at(x, y + 2 * h, p),
                         q1 = rhs_at(x, y + h, p), r1 = rhs_at(x, y - h, p),
                         r2 = rhs_at(x, y - 2 * h, p);
            CHECK(rel_err((q2.x - 2 * q1.x + 2 * r1.x - r2.x) /
                              (2 * h * h * h),
                          hp.fyyy) < 1e-5);
            CHECK(rel_err((q2.y - 2 * q1.y + 2 * r1.y - r2.y) /
                              (2 * h * h * h),
                          hp.gyyy) < 1e-5);
        }
    }
}

TEST_CASE("determinism of repeated evaluation") {
    OriginalParams p;
    p.gamma = 0.2;
    p.I = 0.07;
    const State2 a = rhs_original({0.3, 0.05}, p);
    for (int i = 0; i < 10; ++i) {
        const State2 b = rhs_original({0.3, 0.05}, p);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
    }
}
