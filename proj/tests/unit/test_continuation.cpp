#include <stdexcept>
#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "dml/continuation.hpp"
#include "dml/codim2.hpp"

using namespace dml;

namespace {

// in-test oracle: fold abscissae at fixed gamma by direct bisection of
// det(x) = A a e^(ax) - gamma (2x - 3x^2), independent of the branch code
std::vector<double> fold_roots(const OriginalParams& p, double gamma) {
    auto det = [&](double x) {
        return p.A * p.alpha * std::exp(p.alpha * x) -
               gamma * (2 * x - 3 * x * x);
    };
    std::vector<double> roots;
    const int n = 2000;
    double xa = 1e-6, fa = det(xa);
    for (int i = 1; i <= n; ++i) {
        const double xb = 1e-6 + (2.0 / 3 - 2e-6) * i / n;
        const double fb = det(xb);
        if (fa * fb < 0) {
            double lo = xa, hi = xb, flo = fa;
            while (hi - lo > 1e-15) {
                const double m = 0.5 * (lo + hi);
                const double fm = det(m);
                if (flo * fm <= 0) hi = m;
                else { lo = m; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        xa = xb;
        fa = fb;
    }
    return roots;
}

double I_of_x(double x, double gamma, const OriginalParams& p) {
    return (p.A / gamma) * std::exp(p.alpha * x) - x * x * (1 - x);
}

Branch branch_at_gamma(double gamma, double lo, double hi) {
    OriginalParams p;
    p.gamma = gamma;
    p.I = 0.5 * (lo + hi);
    const auto eqs = find_equilibria(p);
    REQUIRE(!eqs.equilibria.empty());
    return continue_equilibrium(eqs.equilibria.front(), p, FreeParam::I, lo,
                                hi);
}

}  // namespace

TEST_CASE("branch at gamma 0.28 carries the expected bifurcation set") {
    const Branch br = branch_at_gamma(0.28, -0.05, 0.1);
    CHECK(br.complete);
    REQUIRE(br.points.size() > 20);

    int folds = 0, hopfs = 0, neutrals = 0;
    const BifurcationPoint* hopf = nullptr;
    const BifurcationPoint* neutral = nullptr;
    std::vector<double> fold_I;
    for (const auto& b : br.bifurcations) {
        if (b.kind == BifKind::fold) {
            ++folds;
            fold_I.push_back(b.I);
        }
        if (b.kind == BifKind::hopf) {
            ++hopfs;
            hopf = &b;
        }
        if (b.kind == BifKind::neutral_saddle) {
            ++neutrals;
            neutral = &b;
        }
    }
    CHECK(folds == 2);
    CHECK(hopfs == 1);
    CHECK(neutrals == 1);

    // oracle: fold abscissae from direct bisection, then I on the manifold
    OriginalParams p;
    p.gamma = 0.28;
    const auto roots = fold_roots(p, 0.28);
    REQUIRE(roots.size() == 2);
    std::vector<double> fold_I_oracle = {I_of_x(roots[0], 0.28, p),
                                         I_of_x(roots[1], 0.28, p)};
    std::sort(fold_I.begin(), fold_I.end());
    std::sort(fold_I_oracle.begin(), fold_I_oracle.end());
    for (int i = 0; i < 2; ++i)
        CHECK(std::abs(fold_I[i] - fold_I_oracle[i]) < 1e-8);
    CHECK(fold_I_oracle[1] == doctest::Approx(0.0167).epsilon(2e-3));
    CHECK(fold_I_oracle[0] == doctest::Approx(0.0076).epsilon(2e-2));

    // Hopf: trace-zero abscissae are the roots of 3x^2 - 2x + 0.28,
    // x = 0.2 (neutral, det < 0) and x = 7/15 (genuine)
    REQUIRE(hopf != nullptr);
    REQUIRE(neutral != nullptr);
    CHECK(std::abs(hopf->state.x - 7.0 / 15.0) < 1e-8);
    CHECK(std::abs(hopf->I - I_of_x(7.0 / 15.0, 0.28, p)) < 1e-8);
    CHECK(hopf->I == doctest::Approx(0.0556).epsilon(1e-3));
    CHECK(std::abs(neutral->state.x - 0.2) < 1e-8);
    CHECK(neutral->I == doctest::Approx(0.0101).epsilon(1e-2));

    // at the Hopf the eigenvalues are +-i w0 with w0^2 = det
    const double det_at_hopf =
        p.A * p.alpha * std::exp(p.alpha * hopf->state.x) - 0.28 * 0.28;
    CHECK(std::abs(hopf->eig2.imag() * hopf->eig2.imag() - det_at_hopf) <
          1e-8);
    CHECK(std::abs(hopf->eig2.real()) < 1e-10);
    CHECK(hopf->l1.has_value());
}

TEST_CASE("no folds below the cusp value of gamma") {
    const Branch br = branch_at_gamma(0.2, -0.05, 0.1);
    for (const auto& b : br.bifurcations) CHECK(b.kind != BifKind::fold);
    OriginalParams p;
    CHECK(fold_roots(p, 0.2).empty());
}

TEST_CASE("stability flags change only across bifurcation markers") {
    const Branch br = branch_at_gamma(0.28, -0.05, 0.1);
    for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
        const auto& a = br.points[i];
        const auto& b = br.points[i + 1];
        const bool sa = a.det > 0 && a.trace < 0;
        const bool sb = b.det > 0 && b.trace < 0;
        if (sa != sb) {
            // a bifurcation must sit between the two parameter/state pairs
            bool covered = false;
            for (const auto& bif : br.bifurcations) {
                const double lo = std::min(a.state.x, b.state.x);
                const double hi = std::max(a.state.x, b.state.x);
                if (bif.state.x >= lo - 1e-9 && bif.state.x <= hi + 1e-9)
                    covered = true;
            }
            CHECK(covered);
        }
    }
}

TEST_CASE("restart and direction reversibility") {
    OriginalParams p;
    p.gamma = 0.28;
    p.I = 0.03;
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.equilibria.size() == 1);
    const Branch a =
        continue_equilibrium(eqs.equilibria[0], p, FreeParam::I, 0.0, 0.06);
    // restart from an interior point of the branch
    const auto& mid = a.points[a.points.size() / 2];
    OriginalParams pm = p;
    pm.I = mid.param;
    const auto e2 = classify_equilibrium(mid.state, pm);
    const Branch b = continue_equilibrium(e2, pm, FreeParam::I, 0.0, 0.06);
    REQUIRE(!b.points.empty());
    // identical rerun is bit-identical (determinism)
    const Branch a2 =
        continue_equilibrium(eqs.equilibria[0], p, FreeParam::I, 0.0, 0.06);
    REQUIRE(a2.points.size() == a.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a2.points[i].param == a.points[i].param);
        CHECK(a2.points[i].state.x == a.points[i].state.x);
    }
    // the restarted branch lies on the same curve: every point is within
    // chord-deviation distance of the original polyline (the branch is
    // S-shaped in I, so matching must be geometric, not by parameter)
    for (std::size_t i = 0; i < b.points.size(); i += 5) {
        const auto& q = b.points[i];
        double best = 1e300;
        for (std::size_t j = 0; j + 1 < a.points.size(); ++j) {
            const auto& p1 = a.points[j];
            const auto& p2 = a.points[j + 1];
            const double vx = p2.state.x - p1.state.x;
            const double vp = p2.param - p1.param;
            const double wx = q.state.x - p1.state.x;
            const double wp = q.param - p1.param;
            const double len2 = vx * vx + vp * vp;
            double s = len2 > 0 ? (wx * vx + wp * vp) / len2 : 0.0;
            s = std::clamp(s, 0.0, 1.0);
            const double dx = wx - s * vx, dp = wp - s * vp;
            best = std::min(best, std::sqrt(dx * dx + dp * dp));
        }
        CHECK(best < 1e-3);
    }
    // bifurcation locations agree to 1e-8 between the two runs
    REQUIRE(a.bifurcations.size() == b.bifurcations.size());
    for (std::size_t i = 0; i < a.bifurcations.size(); ++i) {
        CHECK(std::abs(a.bifurcations[i].I - b.bifurcations[i].I) < 1e-8);
        CHECK(std::abs(a.bifurcations[i].state.x - b.bifurcations[i].state.x) <
              1e-8);
    }
}

TEST_CASE("branch points satisfy the equilibrium residual") {
    const Branch br = branch_at_gamma(0.28, -0.02, 0.08);
    OriginalParams p;
    p.gamma = 0.28;
    for (std::size_t i = 0; i < br.points.size(); i += 3) {
        p.I = br.points[i].param;
        const State2 r = rhs_original(br.points[i].state, p);
        CHECK(std::abs(r.x) < 1e-10);
        CHECK(std::abs(r.y) < 1e-10);
    }
}

TEST_CASE("first Lyapunov coefficient") {
    OriginalParams p;
    p.gamma = 0.28;

    SUBCASE("route agreement with the reduced closed form") {
        // independent oracle: with f quadratic only in x and g exponential,
        // the transformed system has F, G depending on u alone and the
        // formula collapses to 16 l1 = fxxx - fxx (gxx - a11 fxx) / det
        for (double x : {7.0 / 15.0, 0.40, 0.43, 0.35}) {
            const double g = 2 * x - 3 * x * x;
            OriginalParams q;
            q.gamma = g;
            q.I = I_of_x(x, g, q);
            const double y = x * x * (1 - x) + q.I;
            const double det =
                q.A * q.alpha * std::exp(q.alpha * x) - g * g;
            REQUIRE(det > 0);
            const double fxx = 2 - 6 * x;
            const double gxx = q.A * q.alpha * q.alpha * std::exp(q.alpha * x);
            const double l1_ref =
                (-6.0 - fxx * (gxx - g * fxx) / det) / 16.0;
            const double l1 = first_lyapunov_coefficient({x, y}, q);
            CHECK(l1 == doctest::Approx(l1_ref).epsilon(1e-10));
        }
    }
    SUBCASE("rejects non-Hopf points") {
        p.I = 0.013;
        const auto eqs = find_equilibria(p);
        REQUIRE(eqs.equilibria.size() == 3);
        // middle equilibrium is a saddle: det < 0
        CHECK_THROWS_AS(
            first_lyapunov_coefficient(eqs.equilibria[1].state, p),
            std::invalid_argument);
    }
}

TEST_CASE("locate_fold postconditions on a synthetic bracket") {
    OriginalParams p;
    p.gamma = 0.28;
    const Branch br = branch_at_gamma(0.28, -0.05, 0.1);
    for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
        const auto& a = br.points[i];
        const auto& b = br.points[i + 1];
        if (a.det * b.det < 0) {
            const auto fold = locate_fold(a, b, p, FreeParam::I);
            OriginalParams q = p;
            q.I = fold.I;
            const Jacobian2 J = jacobian_original(fold.state, q);
            CHECK(std::abs(J.det()) < 1e-10);
            const State2 r = rhs_original(fold.state, q);
            CHECK(std::abs(r.x) < 1e-10);
            CHECK(std::abs(r.y) < 1e-10);
            // det = 0 in the plane forces a zero eigenvalue
            CHECK(std::abs(fold.eig1.real()) < 1e-8);
            CHECK(std::abs(fold.eig1.imag()) < 1e-8);
        }
    }
}

TEST_CASE("cycle envelope across the gamma = 0.32 supercritical Hopf") {
    OriginalParams p;
    p.gamma = 0.32;
    // Hopf at x = 0.4 for this gamma
    const double IH = I_of_x(0.4, 0.32, p);
    EnvelopeSettings es;
    es.horizon = 20000;
    es.transient_fraction = 0.8;

    SUBCASE("no cycle on the stable side") {
        const auto env =
            cycle_envelope(p, FreeParam::I, IH + 0.002, IH + 0.004, 2, es);
        for (const auto& s : env) {
            CHECK(!s.cycle);
            CHECK(s.x_max - s.x_min < 1e-6);
        }
    }
    SUBCASE("cycle just past the Hopf on the unstable side") {
        const auto env =
            cycle_envelope(p, FreeParam::I, IH - 0.002, IH - 0.001, 2, es);
        for (const auto& s : env) {
            CHECK(s.cycle);
            CHECK(s.x_max - s.x_min > 0.05);
        }
    }
}
