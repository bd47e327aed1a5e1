#include "dml/codim2.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "dml/integrate.hpp"

namespace dml {

namespace {

constexpr double kThird2 = 2.0 / 3.0;

double I_on_manifold(double x, double gamma, const OriginalParams& p) {
    return (p.A / gamma) * std::exp(p.alpha * x) - x * x * (1.0 - x);
}

// det(J) along the equilibrium manifold as a function of x at fixed gamma
double det_of_x(double x, double gamma, const OriginalParams& p) {
    return p.A * p.alpha * std::exp(p.alpha * x) -
           gamma * (2.0 * x - 3.0 * x * x);
}

double bisect(double lo, double hi, double flo,
              const std::function<double(double)>& f) {
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0) hi = mid;
        else { lo = mid; flo = fm; }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<ParamPlanePoint> fold_curve(const OriginalParams& p,
                                        const std::vector<double>& x_grid) {
    p.validate();
    std::vector<ParamPlanePoint> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const double q = 2.0 * x - 3.0 * x * x;
        if (!(x > 0.0 && x < kThird2) || std::abs(q) < 1e-12)
            throw std::invalid_argument(
                "fold_curve abscissa outside validity interval (0, 2/3)");
        ParamPlanePoint pt;
        pt.x_eq = x;
        pt.gamma = p.A * p.alpha * std::exp(p.alpha * x) / q;
        pt.I = I_on_manifold(x, pt.gamma, p);
        out.push_back(pt);
    }
    return out;
}

std::vector<ParamPlanePoint> hopf_curve(const OriginalParams& p,
                                        const std::vector<double>& x_grid) {
    p.validate();
    std::vector<ParamPlanePoint> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const double g = 2.0 * x - 3.0 * x * x;
        if (!(x > 0.0 && x < kThird2) || std::abs(g) < 1e-12)
            throw std::invalid_argument(
                "hopf_curve abscissa outside validity interval (0, 2/3)");
        ParamPlanePoint pt;
        pt.x_eq = x;
        pt.gamma = g;
        pt.I = I_on_manifold(x, g, p);
        pt.genuine = p.A * p.alpha * std::exp(p.alpha * x) > g * g;
        out.push_back(pt);
    }
    return out;
}

BifurcationPoint find_cusp(const OriginalParams& p) {
    p.validate();
    // 3 alpha x^2 - (2 alpha + 6) x + 2 = 0, root inside (0, 2/3)
    const double a = 3.0 * p.alpha;
    const double b = -(2.0 * p.alpha + 6.0);
    const double c = 2.0;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0)
        throw std::runtime_error("cusp quadratic has no real root");
    const double sq = std::sqrt(disc);
    double x = (-b - sq) / (2.0 * a);
    if (!(x > 0 && x < kThird2)) {
        x = (-b + sq) / (2.0 * a);
        if (!(x > 0 && x < kThird2))
            throw std::runtime_error("no admissible cusp root in (0, 2/3)");
    }
    const auto pt = fold_curve(p, {x}).front();
    BifurcationPoint bif;
    bif.kind = BifKind::cusp;
    bif.I = pt.I;
    bif.gamma = pt.gamma;
    bif.state = {x, x * x * (1.0 - x) + pt.I};
    const OriginalParams pc{p.A, p.alpha, pt.gamma, pt.I};
    const Jacobian2 J = jacobian_original(bif.state, pc);
    bif.eig1 = {0.0, 0.0};
    bif.eig2 = {J.trace(), 0.0};
    return bif;
}

double fold_merge_gamma(const OriginalParams& p) {
    p.validate();
    // min over x of det(x; gamma): positive for gamma below the cusp value,
    // dips negative above it. Golden-section for the minimum, bisection on
    // the minimum value.
    auto min_det = [&](double gamma) {
        double lo = 1e-4, hi = kThird2 - 1e-4;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = det_of_x(x1, gamma, p), f2 = det_of_x(x2, gamma, p);
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = det_of_x(x1, gamma, p);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = det_of_x(x2, gamma, p);
            }
        }
        return det_of_x(0.5 * (lo + hi), gamma, p);
    };
    double glo = 0.05, ghi = 0.45;
    double flo = min_det(glo);
    if (flo < 0) throw std::runtime_error("fold pair exists at gamma = 0.05");
    if (min_det(ghi) > 0)
        throw std::runtime_error("no fold pair below gamma = 0.45");
    return bisect(glo, ghi, flo, min_det);
}

BifurcationPoint find_generalized_hopf(const OriginalParams& p, double x_lo,
                                       double x_hi) {
    p.validate();
    auto l1_at = [&](double x) {
        const double g = 2.0 * x - 3.0 * x * x;
        if (!(p.A * p.alpha * std::exp(p.alpha * x) > g * g))
            throw std::runtime_error(
                "Hopf curve is not genuine at the requested abscissa");
        const double I = I_on_manifold(x, g, p);
        const OriginalParams pg{p.A, p.alpha, g, I};
        const State2 eq{x, x * x * (1.0 - x) + I};
        return first_lyapunov_coefficient(eq, pg);
    };
    // scan for a sign change of l1 on the genuine portion
    const int n = 200;
    double xa = x_lo, fa = l1_at(xa);
    double bx_lo = 0, bx_hi = 0;
    bool found = false;
    for (int i = 1; i <= n; ++i) {
        const double xb = x_lo + (x_hi - x_lo) * i / n;
        const double fb = l1_at(xb);
        if (fa * fb < 0) {
            bx_lo = xa;
            bx_hi = xb;
            found = true;
            break;
        }
        xa = xb;
        fa = fb;
    }
    if (!found)
        throw std::runtime_error(
            "no sign change of l1 on the genuine Hopf sub-interval");
    // bisection to |l1| < 1e-8
    double lo = bx_lo, hi = bx_hi, flo = l1_at(lo);
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double fm = l1_at(mid);
        if (std::abs(fm) < 1e-8) break;
        if (flo * fm < 0) hi = mid;
        else { lo = mid; flo = fm; }
    }
    BifurcationPoint bif;
    bif.kind = BifKind::generalized_hopf;
    const double g = 2.0 * mid - 3.0 * mid * mid;
    bif.gamma = g;
    bif.I = I_on_manifold(mid, g, p);
    bif.state = {mid, mid * mid * (1.0 - mid) + bif.I};
    const double det = p.A * p.alpha * std::exp(p.alpha * mid) - g * g;
    bif.eig1 = {0.0, -std::sqrt(det)};
    bif.eig2 = {0.0, std::sqrt(det)};
    bif.l1 = l1_at(mid);
    return bif;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::R1: return "R1";
        case Region::R2: return "R2";
        case Region::R3: return "R3";
        case Region::R4: return "R4";
        case Region::unclassified: return "unclassified";
    }
    return "?";
}

RegionReport classify_region(double I, double gamma, const OriginalParams& p,
                             const RegionSettings& rs) {
    OriginalParams pl = p;
    pl.I = I;
    pl.gamma = gamma;
    pl.validate();

    RegionReport rep;
    const auto found = find_equilibria(pl);
    rep.equilibria = found.equilibria;
    rep.n_equilibria = static_cast<int>(found.equilibria.size());
    for (const auto& e : rep.equilibria)
        if (e.det > 0 && e.trace < 0) rep.n_stable++;

    // cycle probe: one run from near each equilibrium; sustained
    // oscillation = late-window x-range above 1e-6 and not decaying
    SolverSettings st;
    st.rtol = rs.rtol;
    st.atol = rs.atol;
    const auto rhs = [&pl](double, const State2& s) {
        return rhs_original(s, pl);
    };
    for (const auto& e : rep.equilibria) {
        const State2 s0{e.state.x + rs.offset, e.state.y};
        const TimeSeries ts = integrate_adaptive(rhs, s0, 0.0, rs.horizon,
                                                 rs.horizon / 3000.0, st);
        double w1_lo = 0, w1_hi = 0, w2_lo = 0, w2_hi = 0;
        bool w1_init = false, w2_init = false;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double x = ts.states[i][0];
            if (ts.t[i] >= 0.7 * rs.horizon) {
                if (!w2_init) { w2_lo = w2_hi = x; w2_init = true; }
                w2_lo = std::min(w2_lo, x);
                w2_hi = std::max(w2_hi, x);
            } else if (ts.t[i] >= 0.4 * rs.horizon) {
                if (!w1_init) { w1_lo = w1_hi = x; w1_init = true; }
                w1_lo = std::min(w1_lo, x);
                w1_hi = std::max(w1_hi, x);
            }
        }
        const double r1 = w1_hi - w1_lo, r2 = w2_hi - w2_lo;
        if (r2 > 1e-6 && r2 > 0.9 * r1) {
            rep.cycle_present = true;
            break;
        }
    }

    if (rep.n_equilibria == 1 && rep.n_stable == 1 && !rep.cycle_present)
        rep.region = Region::R1;
    else if (rep.n_equilibria == 3 && rep.n_stable == 2 && !rep.cycle_present)
        rep.region = Region::R2;
    else if (rep.n_equilibria == 3 && rep.cycle_present)
        rep.region = Region::R3;
    else if (rep.n_equilibria == 1 && rep.n_stable == 0 && rep.cycle_present)
        rep.region = Region::R4;
    else
        rep.region = Region::unclassified;
    return rep;
}

FixedGammaEvents events_at_gamma(const OriginalParams& p, double gamma) {
    p.validate();
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    FixedGammaEvents ev;

    // fold abscissae: roots of det(x) = A alpha e^(alpha x) - g(2x - 3x^2)
    const int n = 4000;
    const double lo = 1e-6, hi = kThird2 - 1e-6;
    auto det_f = [&](double x) { return det_of_x(x, gamma, p); };
    double xa = lo, fa = det_f(xa);
    for (int i = 1; i <= n; ++i) {
        const double xb = lo + (hi - lo) * i / n;
        const double fb = det_f(xb);
        if (fa * fb < 0) {
            const double x = bisect(xa, xb, fa, det_f);
            ParamPlanePoint pt;
            pt.x_eq = x;
            pt.gamma = gamma;
            pt.I = I_on_manifold(x, gamma, p);
            ev.folds.push_back(pt);
        }
        xa = xb;
        fa = fb;
    }

    // trace-zero abscissae: 3x^2 - 2x + gamma = 0
    const double disc = 4.0 - 12.0 * gamma;
    if (disc > 0) {
        const double sq = std::sqrt(disc);
        for (double x : {(2.0 - sq) / 6.0, (2.0 + sq) / 6.0}) {
            if (!(x > 0 && x < kThird2)) continue;
            ParamPlanePoint pt;
            pt.x_eq = x;
            pt.gamma = gamma;
            pt.I = I_on_manifold(x, gamma, p);
            pt.genuine = p.A * p.alpha * std::exp(p.alpha * x) > gamma * gamma;
            ev.trace_zeros.push_back(pt);
        }
    }
    return ev;
}

RecoveryResult recover_fig2_gamma(const OriginalParams& p,
                                  const std::vector<RecoveryTarget>& targets,
                                  int scan_points) {
    p.validate();
    if (targets.empty()) throw std::invalid_argument("targets are empty");

    auto score = [&](double gamma) {
        const FixedGammaEvents ev = events_at_gamma(p, gamma);
        double sse = 0;
        for (const auto& tg : targets) {
            double best = std::numeric_limits<double>::infinity();
            const auto& pool =
                tg.kind == BifKind::fold ? ev.folds : ev.trace_zeros;
            for (const auto& cand : pool)
                best = std::min(best, std::abs(cand.I - tg.I));
            if (std::isinf(best)) best = 1.0;  // no event of this kind
            sse += best * best;
        }
        return sse;
    };

    const double gcusp = find_cusp(p).gamma;
    const double glo = gcusp + 1e-4, ghi = 1.0 / 3.0 - 1e-4;
    double best_g = glo, best_s = score(glo);
    const int n = std::max(scan_points, 2);
    for (int i = 1; i < n; ++i) {
        const double g = glo + (ghi - glo) * i / (n - 1);
        const double s = score(g);
        if (s < best_s) {
            best_s = s;
            best_g = g;
        }
    }
    // golden-section refinement around the best cell
    double a = std::max(glo, best_g - (ghi - glo) / (n - 1));
    double b = std::min(ghi, best_g + (ghi - glo) / (n - 1));
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = score(x1), f2 = score(x2);
    for (int it = 0; it < 120 && b - a > 1e-12; ++it) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - gr * (b - a);
            f1 = score(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + gr * (b - a);
            f2 = score(x2);
        }
    }
    RecoveryResult res;
    res.gamma = 0.5 * (a + b);
    res.sse = score(res.gamma);

    const FixedGammaEvents ev = events_at_gamma(p, res.gamma);
    for (const auto& tg : targets) {
        RecoveryMatch m;
        m.target = tg;
        const auto& pool = tg.kind == BifKind::fold ? ev.folds : ev.trace_zeros;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& cand : pool) {
            if (std::abs(cand.I - tg.I) < best) {
                best = std::abs(cand.I - tg.I);
                m.predicted_I = cand.I;
                m.genuine = cand.genuine;
            }
        }
        m.residual = std::isinf(best) ? NAN : m.predicted_I - tg.I;
        res.matches.push_back(m);
    }
    return res;
}

}  // namespace dml
