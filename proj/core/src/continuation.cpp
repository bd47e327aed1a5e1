#include "dml/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dml/integrate.hpp"

namespace dml {

const char* to_string(FreeParam f) {
    return f == FreeParam::I ? "I" : "gamma";
}

const char* to_string(BifKind k) {
    switch (k) {
        case BifKind::fold: return "fold";
        case BifKind::hopf: return "hopf";
        case BifKind::neutral_saddle: return "neutral_saddle";
        case BifKind::cusp: return "cusp";
        case BifKind::generalized_hopf: return "generalized_hopf";
    }
    return "?";
}

namespace {

// Extended point u = (x, y, lambda).
struct U {
    double x, y, l;
};

OriginalParams with_param(OriginalParams p, FreeParam free, double v) {
    if (free == FreeParam::I) p.I = v;
    else p.gamma = v;
    return p;
}

// F(u) = rhs_original(x, y; lambda) and its 2x3 Jacobian [J | dF/dlambda].
void eval_extended(const U& u, const OriginalParams& base, FreeParam free,
                   double f[2], double Jx[2][3]) {
    const OriginalParams p = with_param(base, free, u.l);
    const State2 r = rhs_original({u.x, u.y}, p);
    f[0] = r.x;
    f[1] = r.y;
    const Jacobian2 J = jacobian_original({u.x, u.y}, p);
    Jx[0][0] = J.a11;
    Jx[0][1] = J.a12;
    Jx[1][0] = J.a21;
    Jx[1][1] = J.a22;
    if (free == FreeParam::I) {
        Jx[0][2] = 1.0;
        Jx[1][2] = 0.0;
    } else {
        Jx[0][2] = 0.0;
        Jx[1][2] = -u.y;
    }
}

// Solves the 3x3 system M v = b by Gaussian elimination with partial
// pivoting. Returns false when the matrix is numerically singular.
bool solve3(double M[3][3], const double b[3], double v[3]) {
    int piv[3] = {0, 1, 2};
    double a[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) a[i][j] = M[i][j];
        a[i][3] = b[i];
    }
    for (int c = 0; c < 3; ++c) {
        int best = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(a[r][c]) > std::abs(a[best][c])) best = r;
        if (std::abs(a[best][c]) < 1e-300) return false;
        if (best != c) {
            for (int j = c; j < 4; ++j) std::swap(a[c][j], a[best][j]);
            std::swap(piv[c], piv[best]);
        }
        for (int r = c + 1; r < 3; ++r) {
            const double m = a[r][c] / a[c][c];
            for (int j = c; j < 4; ++j) a[r][j] -= m * a[c][j];
        }
    }
    for (int r = 2; r >= 0; --r) {
        double s = a[r][3];
        for (int j = r + 1; j < 3; ++j) s -= a[r][j] * v[j];
        v[r] = s / a[r][r];
    }
    return true;
}

// Unit tangent of the equilibrium curve at u: null vector of the 2x3
// extended Jacobian, found from the 3x3 bordered system
// [Jx; ref^T] t = (0, 0, 1) with a reference row that keeps the system
// regular; oriented along `orient` when given.
bool tangent_at(const U& u, const OriginalParams& base, FreeParam free,
                const double* orient, double t[3]) {
    double f[2], Jx[2][3];
    eval_extended(u, base, free, f, Jx);
    const double refs[3][3] = {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}};
    for (const auto& ref : refs) {
        double M[3][3] = {{Jx[0][0], Jx[0][1], Jx[0][2]},
                          {Jx[1][0], Jx[1][1], Jx[1][2]},
                          {ref[0], ref[1], ref[2]}};
        const double b[3] = {0, 0, 1};
        double v[3];
        if (!solve3(M, b, v)) continue;
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (!(n > 0) || !std::isfinite(n)) continue;
        for (int i = 0; i < 3; ++i) t[i] = v[i] / n;
        if (orient) {
            const double d =
                t[0] * orient[0] + t[1] * orient[1] + t[2] * orient[2];
            if (d < 0)
                for (int i = 0; i < 3; ++i) t[i] = -t[i];
        }
        return true;
    }
    return false;
}

// Newton corrector for (rhs = 0, n . (u - u_anchor) - s = 0).
bool correct(U& u, const OriginalParams& base, FreeParam free,
             const double n[3], const U& anchor, double s, double tol,
             int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        double f[2], Jx[2][3];
        eval_extended(u, base, free, f, Jx);
        const double c = n[0] * (u.x - anchor.x) + n[1] * (u.y - anchor.y) +
                         n[2] * (u.l - anchor.l) - s;
        const double rn = std::max({std::abs(f[0]), std::abs(f[1]), std::abs(c)});
        if (rn < tol) return true;
        double M[3][3] = {{Jx[0][0], Jx[0][1], Jx[0][2]},
                          {Jx[1][0], Jx[1][1], Jx[1][2]},
                          {n[0], n[1], n[2]}};
        const double b[3] = {-f[0], -f[1], -c};
        double d[3];
        if (!solve3(M, b, d)) return false;
        u.x += d[0];
        u.y += d[1];
        u.l += d[2];
        if (!std::isfinite(u.x) || !std::isfinite(u.y) || !std::isfinite(u.l))
            return false;
    }
    return false;
}

BranchPoint make_point(const U& u, const OriginalParams& base, FreeParam free) {
    const OriginalParams p = with_param(base, free, u.l);
    const Jacobian2 J = jacobian_original({u.x, u.y}, p);
    BranchPoint bp;
    bp.state = {u.x, u.y};
    bp.param = u.l;
    bp.trace = J.trace();
    bp.det = J.det();
    if (bp.det < 0) bp.stability = Stability::saddle;
    else if (bp.trace < 0)
        bp.stability = bp.trace * bp.trace - 4 * bp.det < 0
                           ? Stability::stable_focus
                           : Stability::stable_node;
    else
        bp.stability = bp.trace * bp.trace - 4 * bp.det < 0
                           ? Stability::unstable_focus
                           : Stability::unstable_node;
    return bp;
}

BifurcationPoint finish_bif(const U& u, const OriginalParams& base,
                            FreeParam free, bool on_trace);

// Secant (regula falsi with Illinois damping) on a test function along the
// corrected segment between two branch points.
U refine_on_branch(const BranchPoint& a, const BranchPoint& b,
                   const OriginalParams& base, FreeParam free, bool on_trace,
                   const char* what) {
    U ua{a.state.x, a.state.y, a.param};
    U ub{b.state.x, b.state.y, b.param};
    double chord[3] = {ub.x - ua.x, ub.y - ua.y, ub.l - ua.l};
    const double cn =
        std::sqrt(chord[0] * chord[0] + chord[1] * chord[1] + chord[2] * chord[2]);
    if (!(cn > 0)) throw std::invalid_argument("degenerate bracket");
    for (double& c : chord) c /= cn;

    auto test_at = [&](double s, U& out) {
        out = {ua.x + s * (ub.x - ua.x), ua.y + s * (ub.y - ua.y),
               ua.l + s * (ub.l - ua.l)};
        if (!correct(out, base, free, chord, ua, s * cn, 1e-12, 40))
            throw std::runtime_error(std::string(what) +
                                     ": corrector failed during refinement");
        const OriginalParams p = with_param(base, free, out.l);
        const Jacobian2 J = jacobian_original({out.x, out.y}, p);
        return on_trace ? J.trace() : J.det();
    };

    U u_mid;
    double s_lo = 0.0, s_hi = 1.0;
    double f_lo = on_trace ? a.trace : a.det;
    double f_hi = on_trace ? b.trace : b.det;
    if (f_lo == 0.0) { test_at(0.0, u_mid); return u_mid; }
    if (f_hi == 0.0) { test_at(1.0, u_mid); return u_mid; }
    if (f_lo * f_hi > 0)
        throw std::invalid_argument(std::string(what) +
                                    ": test function does not change sign");
    int side = 0;
    for (int it = 0; it < 50; ++it) {
        const double s = (s_lo * f_hi - s_hi * f_lo) / (f_hi - f_lo);
        const double fm = test_at(s, u_mid);
        if (std::abs(fm) < 1e-11) return u_mid;
        if (fm * f_lo < 0) {
            s_hi = s;
            f_hi = fm;
            if (side == -1) f_lo /= 2;
            side = -1;
        } else {
            s_lo = s;
            f_lo = fm;
            if (side == +1) f_hi /= 2;
            side = +1;
        }
    }
    throw std::runtime_error(std::string(what) +
                             ": no convergence in 50 iterations");
}

}  // namespace

BifurcationPoint locate_fold(const BranchPoint& a, const BranchPoint& b,
                             const OriginalParams& p, FreeParam free) {
    const U u = refine_on_branch(a, b, p, free, /*on_trace=*/false, "locate_fold");
    return finish_bif(u, p, free, false);
}

BifurcationPoint locate_hopf(const BranchPoint& a, const BranchPoint& b,
                             const OriginalParams& p, FreeParam free) {
    const U u = refine_on_branch(a, b, p, free, /*on_trace=*/true, "locate_hopf");
    return finish_bif(u, p, free, true);
}

namespace {

BifurcationPoint finish_bif(const U& u, const OriginalParams& base,
                            FreeParam free, bool on_trace) {
    const OriginalParams p = with_param(base, free, u.l);
    const Jacobian2 J = jacobian_original({u.x, u.y}, p);
    BifurcationPoint bif;
    bif.state = {u.x, u.y};
    bif.I = p.I;
    bif.gamma = p.gamma;
    const double tr = J.trace(), det = J.det();
    if (!on_trace) {
        bif.kind = BifKind::fold;
        // det = 0: eigenvalues 0 and trace
        bif.eig1 = {0.0, 0.0};
        bif.eig2 = {tr, 0.0};
        return bif;
    }
    if (std::abs(det) < 1e-10)
        throw std::runtime_error(
            "degenerate trace=0 point with det ~ 0 (Bogdanov-Takens suspect)");
    if (det > 0) {
        bif.kind = BifKind::hopf;
        const double w0 = std::sqrt(det);
        bif.eig1 = {0.0, -w0};
        bif.eig2 = {0.0, w0};
        bif.l1 = first_lyapunov_coefficient({u.x, u.y}, p);
    } else {
        bif.kind = BifKind::neutral_saddle;
        const double sq = std::sqrt(-det);
        bif.eig1 = {-sq, 0.0};
        bif.eig2 = {sq, 0.0};
    }
    return bif;
}

}  // namespace

Branch continue_equilibrium(const Equilibrium& start, const OriginalParams& p,
                            FreeParam free, double range_lo, double range_hi,
                            const ContinuationSettings& cs) {
    p.validate();
    if (!(range_lo < range_hi))
        throw std::invalid_argument("need range_lo < range_hi");
    const double l0 = free == FreeParam::I ? p.I : p.gamma;
    if (!(l0 >= range_lo && l0 <= range_hi))
        throw std::invalid_argument(
            "start parameter value must lie inside the range");

    Branch br;
    br.free_param = free;

    const U u0{start.state.x, start.state.y, l0};

    // march one direction; dir = +1 follows increasing lambda initially
    auto march = [&](int dir, std::vector<BranchPoint>& pts) -> std::string {
        U u = u0;
        double t[3];
        const double seed[3] = {0, 0, static_cast<double>(dir)};
        if (!tangent_at(u, p, free, seed, t)) return "no tangent at start";
        double h = cs.h0;
        int streak = 0;
        pts.push_back(make_point(u, p, free));
        while (pts.size() < cs.max_points) {
            U un{u.x + h * t[0], u.y + h * t[1], u.l + h * t[2]};
            if (correct(un, p, free, t, u, h, cs.newton_tol,
                        cs.newton_max_iter)) {
                double tn[3];
                if (!tangent_at(un, p, free, t, tn))
                    return "tangent computation failed";
                u = un;
                std::copy(tn, tn + 3, t);
                pts.push_back(make_point(u, p, free));
                if (std::abs(u.x) > cs.state_bound ||
                    std::abs(u.y) > cs.state_bound)
                    return "state left the bracket";
                if (u.l < range_lo || u.l > range_hi) return "";  // covered
                if (++streak >= 3) {
                    h = std::min(h * 1.3, cs.h_max);
                    streak = 0;
                }
            } else {
                streak = 0;
                if (h <= cs.h_min)
                    return "corrector divergence at minimum step";
                h = std::max(h / 2.0, cs.h_min);
            }
        }
        return "point budget exhausted";
    };

    std::vector<BranchPoint> fwd, bwd;
    const std::string term_f = march(+1, fwd);
    const std::string term_b = march(-1, bwd);

    // stitch: reversed backward half + forward half (start point shared)
    br.points.reserve(fwd.size() + bwd.size());
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) br.points.push_back(*it);
    for (std::size_t i = 1; i < fwd.size(); ++i) br.points.push_back(fwd[i]);

    br.complete = term_f.empty() && term_b.empty();
    if (!br.complete) {
        br.termination = term_b.empty() ? term_f : term_b;
        if (!term_f.empty() && !term_b.empty())
            br.termination = term_b + " / " + term_f;
    }

    // refine test-function sign changes between consecutive points
    for (std::size_t i = 0; i + 1 < br.points.size(); ++i) {
        const BranchPoint& a = br.points[i];
        const BranchPoint& b = br.points[i + 1];
        if (a.det * b.det < 0)
            br.bifurcations.push_back(locate_fold(a, b, p, free));
        if (a.trace * b.trace < 0)
            br.bifurcations.push_back(locate_hopf(a, b, p, free));
    }
    return br;
}

double first_lyapunov_coefficient(const State2& equilibrium,
                                  const OriginalParams& p) {
    const Jacobian2 J = jacobian_original(equilibrium, p);
    const double det = J.det();
    if (det <= 0)
        throw std::invalid_argument(
            "first_lyapunov_coefficient requires det > 0");
    const double w0 = std::sqrt(det);

    // eigenvector for +i w0: w = (a12, i w0 - a11); P = [Re w, -Im w]
    // gives P^-1 J P = [[0, -w0], [w0, 0]] exactly (trace = 0 assumed
    // to hold approximately; only det enters the rotation rate).
    const double P[2][2] = {{J.a12, 0.0}, {-J.a11, -w0}};
    const double detP = P[0][0] * P[1][1] - P[0][1] * P[1][0];
    if (std::abs(detP) < 1e-300)
        throw std::invalid_argument("degenerate Jacobian at Hopf candidate");
    const double Pi[2][2] = {{P[1][1] / detP, -P[0][1] / detP},
                             {-P[1][0] / detP, P[0][0] / detP}};

    const HigherPartials hp = higher_partials(equilibrium, p);

    // symmetric bilinear/trilinear forms of (f, g) applied to column
    // vectors of P
    auto B = [&](const double u[2], const double v[2], double out[2]) {
        out[0] = hp.fxx * u[0] * v[0] + hp.fxy * (u[0] * v[1] + u[1] * v[0]) +
                 hp.fyy * u[1] * v[1];
        out[1] = hp.gxx * u[0] * v[0] + hp.gxy * (u[0] * v[1] + u[1] * v[0]) +
                 hp.gyy * u[1] * v[1];
    };
    auto C = [&](const double u[2], const double v[2], const double w[2],
                 double out[2]) {
        out[0] = hp.fxxx * u[0] * v[0] * w[0] +
                 hp.fxxy * (u[0] * v[0] * w[1] + u[0] * v[1] * w[0] +
                            u[1] * v[0] * w[0]) +
                 hp.fxyy * (u[0] * v[1] * w[1] + u[1] * v[0] * w[1] +
                            u[1] * v[1] * w[0]) +
                 hp.fyyy * u[1] * v[1] * w[1];
        out[1] = hp.gxxx * u[0] * v[0] * w[0] +
                 hp.gxxy * (u[0] * v[0] * w[1] + u[0] * v[1] * w[0] +
                            u[1] * v[0] * w[0]) +
                 hp.gxyy * (u[0] * v[1] * w[1] + u[1] * v[0] * w[1] +
                            u[1] * v[1] * w[0]) +
                 hp.gyyy * u[1] * v[1] * w[1];
    };

    const double pu[2] = {P[0][0], P[1][0]};  // image of e_u
    const double pv[2] = {P[0][1], P[1][1]};  // image of e_v

    // second derivatives of (F, G) = P^-1 (f, g) o P
    double buu[2], buv[2], bvv[2];
    B(pu, pu, buu);
    B(pu, pv, buv);
    B(pv, pv, bvv);
    const double Fuu = Pi[0][0] * buu[0] + Pi[0][1] * buu[1];
    const double Fuv = Pi[0][0] * buv[0] + Pi[0][1] * buv[1];
    const double Fvv = Pi[0][0] * bvv[0] + Pi[0][1] * bvv[1];
    const double Guu = Pi[1][0] * buu[0] + Pi[1][1] * buu[1];
    const double Guv = Pi[1][0] * buv[0] + Pi[1][1] * buv[1];
    const double Gvv = Pi[1][0] * bvv[0] + Pi[1][1] * bvv[1];

    // third derivatives needed by the formula
    double cuuu[2], cuvv[2], cuuv[2], cvvv[2];
    C(pu, pu, pu, cuuu);
    C(pu, pv, pv, cuvv);
    C(pu, pu, pv, cuuv);
    C(pv, pv, pv, cvvv);
    const double Fuuu = Pi[0][0] * cuuu[0] + Pi[0][1] * cuuu[1];
    const double Fuvv = Pi[0][0] * cuvv[0] + Pi[0][1] * cuvv[1];
    const double Guuv = Pi[1][0] * cuuv[0] + Pi[1][1] * cuuv[1];
    const double Gvvv = Pi[1][0] * cvvv[0] + Pi[1][1] * cvvv[1];

    const double sixteen_a =
        Fuuu + Fuvv + Guuv + Gvvv +
        (1.0 / w0) * (Fuv * (Fuu + Fvv) - Guv * (Guu + Gvv) - Fuu * Guu +
                      Fvv * Gvv);
    return sixteen_a / 16.0;
}

std::vector<EnvelopeSample> cycle_envelope(const OriginalParams& p,
                                           FreeParam free, double from,
                                           double to, int samples,
                                           const EnvelopeSettings& es) {
    p.validate();
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    std::vector<EnvelopeSample> out;
    out.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double lam =
            samples == 1 ? from
                         : from + (to - from) * i / double(samples - 1);
        const OriginalParams pl = with_param(p, free, lam);
        const auto eqs = find_equilibria(pl);
        EnvelopeSample smp;
        smp.param = lam;
        if (eqs.equilibria.empty()) {
            smp.cycle = false;
            out.push_back(smp);
            continue;
        }
        // seed near the most unstable equilibrium
        const Equilibrium* seed = &eqs.equilibria.front();
        for (const auto& e : eqs.equilibria)
            if (e.trace > seed->trace) seed = &e;
        const State2 s0{seed->state.x + es.offset, seed->state.y};
        SolverSettings st;
        st.rtol = es.rtol;
        st.atol = es.atol;
        const auto rhs = [&pl](double, const State2& s) {
            return rhs_original(s, pl);
        };
        const TimeSeries ts = integrate_adaptive(
            rhs, s0, 0.0, es.horizon, es.horizon / 4000.0, st);
        const TimeSeries tail =
            ts.tail_from(es.horizon * es.transient_fraction);
        double lo = tail.states[0][0], hi = lo;
        for (const auto& s : tail.states) {
            lo = std::min(lo, s[0]);
            hi = std::max(hi, s[0]);
        }
        smp.x_min = lo;
        smp.x_max = hi;
        smp.cycle = (hi - lo) >= 1e-6;
        out.push_back(smp);
    }
    return out;
}

}  // namespace dml
