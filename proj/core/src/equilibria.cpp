#include "dml/equilibria.hpp"

#include <cmath>
#include <stdexcept>

namespace dml {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable_node: return "stable-node";
        case Stability::stable_focus: return "stable-focus";
        case Stability::saddle: return "saddle";
        case Stability::unstable_node: return "unstable-node";
        case Stability::unstable_focus: return "unstable-focus";
    }
    return "?";
}

double x_nullcline(double x, const OriginalParams& p) {
    return x * x * (1.0 - x) + p.I;
}

double y_nullcline(double x, const OriginalParams& p) {
    if (!(p.gamma > 0)) throw std::invalid_argument("gamma must be > 0");
    return (p.A / p.gamma) * std::exp(p.alpha * x);
}

double equilibrium_residual(double x, const OriginalParams& p) {
    return x_nullcline(x, p) - y_nullcline(x, p);
}

namespace {

double residual_dx(double x, const OriginalParams& p) {
    return 2.0 * x - 3.0 * x * x - (p.A / p.gamma) * p.alpha * std::exp(p.alpha * x);
}

constexpr double kMarginalTol = 1e-10;

}  // namespace

Equilibrium classify_equilibrium(const State2& e, const OriginalParams& p) {
    p.validate();
    const State2 r = rhs_original(e, p);
    if (std::abs(r.x) > 1e-8 || std::abs(r.y) > 1e-8)
        throw std::invalid_argument("state is not an equilibrium to 1e-8");

    const Jacobian2 J = jacobian_original(e, p);
    Equilibrium out;
    out.state = e;
    out.trace = J.trace();
    out.det = J.det();
    out.marginal =
        std::abs(out.trace) < kMarginalTol || std::abs(out.det) < kMarginalTol;

    const double disc = out.trace * out.trace - 4.0 * out.det;
    if (disc >= 0) {
        const double sq = std::sqrt(disc);
        out.eig1 = {(out.trace - sq) / 2.0, 0.0};
        out.eig2 = {(out.trace + sq) / 2.0, 0.0};
    } else {
        const double im = std::sqrt(-disc) / 2.0;
        out.eig1 = {out.trace / 2.0, -im};
        out.eig2 = {out.trace / 2.0, im};
    }

    const bool focus = disc < 0;
    if (out.det < 0) {
        out.stability = Stability::saddle;
    } else if (out.trace < 0) {
        out.stability = focus ? Stability::stable_focus : Stability::stable_node;
    } else {
        out.stability =
            focus ? Stability::unstable_focus : Stability::unstable_node;
    }
    return out;
}

EquilibriumSearch find_equilibria(const OriginalParams& p, double x_lo,
                                  double x_hi, int grid_n) {
    p.validate();
    if (!(x_lo < x_hi)) throw std::invalid_argument("need x_lo < x_hi");
    if (grid_n < 64) throw std::invalid_argument("grid_n must be >= 64");

    EquilibriumSearch out;
    const double dx = (x_hi - x_lo) / grid_n;
    double xa = x_lo, ha = equilibrium_residual(xa, p);
    for (int i = 1; i <= grid_n; ++i) {
        const double xb = x_lo + i * dx;
        const double hb = equilibrium_residual(xb, p);
        if (ha == 0.0 || ha * hb < 0.0) {
            // bracketing bisection down to width 1e-6
            double lo = xa, hi = xb, flo = ha;
            if (flo == 0.0) {
                hi = lo;
            } else {
                while (hi - lo > 1e-6) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = equilibrium_residual(mid, p);
                    if (fm == 0.0) { lo = hi = mid; break; }
                    if (flo * fm < 0) hi = mid;
                    else { lo = mid; flo = fm; }
                }
            }
            // Newton polish
            double x = 0.5 * (lo + hi);
            bool ok = false;
            for (int it = 0; it < 50; ++it) {
                const double h = equilibrium_residual(x, p);
                if (std::abs(h) < 1e-12) { ok = true; break; }
                const double d = residual_dx(x, p);
                if (d == 0.0) break;
                x -= h / d;
                if (!std::isfinite(x)) break;
            }
            if (ok) {
                const double y = y_nullcline(x, p);
                out.equilibria.push_back(classify_equilibrium({x, y}, p));
            } else {
                out.failures.push_back(
                    {xa, xb, "Newton did not converge in 50 iterations"});
            }
        }
        xa = xb;
        ha = hb;
    }
    return out;
}

}  // namespace dml
