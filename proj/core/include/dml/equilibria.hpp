#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dml/model.hpp"

namespace dml {

enum class Stability {
    stable_node,
    stable_focus,
    saddle,
    unstable_node,
    unstable_focus,
};

const char* to_string(Stability s);

struct Equilibrium {
    State2 state;
    std::complex<double> eig1, eig2;
    Stability stability = Stability::stable_node;
    double trace = 0, det = 0;
    // |trace| or |det| below 1e-10: treat as a bifurcation candidate,
    // not a classification.
    bool marginal = false;
};

// y on the x-nullcline (dx/dt = 0):  y = x^2 (1 - x) + I.
double x_nullcline(double x, const OriginalParams& p);

// y on the y-nullcline (dy/dt = 0):  y = (A / gamma) e^(alpha x).
// Strictly positive and strictly increasing in x; rejects gamma <= 0.
double y_nullcline(double x, const OriginalParams& p);

// Classifies a state that is already an equilibrium (residual <= 1e-8)
// by the eigenvalues of the planar Jacobian.
Equilibrium classify_equilibrium(const State2& e, const OriginalParams& p);

struct EquilibriumSearch {
    std::vector<Equilibrium> equilibria;  // sorted ascending in x
    // Grid cells with a sign change where refinement failed to converge.
    struct Failure {
        double x_lo, x_hi;
        std::string reason;
    };
    std::vector<Failure> failures;
};

// Scans h(x) = x^2(1-x) + I - (A/gamma) e^(alpha x) for sign changes on a
// uniform grid over [x_lo, x_hi], then refines each bracket by bisection
// (to width 1e-6) followed by Newton polishing to |h| < 1e-12.
EquilibriumSearch find_equilibria(const OriginalParams& p, double x_lo = -1.0,
                                  double x_hi = 1.5, int grid_n = 512);

// Equilibrium condition residual h(x) and its x-derivative.
double equilibrium_residual(double x, const OriginalParams& p);

}  // namespace dml
