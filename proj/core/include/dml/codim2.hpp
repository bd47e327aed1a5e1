#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dml/continuation.hpp"

namespace dml {

// A point on a codimension-1 curve in the (I, gamma)-plane, generated from
// the equilibrium abscissa x_eq of the defining conditions.
struct ParamPlanePoint {
    double x_eq = 0;
    double I = 0;
    double gamma = 0;
    bool genuine = true;  // hopf curve only: det > 0 at the point
};

// Fold locus from det = 0:
//   gamma(x) = A alpha e^(alpha x) / (2x - 3x^2),
//   I(x)     = (A/gamma) e^(alpha x) - x^2 (1 - x),
// valid on 0 < x < 2/3. Rejects abscissae outside the validity interval.
std::vector<ParamPlanePoint> fold_curve(const OriginalParams& p,
                                        const std::vector<double>& x_grid);

// Hopf locus from trace = 0: gamma(x) = 2x - 3x^2 on 0 < x < 2/3;
// genuine iff A alpha e^(alpha x) > gamma^2, otherwise a neutral saddle.
std::vector<ParamPlanePoint> hopf_curve(const OriginalParams& p,
                                        const std::vector<double>& x_grid);

// Cusp: det = 0 together with d(det)/dx = 0 along the equilibrium
// manifold, which reduces to 3 alpha x^2 - (2 alpha + 6) x + 2 = 0 with
// the root in (0, 2/3).
BifurcationPoint find_cusp(const OriginalParams& p);

// Numerically tracked merge of the fold pair: bisection on gamma for the
// sign change of min_x [A alpha e^(alpha x) - gamma (2x - 3x^2)].
// Independent of the quadratic route above.
double fold_merge_gamma(const OriginalParams& p);

// Generalized Hopf: root of l1 = 0 along the genuine portion of the Hopf
// curve, located by bisection to |l1| < 1e-8. Throws when no sign change
// exists inside [x_lo, x_hi].
BifurcationPoint find_generalized_hopf(const OriginalParams& p,
                                       double x_lo = 0.34, double x_hi = 0.6);

enum class Region { R1, R2, R3, R4, unclassified };
const char* to_string(Region r);

struct RegionReport {
    int n_equilibria = 0;
    int n_stable = 0;
    bool cycle_present = false;
    Region region = Region::unclassified;
    std::vector<Equilibrium> equilibria;
};

struct RegionSettings {
    double horizon = 3000.0;
    double offset = 1e-3;
    double rtol = 1e-9;
    double atol = 1e-12;
};

// Pointwise classification of (I, gamma) into the four qualitative
// regions: R1 one stable equilibrium, no cycle; R2 three equilibria with
// exactly two stable, no cycle; R3 three equilibria with a stable cycle;
// R4 one unstable equilibrium with a stable cycle. Cycle presence is
// probed by simulation from near each equilibrium; an oscillation counts
// only when its late-window amplitude has stopped decaying, so slowly
// converging foci are not mistaken for cycles.
RegionReport classify_region(double I, double gamma, const OriginalParams& p,
                             const RegionSettings& rs = {});

struct RecoveryTarget {
    BifKind kind = BifKind::fold;  // fold or hopf
    double I = 0;
};

struct RecoveryMatch {
    RecoveryTarget target;
    double predicted_I = 0;
    double residual = 0;     // predicted - target
    bool genuine = true;     // for hopf targets: matched point's det sign
};

struct RecoveryResult {
    double gamma = 0;
    double sse = 0;
    std::vector<RecoveryMatch> matches;
};

// Best-fit gamma for a set of reported fold/Hopf I-values, scored
// against the closed-form curves: coarse scan over (gamma_cusp, 1/3),
// then golden-section refinement. Residuals are reported per target;
// exact reproduction is never claimed.
RecoveryResult recover_fig2_gamma(const OriginalParams& p,
                                  const std::vector<RecoveryTarget>& targets,
                                  int scan_points = 2000);

// Fold / trace-zero I-values at fixed gamma, from the closed-form curves
// (used as the oracle side of continuation cross-checks).
struct FixedGammaEvents {
    std::vector<ParamPlanePoint> folds;
    std::vector<ParamPlanePoint> trace_zeros;  // genuine flag distinguishes
};
FixedGammaEvents events_at_gamma(const OriginalParams& p, double gamma);

}  // namespace dml
