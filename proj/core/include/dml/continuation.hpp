#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dml/equilibria.hpp"
#include "dml/model.hpp"

namespace dml {

enum class FreeParam { I, gamma };
const char* to_string(FreeParam f);

enum class BifKind { fold, hopf, neutral_saddle, cusp, generalized_hopf };
const char* to_string(BifKind k);

struct BranchPoint {
    State2 state;
    double param = 0;  // value of the free parameter
    double trace = 0, det = 0;
    Stability stability = Stability::stable_node;
};

struct BifurcationPoint {
    BifKind kind = BifKind::fold;
    State2 state;
    double I = 0, gamma = 0;
    std::optional<double> l1;  // first Lyapunov coefficient (hopf only)
    std::complex<double> eig1, eig2;
};

struct Branch {
    FreeParam free_param = FreeParam::I;
    std::vector<BranchPoint> points;        // ordered along the curve
    std::vector<BifurcationPoint> bifurcations;
    bool complete = true;       // false when the corrector gave up early
    std::string termination;    // reason when complete == false
};

struct ContinuationSettings {
    double h0 = 1e-3;
    double h_min = 1e-6;
    double h_max = 1e-2;
    double newton_tol = 1e-12;
    int newton_max_iter = 25;
    double state_bound = 5.0;  // abort outside [-bound, bound]^2
    std::size_t max_points = 500000;
};

// Pseudo-arclength continuation of equilibria of the planar model in one
// free parameter. Runs from `start` in both directions until `range` is
// covered (or a documented failure), recording trace/det test functions at
// every point and refining their sign changes into bifurcation points.
Branch continue_equilibrium(const Equilibrium& start, const OriginalParams& p,
                            FreeParam free, double range_lo, double range_hi,
                            const ContinuationSettings& cs = {});

// Refines a fold (det = 0) bracketed by two branch points, by a secant
// iteration along the corrected branch segment. Postcondition:
// |det| < 1e-10 and equilibrium residual < 1e-10.
BifurcationPoint locate_fold(const BranchPoint& a, const BranchPoint& b,
                             const OriginalParams& p, FreeParam free);

// Refines a trace = 0 crossing; kind is hopf when det > 0 (l1 attached,
// eigenvalues +-i sqrt(det)) and neutral_saddle when det < 0. det within
// 1e-10 of zero is reported as degenerate (Bogdanov-Takens suspect).
BifurcationPoint locate_hopf(const BranchPoint& a, const BranchPoint& b,
                             const OriginalParams& p, FreeParam free);

// First Lyapunov coefficient at a Hopf point of the planar model:
// translates the equilibrium to the origin, transforms the Jacobian to
// [[0, -w0], [w0, 0]] and evaluates the planar normal-form coefficient
//   16 a = Fuuu + Fuvv + Guuv + Gvvv
//        + (1/w0) [Fuv (Fuu + Fvv) - Guv (Guu + Gvv) - Fuu Guu + Fvv Gvv]
// from the analytic second/third partials. Negative means supercritical.
// The returned value is `a` (no extra scaling); different tools rescale
// this coefficient, only the sign is convention-free.
double first_lyapunov_coefficient(const State2& equilibrium,
                                  const OriginalParams& p);

struct EnvelopeSample {
    double param = 0;
    double x_min = 0, x_max = 0;
    bool cycle = false;  // false when the trajectory settled to a point
};

struct EnvelopeSettings {
    double horizon = 3000.0;
    double transient_fraction = 0.6;
    double offset = 1e-3;    // initial displacement from the equilibrium
    double rtol = 1e-9;
    double atol = 1e-12;
};

// Stable-cycle envelope by direct simulation: for each sampled value of
// the free parameter, integrates from the most unstable equilibrium plus
// (offset, 0), discards the transient and records min/max of x.
// Range < 1e-6 is reported as "no cycle".
std::vector<EnvelopeSample> cycle_envelope(const OriginalParams& p,
                                           FreeParam free, double from,
                                           double to, int samples,
                                           const EnvelopeSettings& es = {});

}  // namespace dml
