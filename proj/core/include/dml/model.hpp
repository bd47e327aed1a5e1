#pragma once

#include <array>

#include "dml/params.hpp"

namespace dml {

struct State2 {
    double x = 0.0;  // membrane potential
    double y = 0.0;  // recovery variable
};

struct State3 {
    double x = 0.0;
    double y = 0.0;
    double phi = 0.0;  // magnetic flux across the membrane

    State2 xy() const { return {x, y}; }
};

// Time derivative of the planar model. Evaluation order is fixed:
//   dx = x*x*(1-x) - y + I
//   dy = A*exp(alpha*x) - gamma*y
// Throws std::domain_error on non-finite input.
State2 rhs_original(const State2& s, const OriginalParams& p);

// Memductance rho(phi) = alpha1 + 3 beta phi^2 (even in phi).
double rho(double phi, const ImprovedParams& p);

// Time derivative of the forced, flux-coupled model. With k = 0 and
// I0 = 0 the (x, y) components reduce exactly to rhs_original at I = 0.
State3 rhs_improved(const State3& s, double t, const ImprovedParams& p);

// Jacobian of the planar model,
//   [ 2x - 3x^2        -1     ]
//   [ A alpha e^(ax)  -gamma  ]
struct Jacobian2 {
    double a11, a12, a21, a22;
    double trace() const { return a11 + a22; }
    double det() const { return a11 * a22 - a12 * a21; }
};
Jacobian2 jacobian_original(const State2& s, const OriginalParams& p);

// Partial derivatives of f(x,y) = x^2(1-x) - y + I and
// g(x,y) = A e^(alpha x) - gamma y through third order.
// f is cubic in x and linear in y; g is exponential in x and linear in y,
// so most entries vanish identically.
struct HigherPartials {
    double fxx, fxy, fyy;
    double fxxx, fxxy, fxyy, fyyy;
    double gxx, gxy, gyy;
    double gxxx, gxxy, gxyy, gyyy;
};
HigherPartials higher_partials(const State2& s, const OriginalParams& p);

}  // namespace dml
