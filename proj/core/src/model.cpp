#include "dml/model.hpp"

#include <cmath>
#include <stdexcept>

namespace dml {

namespace {

void require_finite_state(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::domain_error("non-finite state");
}

}  // namespace

State2 rhs_original(const State2& s, const OriginalParams& p) {
    require_finite_state(s.x, s.y);
    const double dx = s.x * s.x * (1.0 - s.x) - s.y + p.I;
    const double dy = p.A * std::exp(p.alpha * s.x) - p.gamma * s.y;
    return {dx, dy};
}

double rho(double phi, const ImprovedParams& p) {
    return p.alpha1 + 3.0 * p.beta * phi * phi;
}

State3 rhs_improved(const State3& s, double t, const ImprovedParams& p) {
    require_finite_state(s.x, s.y);
    if (!std::isfinite(s.phi) || !std::isfinite(t))
        throw std::domain_error("non-finite state");
    // (x, y) terms are evaluated in the same order as rhs_original so the
    // k = 0, I0 = 0 reduction is bit-exact.
    const double dx = s.x * s.x * (1.0 - s.x) - s.y +
                      p.I0 * std::sin(p.omega * t) + p.k * rho(s.phi, p) * s.x;
    const double dy = p.A * std::exp(p.alpha * s.x) - p.gamma * s.y;
    const double dphi = p.k1 * s.x - p.k2 * s.phi + p.phi_ext;
    return {dx, dy, dphi};
}

Jacobian2 jacobian_original(const State2& s, const OriginalParams& p) {
    require_finite_state(s.x, s.y);
    return {2.0 * s.x - 3.0 * s.x * s.x, -1.0,
            p.A * p.alpha * std::exp(p.alpha * s.x), -p.gamma};
}

HigherPartials higher_partials(const State2& s, const OriginalParams& p) {
    require_finite_state(s.x, s.y);
    HigherPartials h{};
    h.fxx = 2.0 - 6.0 * s.x;
    h.fxxx = -6.0;
    const double e = p.A * std::exp(p.alpha * s.x);
    h.gxx = p.alpha * p.alpha * e;
    h.gxxx = p.alpha * p.alpha * p.alpha * e;
    // all remaining second/third partials of f and g vanish identically
    return h;
}

}  // namespace dml
