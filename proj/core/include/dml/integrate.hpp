#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dml/model.hpp"

namespace dml {

// Thrown when the step size underflows (stiffness/blow-up) or the state
// leaves the finite range. Carries the last accepted state.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double t,
                     std::array<double, 3> last, int dim)
        : std::runtime_error(what), t_last(t), state_last(last), dim(dim) {}
    double t_last;
    std::array<double, 3> state_last;
    int dim;
};

struct SolverSettings {
    double rtol = 1e-9;
    double atol = 1e-12;
    double h0 = 1e-3;       // initial step
    double h_underflow = 1e-12;
    std::size_t max_steps = 200'000'000;
};

// Uniformly sampled trajectory. states[i] holds (x, y) or (x, y, phi)
// depending on dim; the unused slot stays zero.
struct TimeSeries {
    std::vector<double> t;
    std::vector<std::array<double, 3>> states;
    int dim = 2;

    struct Meta {
        double rtol = 0, atol = 0;
        std::size_t steps_accepted = 0, steps_rejected = 0;
        double err_sum = 0;  // sum of accepted local error estimates (scaled)
        std::array<double, 3> initial{};
        double t0 = 0, t1 = 0, sample_dt = 0;
    } meta;

    std::size_t size() const { return t.size(); }
    std::vector<double> x() const {
        std::vector<double> out(states.size());
        for (std::size_t i = 0; i < states.size(); ++i) out[i] = states[i][0];
        return out;
    }
    // View from the first sample with t >= t_from.
    TimeSeries tail_from(double t_from) const;
};

using Rhs2 = std::function<State2(double, const State2&)>;
using Rhs3 = std::function<State3(double, const State3&)>;

// Explicit Dormand-Prince 5(4) embedded pair with proportional step-size
// control; output is produced at t0 + k*sample_dt through the order-4
// dense interpolant, never by forcing integration steps onto the grid.
// Deterministic for fixed inputs and settings.
TimeSeries integrate_adaptive(const Rhs2& rhs, const State2& s0, double t0,
                              double t1, double sample_dt,
                              const SolverSettings& st = {});
TimeSeries integrate_adaptive(const Rhs3& rhs, const State3& s0, double t0,
                              double t1, double sample_dt,
                              const SolverSettings& st = {});

// Single fixed-step DP5 sweep (no error control); used for convergence
// studies. Returns the state at t1 after ceil((t1-t0)/h) equal steps.
State2 integrate_fixed(const Rhs2& rhs, const State2& s0, double t0, double t1,
                       double h);

// Convenience: final state of an adaptive run without sampling overhead.
State2 integrate_to(const Rhs2& rhs, const State2& s0, double t0, double t1,
                    const SolverSettings& st = {});
State3 integrate_to(const Rhs3& rhs, const State3& s0, double t0, double t1,
                    const SolverSettings& st = {});

}  // namespace dml
