#include "dml/scenarios.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dml {

double Scenario::forcing_period() const {
    return 2.0 * std::numbers::pi / params.omega;
}

double Scenario::resolved_horizon() const {
    return horizon > 0 ? horizon : 20.0 * forcing_period();
}

namespace {

Scenario make(const std::string& name, double gamma, double I0, double A,
              double omega, double k) {
    Scenario sc;
    sc.name = name;
    sc.params.gamma = gamma;
    sc.params.I0 = I0;
    sc.params.A = A;
    sc.params.omega = omega;
    sc.params.k = k;
    return sc;
}

std::vector<Scenario> build_table() {
    constexpr double A0 = 0.0041, k0 = 0.003, w0 = 0.01;
    std::vector<Scenario> t;
    // regime sweep in the forcing amplitude at gamma = 0.315
    t.push_back(make("fig4a", 0.315, 0.00072, A0, w0, k0));
    t.push_back(make("fig4c", 0.315, 0.0155, A0, w0, k0));
    t.push_back(make("fig4e", 0.315, 0.016, A0, w0, k0));
    t.push_back(make("fig4g", 0.315, 0.02, A0, w0, k0));
    t.push_back(make("fig4i", 0.315, 0.04, A0, w0, k0));
    // multi-parameter panels; fig5a has no stated k and uses the default
    t.push_back(make("fig5a", 0.23, 0.04, 0.005, 0.03, k0));
    t.push_back(make("fig5b", 0.035, 0.187, 0.005, 0.0121, 0.0231));
    t.push_back(make("fig5c", 0.1576, 0.17, 0.002, 0.02, 0.018));
    t.push_back(make("fig5d", 0.1576, 0.17, 0.002, 0.001, 0.919));
    t.push_back(make("fig5e", 0.231, 0.434, 0.0187, 0.015, 0.05));
    t.push_back(make("fig5f", 0.231, 0.201, 0.0018, 0.015, 0.08));
    return t;
}

}  // namespace

const std::vector<Scenario>& scenario_table() {
    static const std::vector<Scenario> table = build_table();
    return table;
}

const Scenario& scenario_by_name(const std::string& name) {
    for (const auto& sc : scenario_table())
        if (sc.name == name) return sc;
    throw std::invalid_argument("unknown scenario \"" + name + "\"");
}

TimeSeries run_scenario(const Scenario& sc) {
    sc.params.validate();
    const double T = sc.forcing_period();
    const double horizon = sc.resolved_horizon();
    if (horizon < 10.0 * T)
        throw std::invalid_argument(
            "scenario horizon must cover at least 10 forcing periods");
    SolverSettings st;
    st.rtol = sc.rtol;
    st.atol = sc.atol;
    const ImprovedParams p = sc.params;
    const auto rhs = [&p](double t, const State3& s) {
        return rhs_improved(s, t, p);
    };
    return integrate_adaptive(rhs, sc.initial, 0.0, horizon,
                              T / sc.samples_per_period, st);
}

TimeSeries post_transient(const TimeSeries& ts, const Scenario& sc) {
    return ts.tail_from(sc.resolved_horizon() * sc.transient_fraction);
}

RegimeLabel classify_scenario(const Scenario& sc, const ClassifySettings& cs) {
    const TimeSeries ts = run_scenario(sc);
    return classify_activity(post_transient(ts, sc), sc.forcing_period(), cs);
}

}  // namespace dml
