#pragma once

#include <string>
#include <vector>

#include "dml/classify.hpp"
#include "dml/integrate.hpp"
#include "dml/params.hpp"

namespace dml {

// A named reproduction run of the forced model. The horizon always covers
// 20 forcing periods; the first half is discarded as transient.
struct Scenario {
    std::string name;
    ImprovedParams params;
    State3 initial{0.01, 0.01, 0.01};
    double horizon = 0;             // set from omega when 0: 20 * 2pi/omega
    double transient_fraction = 0.5;
    double rtol = 1e-9;
    double atol = 1e-12;
    int samples_per_period = 2000;

    double forcing_period() const;
    double resolved_horizon() const;
};

// The named time-series panels, keyed "fig4a", "fig4c", "fig4e", "fig4g",
// "fig4i", "fig5a" ... "fig5f".
const std::vector<Scenario>& scenario_table();
const Scenario& scenario_by_name(const std::string& name);

// Integrates the scenario over its horizon. The returned series covers the
// full run; use post_transient() for the analysis window.
TimeSeries run_scenario(const Scenario& sc);
TimeSeries post_transient(const TimeSeries& ts, const Scenario& sc);

// run + discard + classify in one call
RegimeLabel classify_scenario(const Scenario& sc,
                              const ClassifySettings& cs = {});

}  // namespace dml
