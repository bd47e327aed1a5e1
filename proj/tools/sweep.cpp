#include <atomic>
#include <chrono>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "dml/classify.hpp"
#include "dml/csv.hpp"
#include "dml/manifest.hpp"
#include "dml/scenarios.hpp"

namespace dmlcli {

namespace {

struct Cell {
    double value = 0;
    dml::RegimeLabel label;
    bool failed = false;
};

}  // namespace

// Fans independent (cell -> simulate -> classify) jobs over a fixed-size
// worker pool; results land in a pre-sized vector indexed by cell, so the
// merged CSV is deterministic regardless of scheduling.
int cmd_sweep(const std::vector<std::string>& argv, const std::string& out_dir,
              const std::string& param, double from, double to, int n,
              double gamma, int workers, bool emit_manifest) {
    if (n < 1) throw std::invalid_argument("sweep needs --n >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<Cell> cells(n);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            const double v =
                n == 1 ? from : from + (to - from) * i / double(n - 1);
            dml::Scenario sc;
            sc.name = "sweep";
            sc.params.gamma = param == "gamma" ? v : gamma;
            sc.params.I0 = param == "I0" ? v : 0.0;
            cells[i].value = v;
            try {
                cells[i].label = dml::classify_scenario(sc);
            } catch (const std::exception&) {
                cells[i].failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    const int nw = std::max(1, workers);
    pool.reserve(nw);
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    dml::CsvTable t;
    t.header = {param, "kind", "n_per_burst", "spike_count", "range",
                "strobe_period"};
    for (const auto& c : cells) {
        if (c.failed) {
            t.rows.push_back({c.value, -1.0, 0.0, 0.0, 0.0, 0.0});
            continue;
        }
        t.rows.push_back({c.value,
                          double(static_cast<int>(c.label.kind)),
                          double(c.label.n_per_burst.value_or(0)),
                          double(c.label.spike_count), c.label.series_range,
                          double(c.label.strobe_period)});
    }
    const OutputDir out{out_dir};
    const std::string path = out.path("sweep.csv");
    t.write(path);

    if (emit_manifest) {
        dml::RunManifest m;
        m.subcommand = "sweep";
        m.argv = argv;
        m.outputs = {path};
        nlohmann::ordered_json j;
        j["param"] = param;
        j["from"] = from;
        j["to"] = to;
        j["n"] = n;
        j["gamma"] = gamma;
        m.parameters_json = j.dump();
        m.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        m.write(out.path("manifest_sweep.json"));
    }
    return 0;
}

}  // namespace dmlcli
