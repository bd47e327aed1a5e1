#pragma once

#include <string>
#include <vector>

namespace dml {

inline constexpr const char* kToolkitVersion = "0.1.0";

// Reproducibility record written next to every CLI output. The stored
// argv alone suffices to re-run the command; outputs are byte-stable, so
// a re-run can be diffed file by file.
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv;
    std::string parameters_json;     // full parameter set as JSON text
    std::string solver_json;         // solver settings as JSON text
    std::vector<std::string> outputs;
    double wall_ms = 0;

    std::string to_json() const;
    void write(const std::string& path) const;
    static RunManifest read(const std::string& path);
};

}  // namespace dml
