#include "dml/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dml {

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["schema"] = "dml.manifest/1";
    j["version"] = kToolkitVersion;
    j["subcommand"] = subcommand;
    j["argv"] = argv;
    j["parameters"] = parameters_json.empty()
                          ? nlohmann::ordered_json(nullptr)
                          : nlohmann::ordered_json::parse(parameters_json);
    j["solver"] = solver_json.empty()
                      ? nlohmann::ordered_json(nullptr)
                      : nlohmann::ordered_json::parse(solver_json);
    j["outputs"] = outputs;
    j["wall_ms"] = wall_ms;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << to_json();
}

RunManifest RunManifest::read(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    const auto j = nlohmann::json::parse(buf.str());
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    if (!j.at("parameters").is_null()) m.parameters_json = j["parameters"].dump();
    if (!j.at("solver").is_null()) m.solver_json = j["solver"].dump();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    m.wall_ms = j.at("wall_ms").get<double>();
    return m;
}

}  // namespace dml
