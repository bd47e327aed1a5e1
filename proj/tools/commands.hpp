#pragma once

#include <string>
#include <vector>

// Exit codes: 0 success, 1 usage/parameter error, 2 numerical failure.
int run_cli(const std::vector<std::string>& argv);

namespace dmlcli {

// Shared by dispatch and the sweep worker pool.
struct OutputDir {
    std::string dir;
    std::string path(const std::string& name) const;
};
OutputDir resolve_output_dir(const std::string& flag_value);

int cmd_sweep(const std::vector<std::string>& argv, const std::string& out_dir,
              const std::string& param, double from, double to, int n,
              double gamma, int workers, bool emit_manifest);

}  // namespace dmlcli
