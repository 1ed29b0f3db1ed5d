#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "qft/config.hpp"

namespace qft {

using Manifest = std::map<std::string, std::string>;

// Runs the experiment named by config.experiment and writes its CSV tables
// plus a manifest.txt into out_dir (created if missing). Returns the manifest
// that was written. Progress notes go to `log`. Throws ConfigError for
// invalid requests and NumericalError when the computation loses validity.
//
// CSV outputs are bit-identical across repeated runs of the same
// configuration; the manifest may carry timing-like keys and is not.
Manifest run_experiment(const CaseConfig& config,
                        const std::filesystem::path& out_dir, int jobs,
                        std::ostream& log);

} // namespace qft
