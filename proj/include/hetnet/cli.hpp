#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "hetnet/config.hpp"

namespace hetnet {

/// Executes every scenario and writes records, summary, GA traces and grid
/// tables under config.out_dir. With dry_run, prints the plan and writes
/// nothing. Returns a process exit status.
int cmd_run(const RunConfig& config, bool dry_run, std::ostream& out, std::ostream& err);

const std::vector<std::string>& plot_series_names();

/// Extracts two-column plot series from a results file into out_dir and
/// returns the files written. Throws std::invalid_argument for an unknown
/// series or an empty/unsuitable results file.
std::vector<std::filesystem::path> cmd_plotdata(const std::filesystem::path& results, const std::string& series,
                                                const std::filesystem::path& out_dir);

}  // namespace hetnet
