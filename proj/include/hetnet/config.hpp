#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hetnet/campaign.hpp"
#include "hetnet/optimizer.hpp"

namespace hetnet {

/// Validated run configuration. Powers and thresholds stay in the units the
/// user wrote (dBm, dB) until simulation_setup() converts them.
///
/// Text format: one `key = value` per line, `#` starts a comment, keys are
/// dotted (`power.mbs_dbm`, `scenario.<id>.mode`). Lists are comma
/// separated. Unknown keys are rejected.
struct RunConfig {
  // region / density
  double region_width_m = 10'000.0;
  double region_height_m = 10'000.0;
  double mbs_per_km2 = 4.0;
  double ue_per_km2 = 100.0;
  // radio
  double mbs_dbm = 46.0;
  double uabs_dbm = 30.0;
  double k_mbs = 1.0;
  double k_uabs = 1.0;
  double pathloss_exponent = 4.0;
  double sir_cap = 1e9;
  double carrier_mhz = 763.0;  // metadata only
  double uabs_altitude_m = 121.92;
  double mbs_height_m = 0.0;
  double beta = 0.5;
  // optimizers
  IcicGrid grid;
  GaSettings ga;
  // run
  std::vector<Scenario> scenarios;
  std::uint64_t seed = 1;
  std::size_t drops = 100;
  std::size_t threads = 1;
  std::string out_dir = "results";
  OutputFormat format = OutputFormat::Csv;
  int verbosity = 1;
  std::string preset;
  std::string scale = "full";
  std::size_t preset_n_uabs = 7;

  SimulationSetup simulation_setup() const;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Raised for any configuration problem; the message names the key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::invalid_argument(key + ": " + what), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Parses `key = value` text. Later duplicates win.
KeyValues parse_key_values(const std::string& text, const std::string& origin = "config");

/// Builds a config from the built-in defaults, then the file text, then the
/// overrides (highest precedence).
RunConfig parse_config_text(const std::string& text, const KeyValues& overrides = {});
RunConfig parse_config(const std::optional<std::filesystem::path>& path, const KeyValues& overrides = {});

/// Canonical text form; parse_config_text(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Scenario list of a named preset.
std::vector<Scenario> preset_scenarios(const std::string& name, std::size_t n_uabs, std::size_t drops,
                                       std::uint64_t seed);
const std::vector<std::string>& preset_names();

/// Environment variables that mirror command-line flags (prefix HETNET_).
KeyValues env_overrides();

}  // namespace hetnet
