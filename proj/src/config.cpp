#include "hetnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace hetnet {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

void check_list_range(const std::string& key, const std::vector<double>& v, double lo, double hi) {
  for (double x : v) {
    if (!(x >= lo && x <= hi)) {
      throw ConfigError(key, "value " + fmt(x) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
  }
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> m;
    auto num = [&m](const char* key, double RunConfig::*field) {
      m[key] = [field](RunConfig& c, const std::string& k, const std::string& v) { c.*field = to_double(k, v); };
    };
    auto count = [&m](const char* key, std::size_t RunConfig::*field) {
      m[key] = [field](RunConfig& c, const std::string& k, const std::string& v) {
        c.*field = static_cast<std::size_t>(to_u64(k, v));
      };
    };
    num("region.width_m", &RunConfig::region_width_m);
    num("region.height_m", &RunConfig::region_height_m);
    num("density.mbs_per_km2", &RunConfig::mbs_per_km2);
    num("density.ue_per_km2", &RunConfig::ue_per_km2);
    num("power.mbs_dbm", &RunConfig::mbs_dbm);
    num("power.uabs_dbm", &RunConfig::uabs_dbm);
    num("power.k_mbs", &RunConfig::k_mbs);
    num("power.k_uabs", &RunConfig::k_uabs);
    num("power.pathloss_exponent", &RunConfig::pathloss_exponent);
    num("power.sir_cap", &RunConfig::sir_cap);
    num("radio.carrier_mhz", &RunConfig::carrier_mhz);
    num("geometry.uabs_altitude_m", &RunConfig::uabs_altitude_m);
    num("geometry.mbs_height_m", &RunConfig::mbs_height_m);
    num("icic.beta", &RunConfig::beta);
    m["grid.tau_db"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.tau_db = to_list(k, v); };
    m["grid.alpha"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.alpha = to_list(k, v); };
    m["grid.rho_db"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.grid.rho_db = to_list(k, v); };
    m["grid.rho_prime_db"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.grid.rho_prime_db = to_list(k, v);
    };
    m["ga.population"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.ga.population_size = static_cast<std::size_t>(to_u64(k, v));
    };
    m["ga.generations"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.ga.generations = static_cast<std::size_t>(to_u64(k, v));
    };
    m["ga.crossover_prob"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.ga.crossover_prob = to_double(k, v);
    };
    m["ga.mutation_prob"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.ga.mutation_prob = to_double(k, v);
    };
    m["ga.elitism"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.ga.elitism = static_cast<std::size_t>(to_u64(k, v));
    };
    m["run.seed"] = [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_u64(k, v); };
    count("run.drops", &RunConfig::drops);
    count("run.threads", &RunConfig::threads);
    count("run.preset_n_uabs", &RunConfig::preset_n_uabs);
    m["run.out_dir"] = [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; };
    m["run.format"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      try {
        c.format = output_format_from_string(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(k, e.what());
      }
    };
    m["run.verbosity"] = [](RunConfig& c, const std::string& k, const std::string& v) {
      c.verbosity = static_cast<int>(to_u64(k, v));
    };
    m["run.preset"] = [](RunConfig& c, const std::string&, const std::string& v) { c.preset = v; };
    m["run.scale"] = [](RunConfig& c, const std::string&, const std::string& v) { c.scale = v; };
    return m;
  }();
  return table;
}

void apply_scenario_key(Scenario& s, const std::string& field, const std::string& key, const std::string& value) {
  try {
    if (field == "mode") {
      s.mode = icic_mode_from_string(value);
    } else if (field == "deployment") {
      s.deployment = deployment_from_string(value);
    } else if (field == "n_uabs") {
      s.n_uabs = static_cast<std::size_t>(to_u64(key, value));
    } else if (field == "destroyed_fraction") {
      s.destroyed_fraction = to_double(key, value);
    } else if (field == "drops") {
      s.drops = static_cast<std::size_t>(to_u64(key, value));
    } else if (field == "seed") {
      s.master_seed = to_u64(key, value);
    } else {
      throw ConfigError(key, "unknown scenario field (expected mode, deployment, n_uabs, destroyed_fraction, drops, seed)");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

void validate(const RunConfig& c) {
  require(c.region_width_m > 0.0, "region.width_m", "must be positive");
  require(c.region_height_m > 0.0, "region.height_m", "must be positive");
  require(c.mbs_per_km2 >= 0.0, "density.mbs_per_km2", "must be non-negative");
  require(c.ue_per_km2 > 0.0, "density.ue_per_km2", "must be positive");
  require(c.k_mbs > 0.0 && c.k_mbs <= 1.0, "power.k_mbs", "must lie in (0, 1]");
  require(c.k_uabs > 0.0 && c.k_uabs <= 1.0, "power.k_uabs", "must lie in (0, 1]");
  require(c.pathloss_exponent >= 2.0, "power.pathloss_exponent", "must be at least 2");
  require(c.sir_cap > 0.0, "power.sir_cap", "must be positive");
  require(c.mbs_dbm > -100.0 && c.mbs_dbm < 100.0, "power.mbs_dbm", "must lie in (-100, 100) dBm");
  require(c.uabs_dbm > -100.0 && c.uabs_dbm < 100.0, "power.uabs_dbm", "must lie in (-100, 100) dBm");
  require(c.carrier_mhz > 0.0, "radio.carrier_mhz", "must be positive");
  require(c.uabs_altitude_m > 0.0, "geometry.uabs_altitude_m", "must be positive");
  require(c.mbs_height_m >= 0.0, "geometry.mbs_height_m", "must be non-negative");
  require(c.beta > 0.0 && c.beta < 1.0, "icic.beta", "must lie in (0, 1)");

  const IcicRanges r;
  require(!c.grid.tau_db.empty(), "grid.tau_db", "must not be empty");
  require(!c.grid.alpha.empty(), "grid.alpha", "must not be empty");
  require(!c.grid.rho_db.empty(), "grid.rho_db", "must not be empty");
  require(!c.grid.rho_prime_db.empty(), "grid.rho_prime_db", "must not be empty");
  check_list_range("grid.tau_db", c.grid.tau_db, r.tau_db_min, r.tau_db_max);
  check_list_range("grid.alpha", c.grid.alpha, 0.0, 1.0);
  check_list_range("grid.rho_db", c.grid.rho_db, r.rho_db_min, r.rho_db_max);
  check_list_range("grid.rho_prime_db", c.grid.rho_prime_db, r.rho_prime_db_min, r.rho_prime_db_max);

  require(c.ga.population_size >= 2, "ga.population", "must be at least 2");
  require(c.ga.crossover_prob >= 0.0 && c.ga.crossover_prob <= 1.0, "ga.crossover_prob", "must lie in [0, 1]");
  require(c.ga.mutation_prob >= 0.0 && c.ga.mutation_prob <= 1.0, "ga.mutation_prob", "must lie in [0, 1]");
  require(c.ga.elitism <= c.ga.population_size, "ga.elitism", "must not exceed ga.population");

  require(c.drops >= 1, "run.drops", "must be at least 1");
  require(c.threads >= 1, "run.threads", "must be at least 1");
  require(c.verbosity >= 0 && c.verbosity <= 3, "run.verbosity", "must lie in [0, 3]");
  require(c.scale == "full" || c.scale == "small", "run.scale", "must be 'full' or 'small'");
  require(c.preset_n_uabs >= 1, "run.preset_n_uabs", "must be at least 1");
  if (!c.preset.empty()) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), c.preset) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw ConfigError("run.preset", "unknown preset '" + c.preset + "' (valid: " + list + ")");
    }
  }
  for (const auto& s : c.scenarios) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scenario." + s.id, e.what());
    }
  }
}

}  // namespace

SimulationSetup RunConfig::simulation_setup() const {
  SimulationSetup s;
  s.region = Region(region_width_m, region_height_m);
  s.mbs_per_km2 = mbs_per_km2;
  s.ue_per_km2 = ue_per_km2;
  s.power = PowerModel::from_dbm(mbs_dbm, uabs_dbm, k_mbs, k_uabs, pathloss_exponent);
  s.power.sir_cap = sir_cap;
  s.uabs_altitude = uabs_altitude_m;
  s.mbs_height = mbs_height_m;
  s.beta = beta;
  s.grid = grid;
  s.ga = ga;
  return s;
}

KeyValues parse_key_values(const std::string& text, const std::string& origin) {
  KeyValues out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno), "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno), "empty key");
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig4-hex-sweep", "fig5-ga", "fig6-compare"};
  return names;
}

std::vector<Scenario> preset_scenarios(const std::string& name, std::size_t n_uabs, std::size_t drops,
                                       std::uint64_t seed) {
  auto make = [&](Deployment d, IcicMode m, double destroyed) {
    Scenario s;
    s.deployment = d;
    s.mode = m;
    s.destroyed_fraction = destroyed;
    s.n_uabs = n_uabs;
    s.drops = drops;
    s.master_seed = seed;
    char pct[16];
    std::snprintf(pct, sizeof pct, "%g", destroyed * 100.0);
    s.id = to_string(d) + "-" + to_string(m) + "-" + pct;
    return s;
  };
  std::vector<Scenario> out;
  const std::vector<double> levels{0.5, 0.975};
  if (name == "fig4-hex-sweep") {
    for (auto m : {IcicMode::NoIcic, IcicMode::Eicic, IcicMode::Feicic})
      for (double f : levels) out.push_back(make(Deployment::Hex, m, f));
  } else if (name == "fig5-ga") {
    for (auto m : {IcicMode::Eicic, IcicMode::Feicic})
      for (double f : levels) out.push_back(make(Deployment::Ga, m, f));
  } else if (name == "fig6-compare") {
    for (auto d : {Deployment::Hex, Deployment::Ga})
      for (auto m : {IcicMode::Eicic, IcicMode::Feicic})
        for (double f : levels) out.push_back(make(d, m, f));
  } else {
    throw ConfigError("run.preset", "unknown preset '" + name + "'");
  }
  return out;
}

RunConfig parse_config_text(const std::string& text, const KeyValues& overrides) {
  KeyValues all = parse_key_values(text);
  all.insert(all.end(), overrides.begin(), overrides.end());

  // Last occurrence wins; keep first-appearance order for scenario ids.
  std::map<std::string, std::string> latest;
  std::vector<std::string> order;
  for (const auto& [k, v] : all) {
    if (!latest.count(k)) order.push_back(k);
    latest[k] = v;
  }

  RunConfig c;
  if (auto it = latest.find("run.scale"); it != latest.end() && it->second == "small") {
    c.region_width_m = 5'000.0;
    c.region_height_m = 5'000.0;
  }
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> scenario_keys;
  for (const auto& key : order) {
    const auto& value = latest[key];
    if (key.rfind("scenario.", 0) == 0) {
      const auto dot = key.rfind('.');
      if (dot <= 9) throw ConfigError(key, "expected scenario.<id>.<field>");
      scenario_keys.push_back({key.substr(9, dot - 9), {key.substr(dot + 1), key}});
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(key, "unknown key");
    it->second(c, key, value);
  }

  if (!c.preset.empty()) {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), c.preset) != names.end()) {
      c.scenarios = preset_scenarios(c.preset, c.preset_n_uabs, c.drops, c.seed);
    }
  }
  for (const auto& [id, fk] : scenario_keys) {
    auto it = std::find_if(c.scenarios.begin(), c.scenarios.end(), [&](const Scenario& s) { return s.id == id; });
    if (it == c.scenarios.end()) {
      Scenario s;
      s.id = id;
      s.drops = c.drops;
      s.master_seed = c.seed;
      c.scenarios.push_back(s);
      it = c.scenarios.end() - 1;
    }
    apply_scenario_key(*it, fk.first, fk.second, latest[fk.second]);
  }
  validate(c);
  return c;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& path, const KeyValues& overrides) {
  std::string text;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("--config", "cannot read " + path->string());
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_config_text(text, overrides);
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  auto kv = [&out](const std::string& k, const std::string& v) { out << k << " = " << v << '\n'; };
  kv("run.scale", c.scale);
  kv("region.width_m", fmt(c.region_width_m));
  kv("region.height_m", fmt(c.region_height_m));
  kv("density.mbs_per_km2", fmt(c.mbs_per_km2));
  kv("density.ue_per_km2", fmt(c.ue_per_km2));
  kv("power.mbs_dbm", fmt(c.mbs_dbm));
  kv("power.uabs_dbm", fmt(c.uabs_dbm));
  kv("power.k_mbs", fmt(c.k_mbs));
  kv("power.k_uabs", fmt(c.k_uabs));
  kv("power.pathloss_exponent", fmt(c.pathloss_exponent));
  kv("power.sir_cap", fmt(c.sir_cap));
  kv("radio.carrier_mhz", fmt(c.carrier_mhz));
  kv("geometry.uabs_altitude_m", fmt(c.uabs_altitude_m));
  kv("geometry.mbs_height_m", fmt(c.mbs_height_m));
  kv("icic.beta", fmt(c.beta));
  kv("grid.tau_db", fmt_list(c.grid.tau_db));
  kv("grid.alpha", fmt_list(c.grid.alpha));
  kv("grid.rho_db", fmt_list(c.grid.rho_db));
  kv("grid.rho_prime_db", fmt_list(c.grid.rho_prime_db));
  kv("ga.population", std::to_string(c.ga.population_size));
  kv("ga.generations", std::to_string(c.ga.generations));
  kv("ga.crossover_prob", fmt(c.ga.crossover_prob));
  kv("ga.mutation_prob", fmt(c.ga.mutation_prob));
  kv("ga.elitism", std::to_string(c.ga.elitism));
  kv("run.seed", std::to_string(c.seed));
  kv("run.drops", std::to_string(c.drops));
  kv("run.threads", std::to_string(c.threads));
  kv("run.out_dir", c.out_dir);
  kv("run.format", to_string(c.format));
  kv("run.verbosity", std::to_string(c.verbosity));
  if (!c.preset.empty()) kv("run.preset", c.preset);
  kv("run.preset_n_uabs", std::to_string(c.preset_n_uabs));
  for (const auto& s : c.scenarios) {
    const std::string p = "scenario." + s.id + ".";
    kv(p + "mode", to_string(s.mode));
    kv(p + "deployment", to_string(s.deployment));
    kv(p + "n_uabs", std::to_string(s.n_uabs));
    kv(p + "destroyed_fraction", fmt(s.destroyed_fraction));
    kv(p + "drops", std::to_string(s.drops));
    kv(p + "seed", std::to_string(s.master_seed));
  }
  return out.str();
}

KeyValues env_overrides() {
  static const std::vector<std::pair<const char*, const char*>> mapping{
      {"HETNET_SEED", "run.seed"},       {"HETNET_DROPS", "run.drops"},   {"HETNET_OUT", "run.out_dir"},
      {"HETNET_PRESET", "run.preset"},   {"HETNET_THREADS", "run.threads"}, {"HETNET_FORMAT", "run.format"},
      {"HETNET_SCALE", "run.scale"}};
  KeyValues out;
  for (const auto& [env, key] : mapping) {
    if (const char* v = std::getenv(env)) out.emplace_back(key, v);
  }
  return out;
}

}  // namespace hetnet
