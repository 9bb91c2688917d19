#include "hetnet/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "hetnet/deployment.hpp"
#include "hetnet/parallel.hpp"
#include "hetnet/random.hpp"

namespace hetnet {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void io_error(const std::string& what, const std::filesystem::path& path) {
  throw std::runtime_error(what + ": " + path.string());
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) io_error("cannot open for writing", path);
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) io_error("write failed", path);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_error("cannot open for reading", path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

bool looks_like_json(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && (text[pos] == '{' || text[pos] == '[');
}

// Removes UEs that coincide with a ground transmitter by re-drawing them.
void redraw_collocated(NetworkLayout& layout, Rng& rng) {
  if (layout.mbs_height > 0.0) return;
  std::uniform_real_distribution<double> ux(0.0, layout.region.width);
  std::uniform_real_distribution<double> uy(0.0, layout.region.height);
  for (auto& ue : layout.ue) {
    while (std::any_of(layout.mbs.begin(), layout.mbs.end(), [&](const GroundPoint& m) { return m == ue; })) {
      ue = {ux(rng), uy(rng)};
    }
  }
}

ResultRecord base_record(const Scenario& s, std::size_t drop) {
  ResultRecord r;
  r.scenario_id = s.id;
  r.drop = drop;
  r.mode = s.mode;
  r.deployment = s.deployment;
  r.n_uabs = s.n_uabs;
  r.destroyed_fraction = s.destroyed_fraction;
  return r;
}

void fill_counts(ResultRecord& r, const ScheduleCounts::Totals& t) {
  r.n_usf_mue = t.usf_mue;
  r.n_csf_mue = t.csf_mue;
  r.n_usf_uue = t.usf_uue;
  r.n_csf_uue = t.csf_uue;
}

}  // namespace

std::string to_string(Deployment d) { return d == Deployment::Hex ? "hex" : "ga"; }

Deployment deployment_from_string(const std::string& text) {
  if (text == "hex") return Deployment::Hex;
  if (text == "ga") return Deployment::Ga;
  throw std::invalid_argument("unknown deployment '" + text + "' (expected hex or ga)");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json-text"; }

OutputFormat output_format_from_string(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json-text" || text == "json") return OutputFormat::JsonText;
  throw std::invalid_argument("unknown format '" + text + "' (expected csv or json-text)");
}

void Scenario::validate() const {
  if (id.empty()) throw std::invalid_argument("scenario: empty id");
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) {
      throw std::invalid_argument("scenario '" + id + "': id may only contain letters, digits, '-', '_' and '.'");
    }
  }
  if (drops < 1) throw std::invalid_argument("scenario '" + id + "': drops must be at least 1");
  if (!(destroyed_fraction >= 0.0 && destroyed_fraction <= 1.0)) {
    throw std::invalid_argument("scenario '" + id + "': destroyed_fraction must lie in [0, 1]");
  }
  if (n_uabs < 1) throw std::invalid_argument("scenario '" + id + "': n_uabs must be at least 1");
}

std::uint64_t drop_seed(std::uint64_t master_seed, std::size_t drop_index) {
  return derive_seed(master_seed, {drop_index});
}

NetworkLayout build_base_layout(const SimulationSetup& setup, const Scenario& scenario, std::size_t drop_index,
                                std::vector<std::string>* notes) {
  const std::uint64_t seed = drop_seed(scenario.master_seed, drop_index);
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t sub = derive_seed(seed, {attempt});
    Rng mbs_rng = make_rng(derive_seed(sub, {1}));
    Rng ue_rng = make_rng(derive_seed(sub, {2}));
    Rng destroy_rng = make_rng(derive_seed(sub, {3}));

    NetworkLayout layout;
    layout.region = setup.region;
    layout.mbs_height = setup.mbs_height;
    layout.mbs = sample_ppp(setup.mbs_per_km2, setup.region, mbs_rng);
    layout.ue = sample_ppp(setup.ue_per_km2, setup.region, ue_rng);
    if (layout.ue.empty()) {
      if (notes) {
        notes->push_back("scenario " + scenario.id + " drop " + std::to_string(drop_index) + ": zero UEs on attempt " +
                         std::to_string(attempt) + ", re-drawing");
      }
      if (attempt >= 1000) throw std::runtime_error("build_base_layout: UE intensity too low to populate a drop");
      continue;
    }
    layout = destroy_mbs(layout, scenario.destroyed_fraction, destroy_rng);
    redraw_collocated(layout, ue_rng);
    return layout;
  }
}

DropOutput run_drop(const SimulationSetup& setup, const Scenario& scenario, std::size_t drop_index,
                    std::size_t threads) {
  scenario.validate();
  const auto t0 = std::chrono::steady_clock::now();
  DropOutput out;
  NetworkLayout layout = build_base_layout(setup, scenario, drop_index, &out.notes);

  if (scenario.deployment == Deployment::Hex) {
    layout.uabs = place_hex_grid(scenario.n_uabs, setup.region, setup.uabs_altitude);
    const auto search = grid_search_icic(layout, setup.grid, setup.power, scenario.mode, setup.beta, threads);
    for (const auto& p : search.table) out.grid_table.push_back({scenario.id, drop_index, p});

    // Best point per CRE value; ties keep the earliest in grid order.
    std::vector<GridPoint> per_tau;
    for (const auto& p : search.table) {
      auto it = std::find_if(per_tau.begin(), per_tau.end(), [&](const GridPoint& q) { return q.tau_db == p.tau_db; });
      if (it == per_tau.end()) {
        per_tau.push_back(p);
      } else if (p.se_5th > it->se_5th) {
        *it = p;
      }
    }
    for (const auto& p : per_tau) {
      auto r = base_record(scenario, drop_index);
      r.tau_db = p.tau_db;
      r.alpha = p.alpha;
      r.rho_db = p.rho_db;
      r.rho_prime_db = p.rho_prime_db;
      r.se_5pct = p.se_5th;
      fill_counts(r, p.totals);
      out.records.push_back(r);
    }
  } else {
    const FitnessContext context(layout, setup.power, scenario.mode, setup.uabs_altitude, setup.beta);
    const std::uint64_t ga_seed = derive_seed(drop_seed(scenario.master_seed, drop_index), {0x6761});
    const auto ga = ga_optimize(context, scenario.n_uabs, setup.ga, ga_seed, threads);
    const auto ev = context.evaluate(ga.best);
    auto r = base_record(scenario, drop_index);
    r.tau_db = ga.best.tau_db();
    r.alpha = ga.best.alpha();
    r.rho_db = ga.best.rho_db();
    r.rho_prime_db = ga.best.rho_prime_db();
    r.se_5pct = ev.se_5th;
    fill_counts(r, ev.counts.totals());
    out.records.push_back(r);
    for (std::size_t g = 0; g < ga.trace.size(); ++g) out.trace.push_back({scenario.id, drop_index, g, ga.trace[g]});
  }

  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  for (auto& r : out.records) r.wall_ms = ms;
  return out;
}

DropOutput run_campaign(const SimulationSetup& setup, std::span<const Scenario> scenarios, std::size_t threads) {
  std::vector<std::pair<const Scenario*, std::size_t>> jobs;
  for (const auto& s : scenarios) {
    s.validate();
    for (std::size_t d = 0; d < s.drops; ++d) jobs.emplace_back(&s, d);
  }
  threads = std::max<std::size_t>(threads, 1);
  // Few drops: parallelize inside each drop instead of across drops.
  const bool outer = jobs.size() >= threads;
  std::vector<DropOutput> outputs(jobs.size());
  parallel_for(jobs.size(), outer ? threads : 1, [&](std::size_t i) {
    outputs[i] = run_drop(setup, *jobs[i].first, jobs[i].second, outer ? 1 : threads);
  });

  DropOutput all;
  for (auto& o : outputs) {
    all.records.insert(all.records.end(), o.records.begin(), o.records.end());
    all.trace.insert(all.trace.end(), o.trace.begin(), o.trace.end());
    all.grid_table.insert(all.grid_table.end(), o.grid_table.begin(), o.grid_table.end());
    all.notes.insert(all.notes.end(), o.notes.begin(), o.notes.end());
  }
  return all;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median_of: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double percentile_nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile_nearest_rank: empty input");
  if (!(q > 0.0 && q <= 100.0)) throw std::invalid_argument("percentile_nearest_rank: q must lie in (0, 100]");
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q / 100.0 * static_cast<double>(values.size()) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<SummaryRow> aggregate(std::span<const ResultRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");
  using Key = std::tuple<std::string, int, int, std::size_t, double, bool, double>;
  std::map<Key, std::pair<SummaryRow, std::vector<double>>> groups;
  for (const auto& r : records) {
    const bool has_tau = r.deployment == Deployment::Hex;
    const Key key{r.scenario_id, static_cast<int>(r.mode), static_cast<int>(r.deployment), r.n_uabs,
                  r.destroyed_fraction, has_tau, has_tau ? r.tau_db : 0.0};
    auto& g = groups[key];
    if (g.second.empty()) {
      g.first.scenario_id = r.scenario_id;
      g.first.mode = r.mode;
      g.first.deployment = r.deployment;
      g.first.n_uabs = r.n_uabs;
      g.first.destroyed_fraction = r.destroyed_fraction;
      if (has_tau) g.first.tau_db = r.tau_db;
    }
    g.second.push_back(r.se_5pct);
  }
  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (auto& [key, g] : groups) {
    auto& values = g.second;
    std::sort(values.begin(), values.end());
    SummaryRow row = g.first;
    row.count = values.size();
    row.median = median_of(values);
    row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    row.p5 = percentile_nearest_rank(values, 5.0);
    row.p95 = percentile_nearest_rank(values, 95.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{
      "scenario_id", "drop",         "mode",           "deployment", "n_uabs",    "destroyed_fraction",
      "tau_db",      "alpha",        "rho_db",         "rho_prime_db", "se_5pct_bps_hz", "n_usf_mue",
      "n_csf_mue",   "n_usf_uue",    "n_csf_uue",      "wall_ms"};
  return cols;
}

namespace {

nlohmann::ordered_json record_to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["scenario_id"] = r.scenario_id;
  j["drop"] = r.drop;
  j["mode"] = to_string(r.mode);
  j["deployment"] = to_string(r.deployment);
  j["n_uabs"] = r.n_uabs;
  j["destroyed_fraction"] = r.destroyed_fraction;
  j["tau_db"] = r.tau_db;
  j["alpha"] = r.alpha;
  j["rho_db"] = r.rho_db;
  j["rho_prime_db"] = r.rho_prime_db;
  j["se_5pct_bps_hz"] = r.se_5pct;
  j["n_usf_mue"] = r.n_usf_mue;
  j["n_csf_mue"] = r.n_csf_mue;
  j["n_usf_uue"] = r.n_usf_uue;
  j["n_csf_uue"] = r.n_csf_uue;
  j["wall_ms"] = r.wall_ms;
  return j;
}

ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.scenario_id = j.at("scenario_id").get<std::string>();
  r.drop = j.at("drop").get<std::size_t>();
  r.mode = icic_mode_from_string(j.at("mode").get<std::string>());
  r.deployment = deployment_from_string(j.at("deployment").get<std::string>());
  r.n_uabs = j.at("n_uabs").get<std::size_t>();
  r.destroyed_fraction = j.at("destroyed_fraction").get<double>();
  r.tau_db = j.at("tau_db").get<double>();
  r.alpha = j.at("alpha").get<double>();
  r.rho_db = j.at("rho_db").get<double>();
  r.rho_prime_db = j.at("rho_prime_db").get<double>();
  r.se_5pct = j.at("se_5pct_bps_hz").get<double>();
  r.n_usf_mue = j.at("n_usf_mue").get<std::size_t>();
  r.n_csf_mue = j.at("n_csf_mue").get<std::size_t>();
  r.n_usf_uue = j.at("n_usf_uue").get<std::size_t>();
  r.n_csf_uue = j.at("n_csf_uue").get<std::size_t>();
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

ResultRecord record_from_csv(const std::vector<std::string>& f) {
  ResultRecord r;
  r.scenario_id = f[0];
  r.drop = std::stoull(f[1]);
  r.mode = icic_mode_from_string(f[2]);
  r.deployment = deployment_from_string(f[3]);
  r.n_uabs = std::stoull(f[4]);
  r.destroyed_fraction = std::stod(f[5]);
  r.tau_db = std::stod(f[6]);
  r.alpha = std::stod(f[7]);
  r.rho_db = std::stod(f[8]);
  r.rho_prime_db = std::stod(f[9]);
  r.se_5pct = std::stod(f[10]);
  r.n_usf_mue = std::stoull(f[11]);
  r.n_csf_mue = std::stoull(f[12]);
  r.n_usf_uue = std::stoull(f[13]);
  r.n_csf_uue = std::stoull(f[14]);
  r.wall_ms = std::stod(f[15]);
  return r;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols{"scenario_id", "mode",   "deployment",     "n_uabs",
                                             "destroyed_fraction", "tau_db", "drops", "se_5pct_median",
                                             "se_5pct_mean", "se_5pct_p5", "se_5pct_p95"};
  return cols;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

}  // namespace

void write_results(std::span<const ResultRecord> records, const std::filesystem::path& path, OutputFormat format) {
  auto out = open_out(path);
  if (format == OutputFormat::Csv) {
    out << join(result_columns()) << '\n';
    for (const auto& r : records) {
      out << join({r.scenario_id, std::to_string(r.drop), to_string(r.mode), to_string(r.deployment),
                   std::to_string(r.n_uabs), fmt_double(r.destroyed_fraction), fmt_double(r.tau_db),
                   fmt_double(r.alpha), fmt_double(r.rho_db), fmt_double(r.rho_prime_db), fmt_double(r.se_5pct),
                   std::to_string(r.n_usf_mue), std::to_string(r.n_csf_mue), std::to_string(r.n_usf_uue),
                   std::to_string(r.n_csf_uue), fmt_double(r.wall_ms)})
          << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : records) j["records"].push_back(record_to_json(r));
    out << j.dump(1) << '\n';
  }
  close_checked(out, path);
}

std::vector<ResultRecord> read_results(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  std::vector<ResultRecord> records;
  try {
    if (looks_like_json(text)) {
      const auto j = nlohmann::json::parse(text);
      for (const auto& r : j.at("records")) records.push_back(record_from_json(r));
      return records;
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return records;
    if (split(line, ',') != result_columns()) throw std::runtime_error("unexpected CSV header");
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      const auto fields = split(line, ',');
      if (fields.size() != result_columns().size()) throw std::runtime_error("wrong field count");
      records.push_back(record_from_csv(fields));
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("malformed results file (") + e.what() + "): " + path.string());
  }
  return records;
}

void write_summary(std::span<const SummaryRow> rows, const std::filesystem::path& path, OutputFormat format) {
  auto out = open_out(path);
  if (format == OutputFormat::Csv) {
    out << join(summary_columns()) << '\n';
    for (const auto& r : rows) {
      out << join({r.scenario_id, to_string(r.mode), to_string(r.deployment), std::to_string(r.n_uabs),
                   fmt_double(r.destroyed_fraction), r.tau_db ? fmt_double(*r.tau_db) : std::string(),
                   std::to_string(r.count), fmt_double(r.median), fmt_double(r.mean), fmt_double(r.p5),
                   fmt_double(r.p95)})
          << '\n';
    }
  } else {
    nlohmann::ordered_json j;
    j["summary"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json o;
      o["scenario_id"] = r.scenario_id;
      o["mode"] = to_string(r.mode);
      o["deployment"] = to_string(r.deployment);
      o["n_uabs"] = r.n_uabs;
      o["destroyed_fraction"] = r.destroyed_fraction;
      o["tau_db"] = r.tau_db ? nlohmann::ordered_json(*r.tau_db) : nlohmann::ordered_json(nullptr);
      o["drops"] = r.count;
      o["se_5pct_median"] = r.median;
      o["se_5pct_mean"] = r.mean;
      o["se_5pct_p5"] = r.p5;
      o["se_5pct_p95"] = r.p95;
      j["summary"].push_back(o);
    }
    out << j.dump(1) << '\n';
  }
  close_checked(out, path);
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  const std::string text = slurp(path);
  std::vector<SummaryRow> rows;
  try {
    if (looks_like_json(text)) {
      const auto j = nlohmann::json::parse(text);
      for (const auto& o : j.at("summary")) {
        SummaryRow r;
        r.scenario_id = o.at("scenario_id").get<std::string>();
        r.mode = icic_mode_from_string(o.at("mode").get<std::string>());
        r.deployment = deployment_from_string(o.at("deployment").get<std::string>());
        r.n_uabs = o.at("n_uabs").get<std::size_t>();
        r.destroyed_fraction = o.at("destroyed_fraction").get<double>();
        if (!o.at("tau_db").is_null()) r.tau_db = o.at("tau_db").get<double>();
        r.count = o.at("drops").get<std::size_t>();
        r.median = o.at("se_5pct_median").get<double>();
        r.mean = o.at("se_5pct_mean").get<double>();
        r.p5 = o.at("se_5pct_p5").get<double>();
        r.p95 = o.at("se_5pct_p95").get<double>();
        rows.push_back(r);
      }
      return rows;
    }
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) return rows;
    if (split(line, ',') != summary_columns()) throw std::runtime_error("unexpected CSV header");
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split(line, ',');
      if (f.size() != summary_columns().size()) throw std::runtime_error("wrong field count");
      SummaryRow r;
      r.scenario_id = f[0];
      r.mode = icic_mode_from_string(f[1]);
      r.deployment = deployment_from_string(f[2]);
      r.n_uabs = std::stoull(f[3]);
      r.destroyed_fraction = std::stod(f[4]);
      if (!f[5].empty()) r.tau_db = std::stod(f[5]);
      r.count = std::stoull(f[6]);
      r.median = std::stod(f[7]);
      r.mean = std::stod(f[8]);
      r.p5 = std::stod(f[9]);
      r.p95 = std::stod(f[10]);
      rows.push_back(r);
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("malformed summary file (") + e.what() + "): " + path.string());
  }
  return rows;
}

void write_trace(std::span<const GaTracePoint> trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "scenario_id,drop,generation,best_5pct_bps_hz\n";
  for (const auto& t : trace) {
    out << t.scenario_id << ',' << t.drop << ',' << t.generation << ',' << fmt_double(t.best_fitness) << '\n';
  }
  close_checked(out, path);
}

void write_grid_table(std::span<const GridTableRow> rows, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "scenario_id,drop,tau_db,alpha,rho_db,rho_prime_db,se_5pct_bps_hz,n_usf_mue,n_csf_mue,n_usf_uue,n_csf_uue\n";
  for (const auto& r : rows) {
    const auto& p = r.point;
    out << r.scenario_id << ',' << r.drop << ',' << fmt_double(p.tau_db) << ',' << fmt_double(p.alpha) << ','
        << fmt_double(p.rho_db) << ',' << fmt_double(p.rho_prime_db) << ',' << fmt_double(p.se_5th) << ','
        << p.totals.usf_mue << ',' << p.totals.csf_mue << ',' << p.totals.usf_uue << ',' << p.totals.csf_uue
        << '\n';
  }
  close_checked(out, path);
}

}  // namespace hetnet
