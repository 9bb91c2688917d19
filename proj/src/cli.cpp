#include "hetnet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "hetnet/campaign.hpp"

namespace hetnet {

namespace {

std::string ext(OutputFormat f) { return f == OutputFormat::Csv ? ".csv" : ".json"; }

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string pct_label(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", fraction * 100.0);
  return buf;
}

}  // namespace

int cmd_run(const RunConfig& config, bool dry_run, std::ostream& out, std::ostream& err) {
  if (config.scenarios.empty()) {
    err << "error: run.preset / scenario.*: no scenarios configured\n";
    return 2;
  }
  const std::filesystem::path dir = config.out_dir;
  if (dry_run) {
    out << "plan: " << config.scenarios.size() << " scenario(s), region " << config.region_width_m << " x "
        << config.region_height_m << " m, threads " << config.threads << ", output " << dir.string() << " ("
        << to_string(config.format) << ")\n";
    for (const auto& s : config.scenarios) {
      out << "  " << s.id << ": mode=" << to_string(s.mode) << " deployment=" << to_string(s.deployment)
          << " n_uabs=" << s.n_uabs << " destroyed=" << s.destroyed_fraction << " drops=" << s.drops
          << " seed=" << s.master_seed;
      if (s.deployment == Deployment::Hex) {
        out << " grid_points=" << config.grid.for_mode(s.mode).size();
      } else {
        out << " ga=" << config.ga.population_size << "x" << config.ga.generations;
      }
      out << '\n';
    }
    return 0;
  }

  DropOutput result;
  try {
    result = run_campaign(config.simulation_setup(), config.scenarios, config.threads);
  } catch (const std::exception& e) {
    err << "error: campaign failed: " << e.what() << '\n';
    return 1;
  }
  if (config.verbosity >= 2) {
    for (const auto& n : result.notes) err << "note: " << n << '\n';
  }

  try {
    write_results(result.records, dir / ("records" + ext(config.format)), config.format);
    const auto summary = aggregate(result.records);
    write_summary(summary, dir / ("summary" + ext(config.format)), config.format);
    if (!result.trace.empty()) write_trace(result.trace, dir / "ga_trace.csv");
    if (!result.grid_table.empty()) write_grid_table(result.grid_table, dir / "grid_table.csv");
    std::ofstream cfg(dir / "config.txt");
    cfg << serialize_config(config);
    if (!cfg) throw std::runtime_error("cannot write " + (dir / "config.txt").string());

    for (const auto& s : config.scenarios) {
      const SummaryRow* best_row = nullptr;
      for (const auto& row : summary) {
        if (row.scenario_id == s.id && (!best_row || row.median > best_row->median)) best_row = &row;
      }
      const ResultRecord* best_rec = nullptr;
      for (const auto& r : result.records) {
        if (r.scenario_id == s.id && (!best_rec || r.se_5pct > best_rec->se_5pct)) best_rec = &r;
      }
      if (!best_row || !best_rec) continue;
      out << s.id << ": median 5pSE " << g(best_row->median) << " bps/Hz";
      if (best_row->tau_db) out << " at CRE " << g(*best_row->tau_db) << " dB";
      out << " over " << best_row->count << " drop(s); best drop " << g(best_rec->se_5pct) << " bps/Hz with tau="
          << g(best_rec->tau_db) << " dB alpha=" << g(best_rec->alpha) << " rho=" << g(best_rec->rho_db)
          << " dB rho'=" << g(best_rec->rho_prime_db) << " dB\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

const std::vector<std::string>& plot_series_names() {
  static const std::vector<std::string> names{"5pse_vs_cre", "5pse_vs_nuabs"};
  return names;
}

std::vector<std::filesystem::path> cmd_plotdata(const std::filesystem::path& results, const std::string& series,
                                                const std::filesystem::path& out_dir) {
  const auto& names = plot_series_names();
  if (std::find(names.begin(), names.end(), series) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("--series: unknown series '" + series + "' (valid: " + list + ")");
  }
  const auto records = read_results(results);
  if (records.empty()) throw std::invalid_argument("--results: no records in " + results.string());
  const auto rows = aggregate(records);
  std::filesystem::create_directories(out_dir);

  std::vector<std::filesystem::path> written;
  auto write_series = [&](const std::filesystem::path& path, const std::string& header,
                          const std::vector<std::pair<double, double>>& points) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << header << '\n';
    for (const auto& [x, y] : points) {
      char buf[80];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", x, y);
      out << buf << '\n';
    }
    written.push_back(path);
  };

  if (series == "5pse_vs_cre") {
    using Key = std::tuple<int, double, std::size_t>;
    std::map<Key, std::vector<std::pair<double, double>>> groups;
    for (const auto& r : rows) {
      if (r.deployment != Deployment::Hex || !r.tau_db) continue;
      groups[{static_cast<int>(r.mode), r.destroyed_fraction, r.n_uabs}].emplace_back(*r.tau_db, r.median);
    }
    if (groups.empty()) throw std::invalid_argument("--series 5pse_vs_cre: results contain no hex CRE sweep");
    for (auto& [key, pts] : groups) {
      std::sort(pts.begin(), pts.end());
      const auto mode = static_cast<IcicMode>(std::get<0>(key));
      const std::string name = "5pse_vs_cre_" + to_string(mode) + "_d" + pct_label(std::get<1>(key)) + "_n" +
                               std::to_string(std::get<2>(key)) + ".csv";
      write_series(out_dir / name, "cre_db,median_5pse_bps_hz", pts);
    }
  } else {
    // Peak median 5pSE over the CRE axis per UABS count.
    using Key = std::tuple<int, int, double>;
    std::map<Key, std::map<std::size_t, double>> groups;
    for (const auto& r : rows) {
      auto& peak = groups[{static_cast<int>(r.deployment), static_cast<int>(r.mode), r.destroyed_fraction}];
      auto [it, inserted] = peak.emplace(r.n_uabs, r.median);
      if (!inserted) it->second = std::max(it->second, r.median);
    }
    for (const auto& [key, peaks] : groups) {
      std::vector<std::pair<double, double>> pts;
      for (const auto& [n, y] : peaks) pts.emplace_back(static_cast<double>(n), y);
      const std::string name = "5pse_vs_nuabs_" + to_string(static_cast<Deployment>(std::get<0>(key))) + "_" +
                               to_string(static_cast<IcicMode>(std::get<1>(key))) + "_d" +
                               pct_label(std::get<2>(key)) + ".csv";
      write_series(out_dir / name, "n_uabs,peak_median_5pse_bps_hz", pts);
    }
  }
  return written;
}

}  // namespace hetnet
