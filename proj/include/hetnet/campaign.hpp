#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/optimizer.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

enum class Deployment { Hex, Ga };
enum class OutputFormat { Csv, JsonText };

std::string to_string(Deployment d);
Deployment deployment_from_string(const std::string& text);
std::string to_string(OutputFormat f);
OutputFormat output_format_from_string(const std::string& text);

/// Scenario-independent simulation inputs, already in linear units.
struct SimulationSetup {
  Region region{10'000.0, 10'000.0};
  double mbs_per_km2 = 4.0;
  double ue_per_km2 = 100.0;
  PowerModel power;
  double uabs_altitude = 121.92;
  double mbs_height = 0.0;
  double beta = 0.5;
  IcicGrid grid;
  GaSettings ga;
};

struct Scenario {
  std::string id;
  IcicMode mode = IcicMode::Feicic;
  Deployment deployment = Deployment::Hex;
  std::size_t n_uabs = 7;
  double destroyed_fraction = 0.5;
  std::size_t drops = 100;
  std::uint64_t master_seed = 1;

  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ResultRecord {
  std::string scenario_id;
  std::size_t drop = 0;
  IcicMode mode = IcicMode::Feicic;
  Deployment deployment = Deployment::Hex;
  std::size_t n_uabs = 0;
  double destroyed_fraction = 0.0;
  double tau_db = 0.0;
  double alpha = 0.0;
  double rho_db = 0.0;
  double rho_prime_db = 0.0;
  double se_5pct = 0.0;
  std::size_t n_usf_mue = 0;
  std::size_t n_csf_mue = 0;
  std::size_t n_usf_uue = 0;
  std::size_t n_csf_uue = 0;
  double wall_ms = 0.0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

struct GaTracePoint {
  std::string scenario_id;
  std::size_t drop = 0;
  std::size_t generation = 0;
  double best_fitness = 0.0;
};

struct GridTableRow {
  std::string scenario_id;
  std::size_t drop = 0;
  GridPoint point;
};

struct DropOutput {
  std::vector<ResultRecord> records;
  std::vector<GaTracePoint> trace;
  std::vector<GridTableRow> grid_table;
  std::vector<std::string> notes;
};

/// Seed of drop `drop_index` under `master_seed`.
std::uint64_t drop_seed(std::uint64_t master_seed, std::size_t drop_index);

/// Builds the drop's base layout: PPP macro cells and UEs, macro
/// destruction, no UABSs. Empty UE drops are re-drawn with a perturbed
/// sub-seed; each re-draw is recorded in `notes`.
NetworkLayout build_base_layout(const SimulationSetup& setup, const Scenario& scenario, std::size_t drop_index,
                                std::vector<std::string>* notes = nullptr);

/// Runs one drop. Hex scenarios yield one record per CRE grid value (best
/// over the remaining ICIC parameters); GA scenarios yield one record for
/// the best individual plus a generation trace.
DropOutput run_drop(const SimulationSetup& setup, const Scenario& scenario, std::size_t drop_index,
                    std::size_t threads = 1);

/// Runs every drop of every scenario. Output order is (scenario, drop) and
/// does not depend on `threads`.
DropOutput run_campaign(const SimulationSetup& setup, std::span<const Scenario> scenarios,
                        std::size_t threads = 1);

struct SummaryRow {
  std::string scenario_id;
  IcicMode mode = IcicMode::Feicic;
  Deployment deployment = Deployment::Hex;
  std::size_t n_uabs = 0;
  double destroyed_fraction = 0.0;
  /// Present for hex sweeps; GA records collapse to one row per scenario.
  std::optional<double> tau_db;
  std::size_t count = 0;
  double median = 0.0;
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Order statistics of the 5pSE per parameter point, sorted by key.
std::vector<SummaryRow> aggregate(std::span<const ResultRecord> records);

double median_of(std::vector<double> values);
/// Nearest-rank percentile, q in (0, 100].
double percentile_nearest_rank(std::vector<double> values, double q);

void write_results(std::span<const ResultRecord> records, const std::filesystem::path& path, OutputFormat format);
std::vector<ResultRecord> read_results(const std::filesystem::path& path);
void write_summary(std::span<const SummaryRow> rows, const std::filesystem::path& path, OutputFormat format);
std::vector<SummaryRow> read_summary(const std::filesystem::path& path);
void write_trace(std::span<const GaTracePoint> trace, const std::filesystem::path& path);
void write_grid_table(std::span<const GridTableRow> rows, const std::filesystem::path& path);

/// Column order of the results CSV.
const std::vector<std::string>& result_columns();

}  // namespace hetnet
