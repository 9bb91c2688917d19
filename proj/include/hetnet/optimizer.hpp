#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/radio.hpp"
#include "hetnet/random.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// Search ranges for the shared ICIC parameters, in dB except alpha.
struct IcicRanges {
  double tau_db_min = 0.0;
  double tau_db_max = 15.0;
  double rho_db_min = 20.0;
  double rho_db_max = 40.0;
  double rho_prime_db_min = -20.0;
  double rho_prime_db_max = -10.0;
};

/// GA individual. Gene layout: x1, y1, ..., xN, yN, tau_dB, alpha, rho_dB, rho'_dB.
struct Chromosome {
  static constexpr std::size_t kIcicGenes = 4;

  std::vector<double> genes;
  std::optional<double> fitness;

  Chromosome() = default;
  /// Rejects lengths that do not encode at least one UABS.
  explicit Chromosome(std::vector<double> g);

  static Chromosome from_parts(std::span<const GroundPoint> uabs_xy, double tau_db, double alpha,
                               double rho_db, double rho_prime_db);

  std::size_t n_uabs() const { return (genes.size() - kIcicGenes) / 2; }
  GroundPoint uabs_xy(std::size_t i) const { return {genes[2 * i], genes[2 * i + 1]}; }
  double tau_db() const { return genes[genes.size() - 4]; }
  double alpha() const { return genes[genes.size() - 3]; }
  double rho_db() const { return genes[genes.size() - 2]; }
  double rho_prime_db() const { return genes[genes.size() - 1]; }
};

/// Per-gene closed intervals. alpha collapses to {0} for eICIC and {1}
/// without ICIC.
struct GeneBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  static GeneBounds make(std::size_t n_uabs, const Region& region, IcicMode mode,
                         const IcicRanges& ranges = {});
  std::size_t size() const { return lo.size(); }
  bool contains(const Chromosome& c) const;
  void clamp(Chromosome& c) const;
  Chromosome sample(Rng& rng) const;
};

struct GaSettings {
  std::size_t population_size = 60;
  std::size_t generations = 100;
  double crossover_prob = 0.7;
  double mutation_prob = 0.1;
  std::size_t elitism = 1;

  void validate() const;
  friend bool operator==(const GaSettings&, const GaSettings&) = default;
};

/// Precomputed state for repeated fitness evaluation against one drop. The
/// macro half of every UE's link budget does not depend on UABS placement
/// and is computed once.
class FitnessContext {
 public:
  FitnessContext(NetworkLayout base_layout, PowerModel power, IcicMode mode, double altitude,
                 double beta = 0.5, IcicRanges ranges = {});

  /// 5pSE of the network with UABSs and ICIC parameters taken from the
  /// (clamped) chromosome.
  double operator()(const Chromosome& chromosome) const;
  NetworkEvaluation evaluate(const Chromosome& chromosome) const;

  NetworkLayout materialize(const Chromosome& chromosome) const;
  IcicConfig icic_for(const Chromosome& chromosome) const;
  GeneBounds bounds(std::size_t n_uabs) const;

  const NetworkLayout& base_layout() const { return base_; }
  IcicMode mode() const { return mode_; }

 private:
  NetworkLayout base_;
  PowerModel power_;
  IcicMode mode_;
  double altitude_;
  double beta_;
  IcicRanges ranges_;
  std::vector<LinkBudget> macro_links_;
};

double fitness(const Chromosome& chromosome, const NetworkLayout& base_layout, const PowerModel& power,
               IcicMode mode, double altitude, double beta = 0.5);

/// Fitness-proportional pick; uniform when every fitness is zero.
std::size_t roulette_select(std::span<const Chromosome> population, Rng& rng);

/// Single-point crossover with probability `prob`, otherwise a copy of parent1.
Chromosome crossover(const Chromosome& parent1, const Chromosome& parent2, double prob, Rng& rng);
/// Explicit-cut variant: genes [0, cut) from parent1, [cut, end) from parent2.
Chromosome crossover_at(const Chromosome& parent1, const Chromosome& parent2, std::size_t cut);

/// Resamples each gene uniformly within its bounds with probability `prob`.
Chromosome mutate(Chromosome individual, double prob, Rng& rng, const GeneBounds& bounds);

struct GaResult {
  Chromosome best;
  double best_fitness = 0.0;
  /// Best fitness in the population after initialization and after each
  /// generation (generations + 1 entries).
  std::vector<double> trace;
  double initial_best = 0.0;
  std::size_t evaluations = 0;
};

/// Generational GA with roulette selection and elitism. Individual i of
/// generation g draws from the stream derive_seed(seed, {g, i}), so results
/// do not depend on `threads`. `seeds` are copied into the initial population
/// ahead of random individuals.
GaResult ga_optimize(const FitnessContext& context, std::size_t n_uabs, const GaSettings& settings,
                     std::uint64_t seed, std::size_t threads = 1,
                     std::span<const Chromosome> seeds = {});

struct IcicGrid {
  std::vector<double> tau_db{0, 3, 6, 9, 12, 15};
  std::vector<double> alpha{0, 0.25, 0.5, 0.75, 1};
  std::vector<double> rho_db{20, 25, 30, 35, 40};
  std::vector<double> rho_prime_db{-20, -15, -10};

  /// Copy with alpha pinned to what the mode permits.
  IcicGrid for_mode(IcicMode mode) const;
  void validate(const IcicRanges& ranges = {}) const;
  std::size_t size() const { return tau_db.size() * alpha.size() * rho_db.size() * rho_prime_db.size(); }
  friend bool operator==(const IcicGrid&, const IcicGrid&) = default;
};

struct GridPoint {
  double tau_db = 0.0;
  double alpha = 0.0;
  double rho_db = 0.0;
  double rho_prime_db = 0.0;
  double se_5th = 0.0;
  ScheduleCounts::Totals totals;
};

struct GridSearchResult {
  IcicConfig best;
  GridPoint best_point;
  /// Every grid point, tau outermost then alpha, rho, rho'.
  std::vector<GridPoint> table;
};

GridSearchResult grid_search_icic(const NetworkLayout& layout, const IcicGrid& grid, const PowerModel& power,
                                  IcicMode mode, double beta = 0.5, std::size_t threads = 1);

}  // namespace hetnet
