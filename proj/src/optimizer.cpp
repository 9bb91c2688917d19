#include "hetnet/optimizer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "hetnet/parallel.hpp"

namespace hetnet {

Chromosome::Chromosome(std::vector<double> g) : genes(std::move(g)) {
  if (genes.size() < kIcicGenes + 2 || (genes.size() - kIcicGenes) % 2 != 0) {
    throw std::invalid_argument("chromosome: gene vector must encode at least one UABS (x, y) pair plus 4 ICIC genes");
  }
}

Chromosome Chromosome::from_parts(std::span<const GroundPoint> uabs_xy, double tau_db, double alpha,
                                  double rho_db, double rho_prime_db) {
  std::vector<double> g;
  g.reserve(2 * uabs_xy.size() + kIcicGenes);
  for (const auto& p : uabs_xy) {
    g.push_back(p.x);
    g.push_back(p.y);
  }
  g.insert(g.end(), {tau_db, alpha, rho_db, rho_prime_db});
  return Chromosome(std::move(g));
}

GeneBounds GeneBounds::make(std::size_t n_uabs, const Region& region, IcicMode mode, const IcicRanges& r) {
  if (n_uabs == 0) throw std::invalid_argument("gene bounds: n_uabs must be at least 1");
  GeneBounds b;
  for (std::size_t i = 0; i < n_uabs; ++i) {
    b.lo.insert(b.lo.end(), {0.0, 0.0});
    b.hi.insert(b.hi.end(), {region.width, region.height});
  }
  double alpha_lo = 0.0;
  double alpha_hi = 1.0;
  if (mode == IcicMode::Eicic) alpha_hi = 0.0;
  if (mode == IcicMode::NoIcic) alpha_lo = 1.0;
  b.lo.insert(b.lo.end(), {r.tau_db_min, alpha_lo, r.rho_db_min, r.rho_prime_db_min});
  b.hi.insert(b.hi.end(), {r.tau_db_max, alpha_hi, r.rho_db_max, r.rho_prime_db_max});
  return b;
}

bool GeneBounds::contains(const Chromosome& c) const {
  if (c.genes.size() != size()) return false;
  for (std::size_t i = 0; i < size(); ++i) {
    if (!(c.genes[i] >= lo[i] && c.genes[i] <= hi[i])) return false;
  }
  return true;
}

void GeneBounds::clamp(Chromosome& c) const {
  if (c.genes.size() != size()) throw std::invalid_argument("gene bounds: chromosome length mismatch");
  for (std::size_t i = 0; i < size(); ++i) c.genes[i] = std::clamp(c.genes[i], lo[i], hi[i]);
}

Chromosome GeneBounds::sample(Rng& rng) const {
  std::vector<double> g(size());
  for (std::size_t i = 0; i < size(); ++i) {
    g[i] = lo[i] == hi[i] ? lo[i] : std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
  }
  return Chromosome(std::move(g));
}

void GaSettings::validate() const {
  if (population_size < 2) throw std::invalid_argument("ga: population_size must be at least 2");
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) throw std::invalid_argument("ga: crossover_prob must lie in [0, 1]");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) throw std::invalid_argument("ga: mutation_prob must lie in [0, 1]");
  if (elitism > population_size) throw std::invalid_argument("ga: elitism exceeds population_size");
}

FitnessContext::FitnessContext(NetworkLayout base_layout, PowerModel power, IcicMode mode, double altitude,
                               double beta, IcicRanges ranges)
    : base_(std::move(base_layout)), power_(power), mode_(mode), altitude_(altitude), beta_(beta), ranges_(ranges) {
  if (base_.ue.empty()) throw std::invalid_argument("fitness: base layout has no UEs");
  if (!(altitude_ > 0.0)) throw std::invalid_argument("fitness: altitude must be positive");
  power_.validate();
  base_.uabs.clear();
  macro_links_.reserve(base_.ue.size());
  for (const auto& ue : base_.ue) {
    LinkBudget link;
    macro_link(ue, base_.mbs, base_.mbs_height, power_, link);
    macro_links_.push_back(link);
  }
}

GeneBounds FitnessContext::bounds(std::size_t n_uabs) const {
  return GeneBounds::make(n_uabs, base_.region, mode_, ranges_);
}

IcicConfig FitnessContext::icic_for(const Chromosome& c) const {
  return IcicConfig::from_db(mode_, c.alpha(), c.tau_db(), c.rho_db(), c.rho_prime_db(), beta_);
}

NetworkLayout FitnessContext::materialize(const Chromosome& chromosome) const {
  Chromosome c = chromosome;
  bounds(c.n_uabs()).clamp(c);
  NetworkLayout layout = base_;
  layout.uabs.clear();
  for (std::size_t i = 0; i < c.n_uabs(); ++i) {
    const auto p = c.uabs_xy(i);
    layout.uabs.push_back({p.x, p.y, altitude_});
  }
  return layout;
}

NetworkEvaluation FitnessContext::evaluate(const Chromosome& chromosome) const {
  Chromosome c = chromosome;
  bounds(c.n_uabs()).clamp(c);
  std::vector<UabsPosition> uabs;
  uabs.reserve(c.n_uabs());
  for (std::size_t i = 0; i < c.n_uabs(); ++i) {
    const auto p = c.uabs_xy(i);
    uabs.push_back({p.x, p.y, altitude_});
  }
  std::vector<LinkBudget> links = macro_links_;
  for (std::size_t i = 0; i < links.size(); ++i) aerial_link(base_.ue[i], uabs, power_, links[i]);
  return evaluate_links(links, base_.mbs.size(), uabs.size(), icic_for(c), power_.sir_cap);
}

double FitnessContext::operator()(const Chromosome& chromosome) const { return evaluate(chromosome).se_5th; }

double fitness(const Chromosome& chromosome, const NetworkLayout& base_layout, const PowerModel& power,
               IcicMode mode, double altitude, double beta) {
  return FitnessContext(base_layout, power, mode, altitude, beta)(chromosome);
}

std::size_t roulette_select(std::span<const Chromosome> population, Rng& rng) {
  if (population.empty()) throw std::invalid_argument("roulette_select: empty population");
  double total = 0.0;
  for (const auto& c : population) {
    if (!c.fitness) throw std::invalid_argument("roulette_select: unevaluated individual");
    if (*c.fitness < 0.0) throw std::invalid_argument("roulette_select: negative fitness");
    total += *c.fitness;
  }
  if (!(total > 0.0)) {
    return std::uniform_int_distribution<std::size_t>(0, population.size() - 1)(rng);
  }
  const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < population.size(); ++i) {
    const double f = *population[i].fitness;
    if (f <= 0.0) continue;
    acc += f;
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

Chromosome crossover_at(const Chromosome& parent1, const Chromosome& parent2, std::size_t cut) {
  if (parent1.genes.size() != parent2.genes.size()) {
    throw std::invalid_argument("crossover: parents differ in gene length");
  }
  if (cut > parent1.genes.size()) throw std::out_of_range("crossover: cut beyond gene vector");
  Chromosome child;
  child.genes = parent1.genes;
  std::copy(parent2.genes.begin() + static_cast<std::ptrdiff_t>(cut), parent2.genes.end(),
            child.genes.begin() + static_cast<std::ptrdiff_t>(cut));
  return child;
}

Chromosome crossover(const Chromosome& parent1, const Chromosome& parent2, double prob, Rng& rng) {
  if (parent1.genes.size() != parent2.genes.size()) {
    throw std::invalid_argument("crossover: parents differ in gene length");
  }
  const bool recombine = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob;
  if (!recombine || parent1.genes.size() < 2) {
    Chromosome child;
    child.genes = parent1.genes;
    return child;
  }
  const auto cut = std::uniform_int_distribution<std::size_t>(1, parent1.genes.size() - 1)(rng);
  return crossover_at(parent1, parent2, cut);
}

Chromosome mutate(Chromosome individual, double prob, Rng& rng, const GeneBounds& bounds) {
  if (individual.genes.size() != bounds.size()) throw std::invalid_argument("mutate: chromosome length mismatch");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  bool changed = false;
  for (std::size_t i = 0; i < individual.genes.size(); ++i) {
    if (coin(rng) < prob) {
      const double lo = bounds.lo[i];
      const double hi = bounds.hi[i];
      individual.genes[i] = lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
      changed = true;
    }
  }
  if (changed) individual.fitness.reset();
  return individual;
}

namespace {

std::size_t argmax_fitness(std::span<const Chromosome> pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (*pop[i].fitness > *pop[best].fitness) best = i;
  }
  return best;
}

}  // namespace

GaResult ga_optimize(const FitnessContext& context, std::size_t n_uabs, const GaSettings& settings,
                     std::uint64_t seed, std::size_t threads, std::span<const Chromosome> seeds) {
  settings.validate();
  const GeneBounds bounds = context.bounds(n_uabs);
  const std::size_t size = settings.population_size;

  std::vector<Chromosome> population(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (i < seeds.size()) {
      population[i] = seeds[i];
      population[i].fitness.reset();
      bounds.clamp(population[i]);
    } else {
      Rng rng = make_rng(derive_seed(seed, {0, i}));
      population[i] = bounds.sample(rng);
    }
  }
  parallel_for(size, threads, [&](std::size_t i) { population[i].fitness = context(population[i]); });

  GaResult result;
  result.evaluations = size;
  std::size_t best = argmax_fitness(population);
  result.best = population[best];
  result.best_fitness = *population[best].fitness;
  result.initial_best = result.best_fitness;
  result.trace.push_back(result.best_fitness);

  for (std::size_t gen = 1; gen <= settings.generations; ++gen) {
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return *population[a].fitness > *population[b].fitness;
    });

    std::vector<Chromosome> next(size);
    for (std::size_t i = 0; i < settings.elitism; ++i) next[i] = population[order[i]];
    parallel_for(size - settings.elitism, threads, [&](std::size_t k) {
      const std::size_t i = settings.elitism + k;
      Rng rng = make_rng(derive_seed(seed, {gen, i}));
      const auto& p1 = population[roulette_select(population, rng)];
      const auto& p2 = population[roulette_select(population, rng)];
      Chromosome child = mutate(crossover(p1, p2, settings.crossover_prob, rng), settings.mutation_prob, rng, bounds);
      bounds.clamp(child);
      child.fitness = context(child);
      next[i] = std::move(child);
    });
    result.evaluations += size - settings.elitism;
    population = std::move(next);

    best = argmax_fitness(population);
    if (*population[best].fitness > result.best_fitness) {
      result.best = population[best];
      result.best_fitness = *population[best].fitness;
    }
    result.trace.push_back(*population[best].fitness);
  }
  return result;
}

IcicGrid IcicGrid::for_mode(IcicMode mode) const {
  IcicGrid g = *this;
  if (mode == IcicMode::Eicic) g.alpha = {0.0};
  if (mode == IcicMode::NoIcic) g.alpha = {1.0};
  return g;
}

void IcicGrid::validate(const IcicRanges& r) const {
  auto check = [](const std::vector<double>& v, double lo, double hi, const char* name) {
    if (v.empty()) throw std::invalid_argument(std::string("icic grid: ") + name + " list is empty");
    for (double x : v) {
      if (!(x >= lo && x <= hi)) throw std::invalid_argument(std::string("icic grid: ") + name + " value out of range");
    }
  };
  check(tau_db, r.tau_db_min, r.tau_db_max, "tau_db");
  check(alpha, 0.0, 1.0, "alpha");
  check(rho_db, r.rho_db_min, r.rho_db_max, "rho_db");
  check(rho_prime_db, r.rho_prime_db_min, r.rho_prime_db_max, "rho_prime_db");
}

GridSearchResult grid_search_icic(const NetworkLayout& layout, const IcicGrid& input_grid, const PowerModel& power,
                                  IcicMode mode, double beta, std::size_t threads) {
  const IcicGrid grid = input_grid.for_mode(mode);
  grid.validate();
  if (layout.ue.empty()) throw std::invalid_argument("grid_search_icic: layout has no UEs");
  const auto links = compute_links(layout, power);

  GridSearchResult out;
  out.table.resize(grid.size());
  std::size_t k = 0;
  for (double t : grid.tau_db)
    for (double a : grid.alpha)
      for (double r : grid.rho_db)
        for (double rp : grid.rho_prime_db) out.table[k++] = GridPoint{t, a, r, rp, 0.0, {}};

  parallel_for(out.table.size(), threads, [&](std::size_t i) {
    auto& p = out.table[i];
    const auto icic = IcicConfig::from_db(mode, p.alpha, p.tau_db, p.rho_db, p.rho_prime_db, beta);
    const auto ev = evaluate_links(links, layout.mbs.size(), layout.uabs.size(), icic, power.sir_cap);
    p.se_5th = ev.se_5th;
    p.totals = ev.counts.totals();
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.table.size(); ++i) {
    if (out.table[i].se_5th > out.table[best].se_5th) best = i;
  }
  out.best_point = out.table[best];
  const auto& b = out.best_point;
  out.best = IcicConfig::from_db(mode, b.alpha, b.tau_db, b.rho_db, b.rho_prime_db, beta);
  return out;
}

}  // namespace hetnet
