// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hetnet/association.hpp"
#include "hetnet/campaign.hpp"
#include "hetnet/deployment.hpp"
#include "hetnet/optimizer.hpp"
#include "oracle.hpp"

using namespace hetnet;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::size_t worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

SimulationSetup small_setup() {
  SimulationSetup s;
  s.region = Region(5'000, 5'000);
  return s;
}

Scenario make_scenario(const std::string& id, Deployment d, IcicMode m, double destroyed, std::size_t drops,
                       std::uint64_t seed) {
  Scenario s;
  s.id = id;
  s.deployment = d;
  s.mode = m;
  s.n_uabs = 7;
  s.destroyed_fraction = destroyed;
  s.drops = drops;
  s.master_seed = seed;
  return s;
}

NetworkLayout small_drop(std::size_t drop, std::uint64_t seed) {
  const auto setup = small_setup();
  auto layout = build_base_layout(setup, make_scenario("acc", Deployment::Hex, IcicMode::Feicic, 0.5, 1, seed), drop);
  layout.uabs = place_hex_grid(7, setup.region, setup.uabs_altitude);
  return layout;
}

bool same(const NetworkEvaluation& a, const NetworkEvaluation& b) {
  if (a.se_5th != b.se_5th || a.se != b.se || a.assignments.size() != b.assignments.size()) return false;
  for (std::size_t i = 0; i < a.assignments.size(); ++i) {
    const auto& x = a.assignments[i];
    const auto& y = b.assignments[i];
    if (x.ue != y.ue || x.tier != y.tier || x.subframe != y.subframe || x.cell != y.cell || x.sir_used != y.sir_used)
      return false;
  }
  return true;
}

// 1. FeICIC with alpha 0 / 1 reproduces eICIC / no ICIC bit for bit.
Outcome reduction_identities() {
  Rng rng(101);
  std::uniform_real_distribution<double> tau(0, 15), rho(20, 40), rp(-20, -10);
  const PowerModel power;
  std::size_t mismatches = 0;
  for (std::size_t d = 0; d < 50; ++d) {
    const auto layout = small_drop(d, 1);
    const double t = tau(rng), r = rho(rng), q = rp(rng);
    const auto f0 = evaluate_network(layout, IcicConfig::from_db(IcicMode::Feicic, 0.0, t, r, q), power);
    const auto e = evaluate_network(layout, IcicConfig::from_db(IcicMode::Eicic, 0.0, t, r, q), power);
    const auto f1 = evaluate_network(layout, IcicConfig::from_db(IcicMode::Feicic, 1.0, t, r, q), power);
    const auto n = evaluate_network(layout, IcicConfig::from_db(IcicMode::NoIcic, 1.0, t, r, q), power);
    mismatches += !same(f0, e) + !same(f1, n);
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 50 drops x 2 identities"};
}

// 2. The four scheduling classes partition the UEs.
Outcome partition() {
  Rng rng(202);
  std::uniform_real_distribution<double> tau(0, 15), alpha(0, 1), rho(20, 40), rp(-20, -10);
  std::size_t evaluations = 0, violations = 0;
  for (std::size_t d = 0; d < 20; ++d) {
    const auto layout = small_drop(d, 2);
    const auto links = compute_links(layout, PowerModel{});
    for (int k = 0; k < 50; ++k) {
      const auto icic = IcicConfig::from_db(IcicMode::Feicic, alpha(rng), tau(rng), rho(rng), rp(rng));
      const auto ev = evaluate_links(links, layout.mbs.size(), layout.uabs.size(), icic, 1e9);
      const auto t = ev.counts.totals();
      std::size_t per_cell = 0;
      for (auto* v : {&ev.counts.usf_mbs, &ev.counts.csf_mbs, &ev.counts.usf_uabs, &ev.counts.csf_uabs})
        for (auto c : *v) per_cell += c;
      violations += t.all() != layout.ue.size() || per_cell != layout.ue.size();
      ++evaluations;
    }
  }
  return {violations == 0 && evaluations >= 1000,
          std::to_string(violations) + " violations over " + std::to_string(evaluations) + " evaluations"};
}

// 3. Frozen layout against an independent brute-force recomputation.
Outcome end_to_end_oracle() {
  NetworkLayout l;
  l.region = Region(2'000, 2'000);
  l.mbs = {{400, 500}, {1600, 1400}};
  l.uabs = {{1000, 1000, 121.92}};
  l.ue = {{100, 100},   {450, 520},   {980, 1010}, {1200, 900},  {1550, 1450},
          {1000, 1300}, {700, 800},   {1300, 1200}, {1900, 1900}, {800, 1100}};
  double worst = 0;
  std::size_t discrete = 0, cases = 0;
  for (double alpha : {0.0, 0.3, 1.0})
    for (double tau_db : {0.0, 6.0, 12.0})
      for (double rho_db : {-5.0, 10.0, 25.0})
        for (double rp_db : {-15.0, 0.0, 8.0}) {
          const auto mode = alpha == 0.0 ? IcicMode::Eicic : alpha == 1.0 ? IcicMode::NoIcic : IcicMode::Feicic;
          const auto icic = IcicConfig::from_db(mode, alpha, tau_db, rho_db, rp_db);
          const auto got = evaluate_network(l, icic, PowerModel{});
          oracle::Params p;
          p.alpha = alpha;
          p.tau = std::pow(10.0, tau_db / 10);
          p.rho = std::pow(10.0, rho_db / 10);
          p.rho_prime = std::pow(10.0, rp_db / 10);
          const auto want = oracle::evaluate(l, p);
          auto rel = [](double a, double b) { return a == b ? 0.0 : std::abs(a - b) / std::abs(b); };
          worst = std::max(worst, rel(got.se_5th, want.se5));
          for (std::size_t n = 0; n < l.ue.size(); ++n) {
            worst = std::max(worst, rel(got.se[n], want.ues[n].se));
            discrete += (got.assignments[n].tier == Tier::Uabs) != want.ues[n].to_uabs;
            discrete += (got.assignments[n].subframe == Subframe::Csf) != want.ues[n].csf;
          }
          ++cases;
        }
  return {worst <= 1e-12 && discrete == 0, fmt("max relative error %.3g", worst) + ", " +
                                               std::to_string(discrete) + " assignment mismatches over " +
                                               std::to_string(cases) + " ICIC settings"};
}

// Median over drops of the per-CRE best 5pSE for one hex scenario.
std::map<double, double> cre_curve(const std::vector<ResultRecord>& records, const std::string& id) {
  std::map<double, std::vector<double>> by_tau;
  for (const auto& r : records)
    if (r.scenario_id == id) by_tau[r.tau_db].push_back(r.se_5pct);
  std::map<double, double> curve;
  for (auto& [t, v] : by_tau) curve[t] = median(v);
  return curve;
}

std::string curve_text(const std::map<double, double>& c) {
  std::string s;
  for (const auto& [t, m] : c) s += (s.empty() ? "" : " ") + fmt("%g:", t) + fmt("%.4g", m);
  return s;
}

struct HexSweep {
  std::vector<ResultRecord> records;
};

const HexSweep& hex_sweep() {
  static const HexSweep sweep = [] {
    const SimulationSetup setup;  // 10 x 10 km
    std::vector<Scenario> sc;
    for (auto m : {IcicMode::NoIcic, IcicMode::Eicic, IcicMode::Feicic}) {
      sc.push_back(make_scenario("hex-" + to_string(m), Deployment::Hex, m, 0.5, 20, 1));
    }
    return HexSweep{run_campaign(setup, sc, worker_count()).records};
  }();
  return sweep;
}

// 4. Without ICIC, 5pSE at 0 dB CRE exceeds 5pSE at 12 dB.
Outcome noicic_trend() {
  const auto c = cre_curve(hex_sweep().records, "hex-none");
  return {c.at(0.0) > c.at(12.0), "median 5pSE by CRE dB over 20 drops: " + curve_text(c)};
}

// 5. With eICIC and FeICIC, the CRE argmax of the median curve lies in [3, 12] dB.
Outcome icic_peak() {
  bool pass = true;
  std::string detail;
  for (const char* id : {"hex-eicic", "hex-feicic"}) {
    const auto c = cre_curve(hex_sweep().records, id);
    const auto best = std::max_element(c.begin(), c.end(), [](auto& a, auto& b) { return a.second < b.second; });
    pass = pass && best->first >= 3.0 && best->first <= 12.0;
    detail += std::string(detail.empty() ? "" : "; ") + id + " argmax " + fmt("%g dB", best->first) + " [" +
              curve_text(c) + "]";
  }
  return {pass, detail};
}

struct Comparison {
  // (mode, destroyed) -> medians
  std::map<std::pair<int, double>, double> ga_median;
  std::map<std::pair<int, double>, double> hex_median;
};

const Comparison& comparison() {
  static const Comparison cmp = [] {
    const SimulationSetup setup;
    std::vector<Scenario> sc;
    for (auto m : {IcicMode::Eicic, IcicMode::Feicic})
      for (double d : {0.5, 0.975}) {
        sc.push_back(make_scenario("ga-" + to_string(m) + fmt("-%g", d), Deployment::Ga, m, d, 10, 7));
        sc.push_back(make_scenario("hex-" + to_string(m) + fmt("-%g", d), Deployment::Hex, m, d, 10, 7));
      }
    const auto records = run_campaign(setup, sc, worker_count()).records;
    Comparison c;
    for (const auto& s : sc) {
      // Per drop: the GA record, or the best grid point over the whole hex grid.
      std::map<std::size_t, double> per_drop;
      for (const auto& r : records)
        if (r.scenario_id == s.id) per_drop[r.drop] = std::max(per_drop[r.drop], r.se_5pct);
      std::vector<double> v;
      for (const auto& [d, x] : per_drop) v.push_back(x);
      auto& target = s.deployment == Deployment::Ga ? c.ga_median : c.hex_median;
      target[{int(s.mode), s.destroyed_fraction}] = median(v);
    }
    return c;
  }();
  return cmp;
}

// 6. GA-optimized placement is no worse than the hex grid (2% tolerance).
Outcome ga_vs_hex() {
  const auto& c = comparison();
  bool pass = true;
  std::string detail;
  for (auto m : {IcicMode::Eicic, IcicMode::Feicic})
    for (double d : {0.5, 0.975}) {
      const double ga = c.ga_median.at({int(m), d}), hex = c.hex_median.at({int(m), d});
      pass = pass && ga >= 0.98 * hex;
      detail += std::string(detail.empty() ? "" : "; ") + to_string(m) + fmt(" %g%%: ", d * 100) +
                fmt("GA %.4g", ga) + fmt(" vs hex %.4g", hex);
    }
  return {pass, detail + " (median over 10 drops, n_uabs 7)"};
}

// 7. At GA-optimized parameters FeICIC beats eICIC on the median.
Outcome feicic_vs_eicic() {
  const auto& c = comparison();
  bool pass = true;
  std::string detail;
  for (double d : {0.5, 0.975}) {
    const double f = c.ga_median.at({int(IcicMode::Feicic), d}), e = c.ga_median.at({int(IcicMode::Eicic), d});
    pass = pass && f >= e;
    detail += std::string(detail.empty() ? "" : "; ") + fmt("%g%%: ", d * 100) + fmt("FeICIC %.4g", f) +
              fmt(" vs eICIC %.4g", e);
  }
  return {pass, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string out;
  for (std::string line; std::getline(in, line);) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

// 8. --threads 1 and --threads 8 give byte-identical result files.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "hetnet_acceptance_threads";
  fs::remove_all(root);
  const std::string args =
      " run --preset fig6-compare --scale small --drops 3 --seed 2024 --set ga.population=20 --set ga.generations=10";
  for (const char* t : {"1", "8"}) {
    const std::string cmd = std::string(HETNET_SIM_EXE) + args + " --threads " + t + " --out " +
                            (root / t).string() + " > " + (root.string() + "_" + t + ".log") + " 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, std::string("hetnet-sim failed with --threads ") + t};
  }
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::directory_iterator(root / "1")) {
    const auto name = entry.path().filename().string();
    if (name == "config.txt") continue;  // records the thread count itself
    std::string a = slurp(entry.path()), b = slurp(root / "8" / name);
    if (name == "records.csv") a = strip_last_column(a), b = strip_last_column(b);
    if (a != b || a.empty()) differing.push_back(name);
    ++compared;
  }
  std::string detail = std::to_string(compared) + " files compared";
  for (const auto& d : differing) detail += ", differs: " + d;
  return {differing.empty() && compared >= 4, detail};
}

// 9. Elitist GA: monotone trace and no loss against the initial population.
Outcome ga_sanity() {
  GaSettings s;
  s.population_size = 30;
  s.generations = 25;
  std::size_t bad = 0;
  std::string gains;
  for (std::uint64_t k = 0; k < 10; ++k) {
    const auto setup = small_setup();
    const auto base = build_base_layout(setup, make_scenario("ga", Deployment::Ga, IcicMode::Feicic, 0.5, 1, 9), k);
    const FitnessContext ctx(base, setup.power, IcicMode::Feicic, setup.uabs_altitude);
    const auto r = ga_optimize(ctx, 7, s, derive_seed(9, {k}), worker_count());
    bool ok = r.trace.size() == s.generations + 1 && r.trace.front() == r.initial_best &&
              r.best_fitness >= r.initial_best && r.best_fitness == r.trace.back();
    for (std::size_t g = 1; g < r.trace.size(); ++g) ok = ok && r.trace[g] >= r.trace[g - 1];
    bad += !ok;
    if (k < 3) gains += fmt(" %.3g", r.best_fitness / std::max(r.initial_best, 1e-300));
  }
  return {bad == 0, std::to_string(bad) + " of 10 runs violate monotonicity; best/initial ratio (first 3):" + gains};
}

// 10. Roulette frequencies and mutation rate.
Outcome operator_statistics() {
  Rng rng(1010);
  // Roulette over 10 individuals with distinct fitness; chi-square, 9 dof,
  // critical value 21.666 at p = 0.01.
  std::vector<Chromosome> pop;
  double total = 0;
  for (int i = 0; i < 10; ++i) {
    Chromosome c({0, 0, 0, 0, 0, 0});
    c.fitness = 0.5 + i;
    total += *c.fitness;
    pop.push_back(c);
  }
  const int draws = 100'000;
  std::vector<double> hits(pop.size(), 0);
  for (int i = 0; i < draws; ++i) hits[roulette_select(pop, rng)] += 1;
  double chi2 = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const double e = draws * *pop[i].fitness / total;
    chi2 += (hits[i] - e) * (hits[i] - e) / e;
  }
  // Mutation at the configured default rate over 10^4 trials per gene.
  const GaSettings settings;
  const auto bounds = GeneBounds::make(7, Region(), IcicMode::Feicic);
  const auto base = bounds.sample(rng);
  const int trials = 10'000;
  std::vector<double> changed(base.genes.size(), 0);
  for (int t = 0; t < trials; ++t) {
    const auto m = mutate(base, settings.mutation_prob, rng, bounds);
    for (std::size_t g = 0; g < m.genes.size(); ++g) changed[g] += m.genes[g] != base.genes[g];
  }
  const double sigma = std::sqrt(settings.mutation_prob * (1 - settings.mutation_prob) / trials);
  double worst = 0;
  for (double c : changed) worst = std::max(worst, std::abs(c / trials - settings.mutation_prob) / sigma);
  return {chi2 < 21.666 && worst < 3.0,
          fmt("roulette chi2 %.3f (9 dof, limit 21.666)", chi2) + fmt(", worst per-gene mutation deviation %.2f sigma", worst)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"reduction identities (alpha 0 = eICIC, alpha 1 = no ICIC)", reduction_identities},
      {"scheduling classes partition the UEs", partition},
      {"frozen layout matches brute-force oracle (1e-12)", end_to_end_oracle},
      {"no ICIC: median 5pSE at 0 dB CRE > at 12 dB", noicic_trend},
      {"eICIC/FeICIC: CRE argmax of median 5pSE in [3, 12] dB", icic_peak},
      {"GA placement >= hex grid (2% tolerance), both destruction levels", ga_vs_hex},
      {"GA-optimized FeICIC >= eICIC on the median", feicic_vs_eicic},
      {"--threads 1 and 8 give identical result files", determinism},
      {"GA trace monotone, best >= initial best, 10 runs", ga_sanity},
      {"roulette chi-square and mutation rate", operator_statistics},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << " -- "
              << o.detail << fmt(" [%.1f s]", s) << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
