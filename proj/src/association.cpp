#include "hetnet/association.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace hetnet {

IcicConfig IcicConfig::from_db(IcicMode mode, double alpha, double tau_db, double rho_db,
                               double rho_prime_db, double beta) {
  IcicConfig c;
  c.mode = mode;
  c.alpha = alpha;
  c.beta = beta;
  c.tau = db_to_linear(tau_db);
  c.rho = db_to_linear(rho_db);
  c.rho_prime = db_to_linear(rho_prime_db);
  c.validate();
  return c;
}

void IcicConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("icic: alpha must lie in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("icic: beta must lie in (0, 1)");
  if (mode == IcicMode::Eicic && alpha != 0.0) throw std::invalid_argument("icic: eICIC requires alpha = 0");
  if (mode == IcicMode::NoIcic && alpha != 1.0) throw std::invalid_argument("icic: no-ICIC requires alpha = 1");
  if (!(tau > 0.0) || !(rho > 0.0) || !(rho_prime > 0.0)) {
    throw std::invalid_argument("icic: tau, rho and rho_prime must be positive linear ratios");
  }
}

ScheduleCounts::Totals ScheduleCounts::totals() const {
  Totals t;
  for (auto n : usf_mbs) t.usf_mue += n;
  for (auto n : csf_mbs) t.csf_mue += n;
  for (auto n : usf_uabs) t.usf_uue += n;
  for (auto n : csf_uabs) t.csf_uue += n;
  return t;
}

std::size_t ScheduleCounts::count_for(const UeAssignment& a) const {
  if (a.tier == Tier::Mbs) return a.subframe == Subframe::Usf ? usf_mbs.at(a.cell) : csf_mbs.at(a.cell);
  return a.subframe == Subframe::Usf ? usf_uabs.at(a.cell) : csf_uabs.at(a.cell);
}

UeAssignment assign_ue(const SirBundle& bundle, const IcicConfig& icic, std::size_t ue_index) {
  if (!bundle.moi_index && !bundle.uoi_index) {
    throw std::invalid_argument("assign_ue: bundle has no serving candidate");
  }
  const double g = bundle.gamma_usf_moi;
  const double g_prime = bundle.gamma_usf_uoi;
  // Missing tiers: no UOI means tau*G' = 0; no MOI forces the UABS side.
  bool to_macro = bundle.uoi_index ? g > icic.tau * g_prime : true;
  if (!bundle.moi_index) to_macro = false;

  UeAssignment a;
  a.ue = ue_index;
  if (to_macro) {
    a.tier = Tier::Mbs;
    a.cell = *bundle.moi_index;
    if (g <= icic.rho) {
      a.subframe = Subframe::Usf;
      a.sir_used = bundle.gamma_usf_moi;
    } else {
      a.subframe = Subframe::Csf;
      a.sir_used = bundle.gamma_csf_moi;
    }
  } else {
    a.tier = Tier::Uabs;
    a.cell = *bundle.uoi_index;
    if (g_prime > icic.rho_prime) {
      a.subframe = Subframe::Usf;
      a.sir_used = bundle.gamma_usf_uoi;
    } else {
      a.subframe = Subframe::Csf;
      a.sir_used = bundle.gamma_csf_uoi;
    }
  }
  return a;
}

ScheduleCounts tally_counts(std::span<const UeAssignment> assignments, std::size_t n_mbs,
                            std::size_t n_uabs) {
  ScheduleCounts counts(n_mbs, n_uabs);
  for (const auto& a : assignments) {
    if (a.tier == Tier::Mbs) {
      if (a.cell >= n_mbs) throw std::out_of_range("tally_counts: MBS index out of range");
      ++(a.subframe == Subframe::Usf ? counts.usf_mbs : counts.csf_mbs)[a.cell];
    } else {
      if (a.cell >= n_uabs) throw std::out_of_range("tally_counts: UABS index out of range");
      ++(a.subframe == Subframe::Usf ? counts.usf_uabs : counts.csf_uabs)[a.cell];
    }
  }
  return counts;
}

ScheduleCounts tally_counts(std::span<const UeAssignment> assignments, const NetworkLayout& layout) {
  return tally_counts(assignments, layout.mbs.size(), layout.uabs.size());
}

double ue_spectral_efficiency(const UeAssignment& assignment, const ScheduleCounts& counts,
                              const IcicConfig& icic) {
  const std::size_t n = counts.count_for(assignment);
  assert(n >= 1 && "UE must be counted in its own class");
  if (n == 0) throw std::logic_error("ue_spectral_efficiency: empty scheduling class");
  const double capacity = std::log2(1.0 + assignment.sir_used);
  double share = 1.0;
  if (assignment.tier == Tier::Mbs) share = assignment.subframe == Subframe::Usf ? icic.beta : 1.0 - icic.beta;
  return share * capacity / static_cast<double>(n);
}

std::size_t fifth_percentile_rank(std::size_t n) { return (5 * n + 99) / 100; }

double fifth_percentile_se(std::span<const double> se_values) {
  if (se_values.empty()) throw std::invalid_argument("fifth_percentile_se: empty SE list");
  std::vector<double> v(se_values.begin(), se_values.end());
  const auto k = fifth_percentile_rank(v.size()) - 1;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
  return v[k];
}

NetworkEvaluation evaluate_links(std::span<const LinkBudget> links, std::size_t n_mbs,
                                 std::size_t n_uabs, const IcicConfig& icic, double sir_cap) {
  NetworkEvaluation ev;
  ev.assignments.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    ev.assignments.push_back(assign_ue(sir_from_link(links[i], icic.alpha, sir_cap), icic, i));
  }
  ev.counts = tally_counts(ev.assignments, n_mbs, n_uabs);
  ev.se.reserve(links.size());
  for (const auto& a : ev.assignments) ev.se.push_back(ue_spectral_efficiency(a, ev.counts, icic));
  ev.se_5th = fifth_percentile_se(ev.se);
  return ev;
}

std::vector<LinkBudget> compute_links(const NetworkLayout& layout, const PowerModel& power) {
  std::vector<LinkBudget> links;
  links.reserve(layout.ue.size());
  for (const auto& ue : layout.ue) links.push_back(link_budget(ue, layout, power));
  return links;
}

NetworkEvaluation evaluate_network(const NetworkLayout& layout, const IcicConfig& icic,
                                   const PowerModel& power) {
  if (layout.ue.empty()) throw std::invalid_argument("evaluate_network: layout has no UEs");
  icic.validate();
  const auto links = compute_links(layout, power);
  return evaluate_links(links, layout.mbs.size(), layout.uabs.size(), icic, power.sir_cap);
}

}  // namespace hetnet
