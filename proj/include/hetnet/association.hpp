#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hetnet/radio.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// ICIC parameters shared by every cell. Thresholds and the range-expansion
/// bias are stored linear; use from_db() to build from dB settings.
struct IcicConfig {
  IcicMode mode = IcicMode::Feicic;
  double alpha = 1.0;      // macro power reduction in coordinated subframes
  double beta = 0.5;       // uncoordinated-subframe duty cycle
  double rho = 1.0;        // MUE scheduling threshold
  double rho_prime = 1.0;  // UUE scheduling threshold
  double tau = 1.0;        // cell range expansion bias

  static IcicConfig from_db(IcicMode mode, double alpha, double tau_db, double rho_db,
                            double rho_prime_db, double beta = 0.5);
  void validate() const;
};

struct UeAssignment {
  std::size_t ue = 0;
  Tier tier = Tier::Mbs;
  Subframe subframe = Subframe::Usf;
  std::size_t cell = 0;
  double sir_used = 0.0;
};

/// Per-cell UE counts for each (tier, subframe) class.
struct ScheduleCounts {
  std::vector<std::size_t> usf_mbs;
  std::vector<std::size_t> csf_mbs;
  std::vector<std::size_t> usf_uabs;
  std::vector<std::size_t> csf_uabs;

  ScheduleCounts() = default;
  ScheduleCounts(std::size_t n_mbs, std::size_t n_uabs)
      : usf_mbs(n_mbs, 0), csf_mbs(n_mbs, 0), usf_uabs(n_uabs, 0), csf_uabs(n_uabs, 0) {}

  struct Totals {
    std::size_t usf_mue = 0;
    std::size_t csf_mue = 0;
    std::size_t usf_uue = 0;
    std::size_t csf_uue = 0;
    std::size_t all() const { return usf_mue + csf_mue + usf_uue + csf_uue; }
  };
  Totals totals() const;
  std::size_t count_for(const UeAssignment& a) const;
};

/// Cell selection with range expansion followed by USF/CSF scheduling:
///   G >  tau*G' and G <= rho   -> USF-MUE
///   G >  tau*G' and G >  rho   -> CSF-MUE
///   G <= tau*G' and G' >  rho' -> USF-UUE
///   G <= tau*G' and G' <= rho' -> CSF-UUE
/// A UE with no UOI always lands on its MOI, and vice versa.
UeAssignment assign_ue(const SirBundle& bundle, const IcicConfig& icic, std::size_t ue_index = 0);

ScheduleCounts tally_counts(std::span<const UeAssignment> assignments, std::size_t n_mbs,
                            std::size_t n_uabs);
ScheduleCounts tally_counts(std::span<const UeAssignment> assignments, const NetworkLayout& layout);

/// Round-robin share of log2(1 + SIR). Macro classes are weighted by their
/// subframe duty cycle; aerial classes are not.
double ue_spectral_efficiency(const UeAssignment& assignment, const ScheduleCounts& counts,
                              const IcicConfig& icic);

/// Nearest-rank 5th percentile: ascending order, 1-based rank ceil(0.05 N).
double fifth_percentile_se(std::span<const double> se_values);
std::size_t fifth_percentile_rank(std::size_t n);

struct NetworkEvaluation {
  double se_5th = 0.0;
  std::vector<double> se;
  std::vector<UeAssignment> assignments;
  ScheduleCounts counts;
};

/// Scores a set of precomputed per-UE link budgets under one ICIC setting.
NetworkEvaluation evaluate_links(std::span<const LinkBudget> links, std::size_t n_mbs,
                                 std::size_t n_uabs, const IcicConfig& icic, double sir_cap);

std::vector<LinkBudget> compute_links(const NetworkLayout& layout, const PowerModel& power);

NetworkEvaluation evaluate_network(const NetworkLayout& layout, const IcicConfig& icic,
                                   const PowerModel& power);

}  // namespace hetnet
