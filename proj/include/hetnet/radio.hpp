#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>

#include "hetnet/types.hpp"

namespace hetnet {

/// Thrown when a UE sits exactly on a transmitter. The campaign layer
/// re-draws such UEs.
class DegenerateGeometry : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Transmit powers in watts, antenna attenuation factors and path-loss
/// exponent shared by every cell of a tier.
struct PowerModel {
  double p_mbs = dbm_to_watts(46.0);
  double p_uabs = dbm_to_watts(30.0);
  double k_mbs = 1.0;
  double k_uabs = 1.0;
  double delta = 4.0;
  /// SIR reported when a ratio's denominator is exactly zero.
  double sir_cap = 1e9;

  static PowerModel from_dbm(double mbs_dbm, double uabs_dbm, double k_mbs = 1.0,
                             double k_uabs = 1.0, double delta = 4.0);

  double effective_mbs() const { return k_mbs * p_mbs; }
  double effective_uabs() const { return k_uabs * p_uabs; }
  void validate() const;
};

/// The four per-UE SIRs: USF and CSF, from the macro cell of interest (MOI)
/// and from the UAV cell of interest (UOI).
struct SirBundle {
  double gamma_usf_moi = 0.0;
  double gamma_csf_moi = 0.0;
  double gamma_usf_uoi = 0.0;
  double gamma_csf_uoi = 0.0;
  std::optional<std::size_t> moi_index;
  std::optional<std::size_t> uoi_index;
};

struct NearestCells {
  std::optional<std::size_t> moi;
  double d_mn = 0.0;
  std::optional<std::size_t> uoi;
  double d_un = 0.0;
};

/// Received powers from the serving candidates and the interference from
/// every other cell of each tier, before any subframe scaling is applied.
struct LinkBudget {
  std::optional<std::size_t> moi;
  std::optional<std::size_t> uoi;
  double s_mbs = 0.0;
  double s_uabs = 0.0;
  double z_mbs = 0.0;   // non-MOI macro cells at full power
  double z_uabs = 0.0;  // non-UOI aerial cells
};

double received_power(double effective_power, double distance, double delta);

NearestCells nearest_cells(const GroundPoint& ue, const NetworkLayout& layout);

/// Interference at `ue` from every cell other than the excluded MOI and UOI.
/// In CSF the macro interferers are scaled by alpha; aerial interferers
/// always transmit at full power.
double interference_sum(const GroundPoint& ue, const NetworkLayout& layout, Subframe subframe,
                        double alpha, const PowerModel& power,
                        std::optional<std::size_t> exclude_moi,
                        std::optional<std::size_t> exclude_uoi);

/// Fills the macro half of a link budget (moi, s_mbs, z_mbs).
void macro_link(const GroundPoint& ue, std::span<const GroundPoint> mbs, double mbs_height,
                const PowerModel& power, LinkBudget& out);
/// Fills the aerial half of a link budget (uoi, s_uabs, z_uabs).
void aerial_link(const GroundPoint& ue, std::span<const UabsPosition> uabs,
                 const PowerModel& power, LinkBudget& out);

LinkBudget link_budget(const GroundPoint& ue, const NetworkLayout& layout, const PowerModel& power);

/// Applies a subframe power-reduction factor to a link budget.
SirBundle sir_from_link(const LinkBudget& link, double alpha, double sir_cap);

SirBundle compute_sir_bundle(const GroundPoint& ue, const NetworkLayout& layout, double alpha,
                             const PowerModel& power);

}  // namespace hetnet
