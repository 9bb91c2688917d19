#include "hetnet/radio.hpp"

#include <cmath>
#include <limits>

namespace hetnet {

namespace {

// 1 / d^delta from a squared distance.
inline double path_gain_sq(double d2, double delta) {
  if (delta == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * delta);
}

inline double ratio_or_cap(double num, double den, double cap) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? cap : 0.0;
}

}  // namespace

PowerModel PowerModel::from_dbm(double mbs_dbm, double uabs_dbm, double k_mbs, double k_uabs,
                                double delta) {
  PowerModel pm;
  pm.p_mbs = dbm_to_watts(mbs_dbm);
  pm.p_uabs = dbm_to_watts(uabs_dbm);
  pm.k_mbs = k_mbs;
  pm.k_uabs = k_uabs;
  pm.delta = delta;
  pm.validate();
  return pm;
}

void PowerModel::validate() const {
  if (!(p_mbs > 0.0) || !(p_uabs > 0.0)) throw std::invalid_argument("power: transmit powers must be positive");
  if (!(k_mbs > 0.0 && k_mbs <= 1.0)) throw std::invalid_argument("power: k_mbs must lie in (0, 1]");
  if (!(k_uabs > 0.0 && k_uabs <= 1.0)) throw std::invalid_argument("power: k_uabs must lie in (0, 1]");
  if (!(delta >= 2.0)) throw std::invalid_argument("power: path-loss exponent must be at least 2");
  if (!(sir_cap > 0.0)) throw std::invalid_argument("power: sir_cap must be positive");
}

double received_power(double effective_power, double distance, double delta) {
  if (!(distance > 0.0)) throw DegenerateGeometry("received_power: zero transmitter distance");
  return effective_power / std::pow(distance, delta);
}

NearestCells nearest_cells(const GroundPoint& ue, const NetworkLayout& layout) {
  if (layout.mbs.empty() && layout.uabs.empty()) {
    throw std::invalid_argument("nearest_cells: no serving candidates in layout");
  }
  NearestCells out;
  double best = std::numeric_limits<double>::infinity();
  const double h2 = layout.mbs_height * layout.mbs_height;
  for (std::size_t i = 0; i < layout.mbs.size(); ++i) {
    const double dx = layout.mbs[i].x - ue.x;
    const double dy = layout.mbs[i].y - ue.y;
    const double d2 = dx * dx + dy * dy + h2;
    if (d2 < best) {
      best = d2;
      out.moi = i;
    }
  }
  if (out.moi) out.d_mn = std::sqrt(best);

  best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < layout.uabs.size(); ++i) {
    const auto& u = layout.uabs[i];
    const double d2 = (u.x - ue.x) * (u.x - ue.x) + (u.y - ue.y) * (u.y - ue.y) + u.altitude * u.altitude;
    if (d2 < best) {
      best = d2;
      out.uoi = i;
    }
  }
  if (out.uoi) out.d_un = std::sqrt(best);
  return out;
}

void macro_link(const GroundPoint& ue, std::span<const GroundPoint> mbs, double mbs_height,
                const PowerModel& power, LinkBudget& out) {
  out.moi.reset();
  out.s_mbs = 0.0;
  out.z_mbs = 0.0;
  if (mbs.empty()) return;

  const double h2 = mbs_height * mbs_height;
  const double p = power.effective_mbs();
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < mbs.size(); ++i) {
    const double dx = mbs[i].x - ue.x;
    const double dy = mbs[i].y - ue.y;
    const double d2 = dx * dx + dy * dy + h2;
    if (!(d2 > 0.0)) throw DegenerateGeometry("UE collocated with an MBS");
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  for (std::size_t i = 0; i < mbs.size(); ++i) {
    if (i == best) continue;
    const double dx = mbs[i].x - ue.x;
    const double dy = mbs[i].y - ue.y;
    total += p * path_gain_sq(dx * dx + dy * dy + h2, power.delta);
  }
  out.moi = best;
  out.s_mbs = p * path_gain_sq(best_d2, power.delta);
  out.z_mbs = total;
}

void aerial_link(const GroundPoint& ue, std::span<const UabsPosition> uabs, const PowerModel& power,
                 LinkBudget& out) {
  out.uoi.reset();
  out.s_uabs = 0.0;
  out.z_uabs = 0.0;
  if (uabs.empty()) return;

  const double p = power.effective_uabs();
  double best_d2 = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < uabs.size(); ++i) {
    const auto& u = uabs[i];
    const double d2 = (u.x - ue.x) * (u.x - ue.x) + (u.y - ue.y) * (u.y - ue.y) + u.altitude * u.altitude;
    if (!(d2 > 0.0)) throw DegenerateGeometry("UE collocated with a UABS");
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  for (std::size_t i = 0; i < uabs.size(); ++i) {
    if (i == best) continue;
    const auto& u = uabs[i];
    const double d2 = (u.x - ue.x) * (u.x - ue.x) + (u.y - ue.y) * (u.y - ue.y) + u.altitude * u.altitude;
    total += p * path_gain_sq(d2, power.delta);
  }
  out.uoi = best;
  out.s_uabs = p * path_gain_sq(best_d2, power.delta);
  out.z_uabs = total;
}

LinkBudget link_budget(const GroundPoint& ue, const NetworkLayout& layout, const PowerModel& power) {
  if (layout.mbs.empty() && layout.uabs.empty()) {
    throw std::invalid_argument("link_budget: no serving candidates in layout");
  }
  LinkBudget link;
  macro_link(ue, layout.mbs, layout.mbs_height, power, link);
  aerial_link(ue, layout.uabs, power, link);
  return link;
}

double interference_sum(const GroundPoint& ue, const NetworkLayout& layout, Subframe subframe,
                        double alpha, const PowerModel& power, std::optional<std::size_t> exclude_moi,
                        std::optional<std::size_t> exclude_uoi) {
  const double h2 = layout.mbs_height * layout.mbs_height;
  double z_mbs = 0.0;
  for (std::size_t i = 0; i < layout.mbs.size(); ++i) {
    if (exclude_moi && *exclude_moi == i) continue;
    const double dx = layout.mbs[i].x - ue.x;
    const double dy = layout.mbs[i].y - ue.y;
    const double d2 = dx * dx + dy * dy + h2;
    if (!(d2 > 0.0)) throw DegenerateGeometry("UE collocated with an MBS");
    z_mbs += power.effective_mbs() * path_gain_sq(d2, power.delta);
  }
  double z_uabs = 0.0;
  for (std::size_t i = 0; i < layout.uabs.size(); ++i) {
    if (exclude_uoi && *exclude_uoi == i) continue;
    const auto& u = layout.uabs[i];
    const double d2 = (u.x - ue.x) * (u.x - ue.x) + (u.y - ue.y) * (u.y - ue.y) + u.altitude * u.altitude;
    z_uabs += power.effective_uabs() * path_gain_sq(d2, power.delta);
  }
  return subframe == Subframe::Usf ? z_mbs + z_uabs : alpha * z_mbs + z_uabs;
}

SirBundle sir_from_link(const LinkBudget& link, double alpha, double sir_cap) {
  const double z_usf = link.z_mbs + link.z_uabs;
  const double z_csf = alpha * link.z_mbs + link.z_uabs;
  const double s_mbs_csf = alpha * link.s_mbs;

  SirBundle b;
  b.moi_index = link.moi;
  b.uoi_index = link.uoi;
  b.gamma_usf_moi = ratio_or_cap(link.s_mbs, link.s_uabs + z_usf, sir_cap);
  b.gamma_csf_moi = alpha * ratio_or_cap(link.s_mbs, link.s_uabs + z_csf, sir_cap);
  b.gamma_usf_uoi = ratio_or_cap(link.s_uabs, link.s_mbs + z_usf, sir_cap);
  b.gamma_csf_uoi = ratio_or_cap(link.s_uabs, s_mbs_csf + z_csf, sir_cap);
  return b;
}

SirBundle compute_sir_bundle(const GroundPoint& ue, const NetworkLayout& layout, double alpha,
                             const PowerModel& power) {
  return sir_from_link(link_budget(ue, layout, power), alpha, power.sir_cap);
}

}  // namespace hetnet
