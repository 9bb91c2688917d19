#pragma once
// Brute-force reference model used only by tests. Written straight from the
// model definition with no shared code from the library beyond plain data
// types: every distance, power, interference sum, association and SE value
// is recomputed from raw coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "hetnet/types.hpp"

namespace oracle {

struct Params {
  double p_mbs = 39.810717055349734;  // 46 dBm
  double p_uabs = 1.0;                // 30 dBm
  double k_mbs = 1.0;
  double k_uabs = 1.0;
  double delta = 4.0;
  double alpha = 1.0;
  double beta = 0.5;
  double tau = 1.0;
  double rho = 1.0;
  double rho_prime = 1.0;
  double cap = 1e9;
};

struct Ue {
  int moi = -1;
  int uoi = -1;
  double g = 0, g_csf = 0, gp = 0, gp_csf = 0;
  bool to_uabs = false;
  bool csf = false;
  double sir = 0;
  double se = 0;
};

struct Result {
  std::vector<Ue> ues;
  double se5 = 0;
  std::size_t usf_mue = 0, csf_mue = 0, usf_uue = 0, csf_uue = 0;
};

inline double ratio(double num, double den, double cap) {
  if (den == 0.0) return num == 0.0 ? 0.0 : cap;
  return num / den;
}

inline Result evaluate(const hetnet::NetworkLayout& l, const Params& p) {
  Result r;
  const std::size_t nm = l.mbs.size(), nu = l.uabs.size();
  auto dm = [&](std::size_t ue, std::size_t m) {
    const double dx = l.ue[ue].x - l.mbs[m].x, dy = l.ue[ue].y - l.mbs[m].y;
    return std::sqrt(dx * dx + dy * dy + l.mbs_height * l.mbs_height);
  };
  auto du = [&](std::size_t ue, std::size_t u) {
    const double dx = l.ue[ue].x - l.uabs[u].x, dy = l.ue[ue].y - l.uabs[u].y, dz = l.uabs[u].altitude;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
  };
  for (std::size_t n = 0; n < l.ue.size(); ++n) {
    Ue e;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < nm; ++m)
      if (dm(n, m) < best) best = dm(n, m), e.moi = static_cast<int>(m);
    best = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < nu; ++u)
      if (du(n, u) < best) best = du(n, u), e.uoi = static_cast<int>(u);

    const double sm = e.moi >= 0 ? p.k_mbs * p.p_mbs / std::pow(dm(n, e.moi), p.delta) : 0.0;
    const double su = e.uoi >= 0 ? p.k_uabs * p.p_uabs / std::pow(du(n, e.uoi), p.delta) : 0.0;
    double z_usf = 0, z_csf = 0;
    for (std::size_t m = 0; m < nm; ++m) {
      if (static_cast<int>(m) == e.moi) continue;
      const double s = p.k_mbs * p.p_mbs / std::pow(dm(n, m), p.delta);
      z_usf += s;
      z_csf += p.alpha * s;
    }
    for (std::size_t u = 0; u < nu; ++u) {
      if (static_cast<int>(u) == e.uoi) continue;
      const double s = p.k_uabs * p.p_uabs / std::pow(du(n, u), p.delta);
      z_usf += s;
      z_csf += s;
    }
    e.g = ratio(sm, su + z_usf, p.cap);
    e.g_csf = ratio(p.alpha * sm, su + z_csf, p.cap);
    e.gp = ratio(su, sm + z_usf, p.cap);
    e.gp_csf = ratio(su, p.alpha * sm + z_csf, p.cap);

    if (e.uoi < 0) e.to_uabs = false;
    else if (e.moi < 0) e.to_uabs = true;
    else e.to_uabs = !(e.g > p.tau * e.gp);
    if (e.to_uabs) {
      e.csf = !(e.gp > p.rho_prime);
      e.sir = e.csf ? e.gp_csf : e.gp;
    } else {
      e.csf = e.g > p.rho;
      e.sir = e.csf ? e.g_csf : e.g;
    }
    r.ues.push_back(e);
  }
  for (std::size_t n = 0; n < r.ues.size(); ++n) {
    auto& e = r.ues[n];
    std::size_t peers = 0;
    for (const auto& o : r.ues) {
      if (o.to_uabs != e.to_uabs || o.csf != e.csf) continue;
      if ((e.to_uabs ? o.uoi : o.moi) == (e.to_uabs ? e.uoi : e.moi)) ++peers;
    }
    double share = 1.0;
    if (!e.to_uabs) share = e.csf ? 1.0 - p.beta : p.beta;
    e.se = share * std::log2(1.0 + e.sir) / static_cast<double>(peers);
    if (!e.to_uabs) (e.csf ? r.csf_mue : r.usf_mue)++;
    else (e.csf ? r.csf_uue : r.usf_uue)++;
  }
  std::vector<double> se;
  for (const auto& e : r.ues) se.push_back(e.se);
  std::sort(se.begin(), se.end());
  if (!se.empty()) {
    std::size_t rank = 1;  // smallest k with k/N >= 5%
    while (100 * rank < 5 * se.size()) ++rank;
    r.se5 = se[rank - 1];
  }
  return r;
}

}  // namespace oracle
