#include "hetnet/deployment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace hetnet {

void NetworkLayout::validate() const {
  if (ue.empty()) throw std::invalid_argument("layout: at least one UE is required");
  for (const auto& p : mbs) {
    if (!region.contains(p.x, p.y)) throw std::invalid_argument("layout: MBS outside region");
  }
  for (const auto& p : ue) {
    if (!region.contains(p.x, p.y)) throw std::invalid_argument("layout: UE outside region");
  }
  for (const auto& u : uabs) {
    if (!region.contains(u.x, u.y)) throw std::invalid_argument("layout: UABS outside region");
    if (!(u.altitude > 0.0)) throw std::invalid_argument("layout: UABS altitude must be positive");
    if (u.altitude != uabs.front().altitude) {
      throw std::invalid_argument("layout: all UABSs must share one altitude");
    }
  }
  if (mbs_height < 0.0) throw std::invalid_argument("layout: negative MBS height");
}

std::string to_string(IcicMode mode) {
  switch (mode) {
    case IcicMode::NoIcic: return "none";
    case IcicMode::Eicic: return "eicic";
    case IcicMode::Feicic: return "feicic";
  }
  return "none";
}

IcicMode icic_mode_from_string(const std::string& text) {
  if (text == "none" || text == "noicic" || text == "nim") return IcicMode::NoIcic;
  if (text == "eicic") return IcicMode::Eicic;
  if (text == "feicic") return IcicMode::Feicic;
  throw std::invalid_argument("unknown ICIC mode '" + text + "' (expected none, eicic or feicic)");
}

std::vector<GroundPoint> sample_ppp(double intensity_per_km2, const Region& region, Rng& rng) {
  if (intensity_per_km2 < 0.0) throw std::invalid_argument("sample_ppp: negative intensity");
  std::vector<GroundPoint> points;
  const double mean = intensity_per_km2 * region.area_km2();
  if (mean <= 0.0) return points;
  std::poisson_distribution<long long> count_dist(mean);
  const auto count = count_dist(rng);
  std::uniform_real_distribution<double> ux(0.0, region.width);
  std::uniform_real_distribution<double> uy(0.0, region.height);
  points.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    points.push_back({x, y});
  }
  return points;
}

namespace {

struct Axial {
  int q;
  int r;
};

// Lattice sites at hex distance `ring` from the origin, sorted by polar angle
// starting at the positive x axis.
std::vector<Axial> hex_ring(int ring) {
  if (ring == 0) return {{0, 0}};
  static constexpr std::array<Axial, 6> kDirections{{{1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}}};
  std::vector<Axial> sites;
  Axial cur{kDirections[4].q * ring, kDirections[4].r * ring};
  for (const auto& dir : kDirections) {
    for (int step = 0; step < ring; ++step) {
      sites.push_back(cur);
      cur.q += dir.q;
      cur.r += dir.r;
    }
  }
  auto angle = [](const Axial& a) {
    const double x = a.q + 0.5 * a.r;
    const double y = std::numbers::sqrt3 / 2.0 * a.r;
    double t = std::atan2(y, x);
    return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
  };
  std::sort(sites.begin(), sites.end(),
            [&](const Axial& a, const Axial& b) { return angle(a) < angle(b); });
  return sites;
}

}  // namespace

std::vector<UabsPosition> place_hex_grid(std::size_t n_uabs, const Region& region, double altitude) {
  if (n_uabs == 0) throw std::invalid_argument("place_hex_grid: n_uabs must be at least 1");
  if (!(altitude > 0.0)) throw std::invalid_argument("place_hex_grid: altitude must be positive");

  // Smallest number of full rings holding n_uabs sites: 1 + 3R(R+1).
  int rings = 0;
  while (1 + 3 * static_cast<std::size_t>(rings) * static_cast<std::size_t>(rings + 1) < n_uabs) ++rings;

  const double cx = region.width / 2.0;
  const double cy = region.height / 2.0;
  const double pitch = rings == 0 ? 0.0 : std::min(region.width, region.height) / (2.0 * rings + 1.0);

  std::vector<UabsPosition> out;
  out.reserve(n_uabs);
  for (int k = 0; k <= rings && out.size() < n_uabs; ++k) {
    const auto ring = hex_ring(k);
    const std::size_t remaining = n_uabs - out.size();
    const std::size_t take = std::min(remaining, ring.size());
    for (std::size_t i = 0; i < take; ++i) {
      // Partial rings are spread evenly around the circumference.
      const auto& site = ring[i * ring.size() / take];
      const double x = cx + pitch * (site.q + 0.5 * site.r);
      const double y = cy + pitch * (std::numbers::sqrt3 / 2.0) * site.r;
      out.push_back({std::clamp(x, 0.0, region.width), std::clamp(y, 0.0, region.height), altitude});
    }
  }
  return out;
}

std::size_t destroyed_count(std::size_t n_mbs, double fraction) {
  const double raw = std::floor(fraction * static_cast<double>(n_mbs) + 0.5 + 1e-9);
  return std::min(n_mbs, static_cast<std::size_t>(std::max(0.0, raw)));
}

NetworkLayout destroy_mbs(const NetworkLayout& layout, double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("destroy_mbs: fraction must lie in [0, 1]");
  }
  const std::size_t n = layout.mbs.size();
  const std::size_t remove = destroyed_count(n, fraction);

  // Partial Fisher-Yates: the first `remove` slots end up holding the victims.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < remove; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<bool> destroyed(n, false);
  for (std::size_t i = 0; i < remove; ++i) destroyed[order[i]] = true;

  NetworkLayout out = layout;
  out.mbs.clear();
  out.mbs.reserve(n - remove);
  for (std::size_t i = 0; i < n; ++i) {
    if (!destroyed[i]) out.mbs.push_back(layout.mbs[i]);
  }
  return out;
}

std::string layout_to_json(const NetworkLayout& layout) {
  nlohmann::json j;
  j["region"] = {{"width_m", layout.region.width}, {"height_m", layout.region.height}};
  j["mbs_height_m"] = layout.mbs_height;
  auto& mbs = j["mbs"] = nlohmann::json::array();
  for (const auto& p : layout.mbs) mbs.push_back({p.x, p.y});
  auto& uabs = j["uabs"] = nlohmann::json::array();
  for (const auto& u : layout.uabs) uabs.push_back({u.x, u.y, u.altitude});
  auto& ue = j["ue"] = nlohmann::json::array();
  for (const auto& p : layout.ue) ue.push_back({p.x, p.y});
  return j.dump(1);
}

NetworkLayout layout_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  NetworkLayout layout;
  layout.region = Region(j.at("region").at("width_m").get<double>(), j.at("region").at("height_m").get<double>());
  layout.mbs_height = j.value("mbs_height_m", 0.0);
  for (const auto& p : j.at("mbs")) layout.mbs.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  for (const auto& u : j.at("uabs")) {
    layout.uabs.push_back({u.at(0).get<double>(), u.at(1).get<double>(), u.at(2).get<double>()});
  }
  for (const auto& p : j.at("ue")) layout.ue.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  return layout;
}

}  // namespace hetnet
