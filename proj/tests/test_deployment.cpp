#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "hetnet/deployment.hpp"

using namespace hetnet;

TEST_CASE("ppp: zero intensity gives no points") {
  Rng rng(1);
  CHECK(sample_ppp(0.0, Region(10'000, 10'000), rng).empty());
}

TEST_CASE("ppp: points lie inside the region") {
  Rng rng(2);
  const Region r(3'000, 1'000);
  const auto pts = sample_ppp(50.0, r, rng);
  CHECK(!pts.empty());
  for (const auto& p : pts) CHECK(r.contains(p.x, p.y));
}

TEST_CASE("ppp: mean count is intensity times area") {
  // 4 per km2 on 10x10 km: mean 400, sd 20; the mean of 1000 draws has sd 0.632.
  Rng rng(3);
  const Region r(10'000, 10'000);
  double sum = 0;
  for (int i = 0; i < 1000; ++i) sum += static_cast<double>(sample_ppp(4.0, r, rng).size());
  CHECK(std::abs(sum / 1000.0 - 400.0) < 3.0 * std::sqrt(400.0 / 1000.0));
}

TEST_CASE("ppp: count dispersion matches Poisson law") {
  // 100 per km2 on 1x1 km. Variance/mean of a Poisson count is 1; with 2000
  // draws the sample index of dispersion has sd about sqrt(2/1999).
  Rng rng(4);
  const Region r(1'000, 1'000);
  std::vector<double> counts;
  for (int i = 0; i < 2000; ++i) counts.push_back(static_cast<double>(sample_ppp(100.0, r, rng).size()));
  const double mean = std::accumulate(counts.begin(), counts.end(), 0.0) / counts.size();
  double var = 0;
  for (double c : counts) var += (c - mean) * (c - mean);
  var /= counts.size() - 1;
  CHECK(std::abs(mean - 100.0) < 3.0 * std::sqrt(100.0 / 2000.0));
  CHECK(std::abs(var / mean - 1.0) < 4.0 * std::sqrt(2.0 / 1999.0));
}

TEST_CASE("ppp: rejects negative intensity") {
  Rng rng(5);
  CHECK_THROWS_AS(sample_ppp(-1.0, Region(), rng), std::invalid_argument);
}

TEST_CASE("hex: single UABS sits at the region center") {
  const auto u = place_hex_grid(1, Region(10'000, 10'000), 121.92);
  REQUIRE(u.size() == 1);
  CHECK(u[0] == UabsPosition{5000, 5000, 121.92});
}

TEST_CASE("hex: seven UABSs form a center and an equidistant ring") {
  const auto u = place_hex_grid(7, Region(10'000, 10'000), 121.92);
  REQUIRE(u.size() == 7);
  CHECK(u[0].x == doctest::Approx(5000));
  CHECK(u[0].y == doctest::Approx(5000));
  // Nearest-neighbor distance of every point, computed by brute force.
  std::vector<double> nn;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (i != j) best = std::min(best, std::hypot(u[i].x - u[j].x, u[i].y - u[j].y));
    }
    nn.push_back(best);
  }
  for (double d : nn) CHECK(d == doctest::Approx(nn[0]).epsilon(1e-12));
  // Ring points are also exactly one pitch from the center.
  for (std::size_t i = 1; i < 7; ++i) {
    CHECK(std::hypot(u[i].x - 5000, u[i].y - 5000) == doctest::Approx(nn[0]).epsilon(1e-12));
  }
  for (const auto& p : u) CHECK(p.altitude == 121.92);
}

TEST_CASE("hex: all points are distinct and inside the region") {
  const Region r(10'000, 6'000);
  for (std::size_t n : {2u, 5u, 7u, 12u, 19u, 30u, 37u}) {
    const auto u = place_hex_grid(n, r, 100);
    REQUIRE(u.size() == n);
    std::set<std::pair<double, double>> seen;
    for (const auto& p : u) {
      CHECK(r.contains(p.x, p.y));
      seen.insert({p.x, p.y});
    }
    CHECK(seen.size() == n);
  }
}

TEST_CASE("hex: deterministic") {
  CHECK(place_hex_grid(19, Region(), 121.92) == place_hex_grid(19, Region(), 121.92));
}

TEST_CASE("hex: rejects zero count and non-positive altitude") {
  CHECK_THROWS(place_hex_grid(0, Region(), 100));
  CHECK_THROWS(place_hex_grid(3, Region(), 0));
}

namespace {
NetworkLayout grid_layout(std::size_t n_mbs) {
  NetworkLayout l;
  for (std::size_t i = 0; i < n_mbs; ++i) l.mbs.push_back({double(i % 20) * 400 + 100, double(i / 20) * 400 + 100});
  l.ue.push_back({50, 50});
  return l;
}
}  // namespace

TEST_CASE("destroy: fraction 0 leaves the layout unchanged") {
  Rng rng(6);
  const auto l = grid_layout(40);
  CHECK(destroy_mbs(l, 0.0, rng).mbs == l.mbs);
}

TEST_CASE("destroy: fraction 1 removes every macro cell") {
  Rng rng(7);
  CHECK(destroy_mbs(grid_layout(40), 1.0, rng).mbs.empty());
}

TEST_CASE("destroy: half of 400 leaves exactly 200") {
  Rng rng(8);
  CHECK(destroy_mbs(grid_layout(400), 0.5, rng).mbs.size() == 200);
  CHECK(destroy_mbs(grid_layout(400), 0.975, rng).mbs.size() == 10);
}

TEST_CASE("destroy: survivors are a subset in original order; others untouched") {
  Rng rng(9);
  const auto l = grid_layout(100);
  const auto d = destroy_mbs(l, 0.3, rng);
  CHECK(d.mbs.size() == 70);
  std::size_t j = 0;
  for (const auto& p : d.mbs) {
    while (j < l.mbs.size() && !(l.mbs[j] == p)) ++j;
    REQUIRE(j < l.mbs.size());
    ++j;
  }
  CHECK(d.ue == l.ue);
}

TEST_CASE("destroy: every cell is equally likely to go") {
  // 10 cells, 5 destroyed; each cell survives with probability 1/2.
  Rng rng(10);
  const auto l = grid_layout(10);
  std::vector<int> survived(10, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    for (const auto& p : destroy_mbs(l, 0.5, rng).mbs) {
      for (std::size_t i = 0; i < 10; ++i) if (l.mbs[i] == p) ++survived[i];
    }
  }
  const double sd = std::sqrt(trials * 0.25);
  for (int s : survived) CHECK(std::abs(s - trials / 2.0) < 4 * sd);
}

TEST_CASE("destroy: count rounds half up and rejects bad fractions") {
  CHECK(destroyed_count(400, 0.975) == 390);
  CHECK(destroyed_count(3, 0.5) == 2);
  CHECK(destroyed_count(0, 0.5) == 0);
  Rng rng(11);
  CHECK_THROWS(destroy_mbs(grid_layout(4), 1.5, rng));
  CHECK_THROWS(destroy_mbs(grid_layout(4), -0.1, rng));
}

TEST_CASE("layout json round trip") {
  NetworkLayout l;
  l.region = Region(1234.5, 678.25);
  l.mbs = {{1.0 / 3.0, 2}, {100, 200}};
  l.uabs = {{10, 20, 121.92}};
  l.ue = {{0.1, 0.2}, {600, 600}};
  l.mbs_height = 25;
  const auto back = layout_from_json(layout_to_json(l));
  CHECK(back.mbs == l.mbs);
  CHECK(back.uabs == l.uabs);
  CHECK(back.ue == l.ue);
  CHECK(back.region.width == l.region.width);
  CHECK(back.mbs_height == 25);
}
