#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

/// Rectangle anchored at the origin, sides in meters.
struct Region {
  double width = 10'000.0;
  double height = 10'000.0;

  Region() = default;
  Region(double w, double h) : width(w), height(h) {
    if (!(w > 0.0) || !(h > 0.0)) {
      throw std::invalid_argument("region: width and height must be positive");
    }
  }

  double area_km2() const { return width * height * 1e-6; }
  bool contains(double x, double y) const {
    return x >= 0.0 && x <= width && y >= 0.0 && y <= height;
  }
};

struct GroundPoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const GroundPoint&, const GroundPoint&) = default;
};

struct UabsPosition {
  double x = 0.0;
  double y = 0.0;
  double altitude = 0.0;

  friend bool operator==(const UabsPosition&, const UabsPosition&) = default;
};

/// Positions of every macro cell, aerial cell and user in one drop.
struct NetworkLayout {
  Region region;
  std::vector<GroundPoint> mbs;
  std::vector<UabsPosition> uabs;
  std::vector<GroundPoint> ue;
  /// Macro antenna height. Zero makes macro-to-UE distances planar.
  double mbs_height = 0.0;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;
};

enum class IcicMode { NoIcic, Eicic, Feicic };
enum class Tier { Mbs, Uabs };
enum class Subframe { Usf, Csf };

std::string to_string(IcicMode mode);
IcicMode icic_mode_from_string(const std::string& text);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

}  // namespace hetnet
