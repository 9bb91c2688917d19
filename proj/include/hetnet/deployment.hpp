#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hetnet/random.hpp"
#include "hetnet/types.hpp"

namespace hetnet {

/// Homogeneous Poisson point process over the region. The point count is
/// Poisson(intensity * area), each point uniform and independent.
std::vector<GroundPoint> sample_ppp(double intensity_per_km2, const Region& region, Rng& rng);

/// Hexagonal lattice placement, filled ring by ring from the region center.
/// The pitch is chosen so the outermost ring spans the shorter side.
std::vector<UabsPosition> place_hex_grid(std::size_t n_uabs, const Region& region, double altitude);

/// Removes round-half-up(fraction * N_mbs) macro cells chosen uniformly
/// without replacement. Surviving cells keep their relative order.
NetworkLayout destroy_mbs(const NetworkLayout& layout, double fraction, Rng& rng);

/// Number of macro cells destroyed for a given fraction.
std::size_t destroyed_count(std::size_t n_mbs, double fraction);

std::string layout_to_json(const NetworkLayout& layout);
NetworkLayout layout_from_json(const std::string& text);

}  // namespace hetnet
