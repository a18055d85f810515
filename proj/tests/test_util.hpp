#pragma once

// Shared fixture helpers for the test suites.

#include <cstdint>
#include <random>
#include <vector>

#include <vilscore/core.hpp>

#include "oracle.hpp"

namespace testutil {

inline vilscore::RadarFrame random_frame(std::mt19937& rng, int w, int h, int max_value = 254) {
  std::uniform_int_distribution<int> dist(0, max_value);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h);
  for (auto& x : v) x = static_cast<std::uint8_t>(dist(rng));
  return vilscore::RadarFrame(w, h, std::move(v));
}

// Sparse field: mostly zero with scattered intensity, closer to real VIL.
inline vilscore::RadarFrame random_sparse_frame(std::mt19937& rng, int w, int h) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> dist(0, 254);
  std::vector<std::uint8_t> v(static_cast<std::size_t>(w) * h, 0);
  for (auto& x : v) {
    if (coin(rng) < 0.3) x = static_cast<std::uint8_t>(dist(rng));
  }
  return vilscore::RadarFrame(w, h, std::move(v));
}

inline oracle::Grid to_grid(const vilscore::RadarFrame& f) {
  oracle::Grid g;
  g.w = f.width();
  g.h = f.height();
  g.v.assign(f.values().begin(), f.values().end());
  return g;
}

}  // namespace testutil
