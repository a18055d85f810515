#pragma once

// Run-wide configuration: thresholds, level boundaries, grading scales,
// level weights, and behavior flags. Every field is optional in the JSON
// config file; command-line flags override file values.

#include <array>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "core.hpp"
#include "io.hpp"

namespace vilscore {

enum class LevelComparator { LighterThan, HeavierThan };

using LevelWeights = std::array<double, 6>;  // Light .. Extreme

struct RunConfig {
  // binarization threshold for the precipitation masks (strict > by default)
  int precipitation_threshold = 16;
  bool inclusive_precipitation = false;  // flips > to >=

  // convective-core threshold (strict >)
  int high_value_threshold = 219;

  // binarization threshold for the classical comparison scores
  int classical_threshold = 74;

  LevelBoundaries level_boundaries = kDefaultLevelBoundaries;
  LevelWeights level_weights{1.0, 1.5, 2.5, 5.0, 10.0, 20.0};

  GradingScale miss_scale{{0.1, 0.2, 0.4}, ScaleOrientation::LowerIsBetter};
  GradingScale far_scale{{0.1, 0.2, 0.3}, ScaleOrientation::LowerIsBetter};
  GradingScale sharpness_scale{{0.5, 0.7, 0.9}, ScaleOrientation::HigherIsBetter};
  GradingScale high_value_scale{{0.3, 0.6, 0.8}, ScaleOrientation::HigherIsBetter};
  GradingScale cumulative_scale{{0.93, 0.97, 0.99}, ScaleOrientation::HigherIsBetter};

  LevelComparator far_level_comparator = LevelComparator::LighterThan;

  // cumulative totals include sub-threshold pixels unless flipped
  bool cumulative_precipitating_only = false;

  // a sequence mismatch direction is reported only when the sector's
  // absolute summed difference reaches this fraction of the ground-truth
  // total
  double sequence_direction_min_fraction = 0.05;

  int parallelism = 1;

  void validate() const {
    auto in_code_range = [](int v) { return v >= 0 && v <= kMaxIntensity; };
    if (!in_code_range(precipitation_threshold) || !in_code_range(high_value_threshold) ||
        !in_code_range(classical_threshold)) {
      throw std::invalid_argument("config: thresholds must lie in [0, 254]");
    }
    validate_boundaries(level_boundaries);
    for (double w : level_weights) {
      if (!(w > 0.0)) throw std::invalid_argument("config: level weights must be positive");
    }
    if (sequence_direction_min_fraction < 0.0 || sequence_direction_min_fraction > 1.0) {
      throw std::invalid_argument("config: direction fraction must lie in [0, 1]");
    }
    if (parallelism < 1) throw std::invalid_argument("config: parallelism must be >= 1");
  }
};

namespace detail {

inline GradingScale scale_from_json(const nlohmann::json& j, const GradingScale& fallback) {
  std::array<double, 3> t = fallback.thresholds;
  ScaleOrientation o = fallback.orientation;
  if (j.contains("thresholds")) {
    const auto& arr = j["thresholds"];
    if (!arr.is_array() || arr.size() != 3) {
      throw std::invalid_argument("config: scale thresholds must be a 3-element array");
    }
    for (int i = 0; i < 3; ++i) t[i] = arr[i].get<double>();
  }
  if (j.contains("orientation")) {
    std::string s = j["orientation"].get<std::string>();
    if (s == "lower_is_better") o = ScaleOrientation::LowerIsBetter;
    else if (s == "higher_is_better") o = ScaleOrientation::HigherIsBetter;
    else throw std::invalid_argument("config: unknown orientation " + s);
  }
  return GradingScale(t, o);
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  if (j.contains("precipitation_threshold"))
    c.precipitation_threshold = j["precipitation_threshold"].get<int>();
  if (j.contains("inclusive_precipitation"))
    c.inclusive_precipitation = j["inclusive_precipitation"].get<bool>();
  if (j.contains("high_value_threshold"))
    c.high_value_threshold = j["high_value_threshold"].get<int>();
  if (j.contains("classical_threshold"))
    c.classical_threshold = j["classical_threshold"].get<int>();
  if (j.contains("level_boundaries")) {
    const auto& arr = j["level_boundaries"];
    if (!arr.is_array() || arr.size() != 6) {
      throw std::invalid_argument("config: level_boundaries must have 6 entries");
    }
    for (int i = 0; i < 6; ++i) c.level_boundaries[i] = static_cast<std::uint8_t>(arr[i].get<int>());
  }
  if (j.contains("level_weights")) {
    const auto& arr = j["level_weights"];
    if (!arr.is_array() || arr.size() != 6) {
      throw std::invalid_argument("config: level_weights must have 6 entries");
    }
    for (int i = 0; i < 6; ++i) c.level_weights[i] = arr[i].get<double>();
  }
  if (j.contains("scales")) {
    const auto& s = j["scales"];
    if (s.contains("miss")) c.miss_scale = detail::scale_from_json(s["miss"], c.miss_scale);
    if (s.contains("false_alarm"))
      c.far_scale = detail::scale_from_json(s["false_alarm"], c.far_scale);
    if (s.contains("sharpness"))
      c.sharpness_scale = detail::scale_from_json(s["sharpness"], c.sharpness_scale);
    if (s.contains("high_value"))
      c.high_value_scale = detail::scale_from_json(s["high_value"], c.high_value_scale);
    if (s.contains("cumulative"))
      c.cumulative_scale = detail::scale_from_json(s["cumulative"], c.cumulative_scale);
  }
  if (j.contains("far_level_comparator")) {
    std::string s = j["far_level_comparator"].get<std::string>();
    if (s == "lighter_than") c.far_level_comparator = LevelComparator::LighterThan;
    else if (s == "heavier_than") c.far_level_comparator = LevelComparator::HeavierThan;
    else throw std::invalid_argument("config: unknown far_level_comparator " + s);
  }
  if (j.contains("cumulative_precipitating_only"))
    c.cumulative_precipitating_only = j["cumulative_precipitating_only"].get<bool>();
  if (j.contains("sequence_direction_min_fraction"))
    c.sequence_direction_min_fraction = j["sequence_direction_min_fraction"].get<double>();
  if (j.contains("parallelism")) c.parallelism = j["parallelism"].get<int>();
  c.validate();
  return c;
}

inline RunConfig read_config(const std::filesystem::path& path) {
  auto bytes = detail::read_all_bytes(path);
  auto j = nlohmann::json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) {
    throw IoError(IoErrorKind::MalformedHeader, path.string() + ": config is not valid JSON");
  }
  return config_from_json(j);
}

}  // namespace vilscore
