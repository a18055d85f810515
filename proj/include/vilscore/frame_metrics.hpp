#pragma once

// Frame-level attribute computation: miss and false-alarm rates with their
// rainfall-level and direction attributions, Sobel sharpness, high-value
// mismatch, maximum rainfall level, and the directional precipitation
// distribution. All functions are pure over immutable frames.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "config.hpp"
#include "core.hpp"

namespace vilscore {

enum class MismatchType { UnderPredict, Balanced, OverPredict };

inline std::string_view to_string(MismatchType t) {
  switch (t) {
    case MismatchType::UnderPredict: return "under-predict";
    case MismatchType::Balanced: return "balanced";
    case MismatchType::OverPredict: return "over-predict";
  }
  return "?";
}

using BoolMask = std::vector<bool>;
using SectorCounts = std::array<std::int64_t, 9>;

// --------------------------------------------------------------------------
// Masks and contingency
// --------------------------------------------------------------------------

// Precipitation test is strict by default: value > threshold. The inclusive
// flag switches to value >= threshold.
inline BoolMask binarize(const RadarFrame& frame, int threshold, bool inclusive = false) {
  if (threshold < 0 || threshold > kMaxIntensity) {
    throw std::invalid_argument("binarize: threshold must lie in [0, 254]");
  }
  BoolMask mask(frame.pixel_count());
  const auto& v = frame.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    mask[i] = inclusive ? v[i] >= threshold : v[i] > threshold;
  }
  return mask;
}

inline ContingencyTable contingency(const BoolMask& gt_mask, const BoolMask& pred_mask) {
  if (gt_mask.size() != pred_mask.size()) {
    throw std::invalid_argument("contingency: mask sizes differ");
  }
  ContingencyTable t;
  for (std::size_t i = 0; i < gt_mask.size(); ++i) {
    if (gt_mask[i] && pred_mask[i]) t.hits++;
    else if (gt_mask[i]) t.misses++;
    else if (pred_mask[i]) t.false_alarms++;
    else t.correct_negatives++;
  }
  return t;
}

// M/(H+M); 0 when no event pixels exist (perfect absence is correct).
inline double miss_rate(const ContingencyTable& t) {
  std::uint64_t den = t.hits + t.misses;
  return den == 0 ? 0.0 : static_cast<double>(t.misses) / static_cast<double>(den);
}

// F/(H+F); same empty-denominator convention.
inline double far_rate(const ContingencyTable& t) {
  std::uint64_t den = t.hits + t.false_alarms;
  return den == 0 ? 0.0 : static_cast<double>(t.false_alarms) / static_cast<double>(den);
}

// --------------------------------------------------------------------------
// Rainfall-level attribution
// --------------------------------------------------------------------------

// Weighted-count argmax over the six precipitation classes of the error
// pixels' ground-truth levels. Sunny is returned when error pixels exist
// only below the first boundary (the false-alarm case over clear ground
// truth); no error pixels at all yields nullopt. Ties break toward the
// lighter level.
inline std::optional<RainfallLevel> raw_rainfall_level(const std::vector<RainfallLevel>& gt_levels,
                                                       const BoolMask& error_mask,
                                                       const LevelWeights& weights) {
  if (gt_levels.size() != error_mask.size()) {
    throw std::invalid_argument("raw_rainfall_level: size mismatch");
  }
  std::array<std::int64_t, kRainfallLevelCount> counts{};
  for (std::size_t i = 0; i < error_mask.size(); ++i) {
    if (error_mask[i]) counts[ordinal(gt_levels[i])]++;
  }
  std::int64_t error_total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  if (error_total == 0) return std::nullopt;

  double best = 0.0;
  int best_level = -1;
  for (int k = 1; k <= kPrecipitationLevelCount; ++k) {
    double weighted = static_cast<double>(counts[k]) * weights[k - 1];
    if (counts[k] > 0 && weighted > best) {
      best = weighted;
      best_level = k;
    }
  }
  if (best_level < 0) return RainfallLevel::Sunny;
  return static_cast<RainfallLevel>(best_level);
}

// Histogram of predicted levels at the given locations; returns the most
// frequent level satisfying the comparator against the raw level. Only
// levels that actually occur qualify. Ties break toward the lighter level.
inline std::optional<RainfallLevel> error_rainfall_level(
    const std::vector<RainfallLevel>& pred_levels, const BoolMask& locations, RainfallLevel raw,
    LevelComparator comparator) {
  if (pred_levels.size() != locations.size()) {
    throw std::invalid_argument("error_rainfall_level: size mismatch");
  }
  std::array<std::int64_t, kRainfallLevelCount> histogram{};
  for (std::size_t i = 0; i < locations.size(); ++i) {
    if (locations[i]) histogram[ordinal(pred_levels[i])]++;
  }
  std::int64_t best = 0;
  int best_level = -1;
  for (int k = 0; k < kRainfallLevelCount; ++k) {
    bool satisfies = comparator == LevelComparator::LighterThan ? k < ordinal(raw)
                                                                : k > ordinal(raw);
    if (satisfies && histogram[k] > best) {
      best = histogram[k];
      best_level = k;
    }
  }
  if (best_level < 0) return std::nullopt;
  return static_cast<RainfallLevel>(best_level);
}

// --------------------------------------------------------------------------
// Direction attribution
// --------------------------------------------------------------------------

// Sectors ordered by error rate (descending, row-major tie order); the
// first whose raw-pixel count is among the two largest counts wins. All
// raw counts zero yields nullopt.
inline std::optional<Direction> error_direction(const std::array<double, 9>& per_sector_rates,
                                                const SectorCounts& per_sector_raw_counts) {
  std::int64_t max_count = 0;
  for (std::int64_t c : per_sector_raw_counts) max_count = std::max(max_count, c);
  if (max_count == 0) return std::nullopt;

  // second-largest value (with multiplicity)
  SectorCounts sorted = per_sector_raw_counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::int64_t second = sorted[1];

  std::array<int, 9> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return per_sector_rates[a] > per_sector_rates[b];
  });
  for (int s : order) {
    std::int64_t c = per_sector_raw_counts[s];
    if (c > 0 && c >= second) return static_cast<Direction>(s);
  }
  return std::nullopt;  // unreachable while some count is positive
}

// --------------------------------------------------------------------------
// Sharpness
// --------------------------------------------------------------------------

// Mean Sobel gradient magnitude over interior pixels (no padding; the
// one-pixel border is excluded so both frames lose the same ring).
inline double sobel_mean(const RadarFrame& frame) {
  int w = frame.width(), h = frame.height();
  if (w < 3 || h < 3) {
    throw std::invalid_argument("sobel_mean: needs at least 3x3");
  }
  double sum = 0.0;
  for (int y = 1; y < h - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      double gx = -frame.at(x - 1, y - 1) + frame.at(x + 1, y - 1) - 2.0 * frame.at(x - 1, y) +
                  2.0 * frame.at(x + 1, y) - frame.at(x - 1, y + 1) + frame.at(x + 1, y + 1);
      double gy = -frame.at(x - 1, y - 1) - 2.0 * frame.at(x, y - 1) - frame.at(x + 1, y - 1) +
                  frame.at(x - 1, y + 1) + 2.0 * frame.at(x, y + 1) + frame.at(x + 1, y + 1);
      sum += std::sqrt(gx * gx + gy * gy);
    }
  }
  return sum / (static_cast<double>(w - 2) * static_cast<double>(h - 2));
}

// Folded ratio of mean Sobel values: d = |r| for |r| <= 1, 2 - |r| above,
// clipped at zero. Equal structure scores 1; both-flat scores 1; structure
// where the truth has none scores 0.
inline double sharpness_score(const RadarFrame& pred, const RadarFrame& gt) {
  if (!pred.same_dimensions(gt)) {
    throw std::invalid_argument("sharpness_score: dimension mismatch");
  }
  double s_gt = sobel_mean(gt);
  double s_pred = sobel_mean(pred);
  if (s_gt == 0.0) return s_pred == 0.0 ? 1.0 : 0.0;
  double r = std::fabs(s_pred / s_gt);
  double d = r > 1.0 ? 2.0 - r : r;
  return std::max(0.0, d);
}

// --------------------------------------------------------------------------
// High-value mismatch
// --------------------------------------------------------------------------

struct HighValueMismatch {
  double score = 1.0;
  MismatchType type = MismatchType::Balanced;
  SectorCounts sector_diff{};  // prediction minus ground truth, per sector
  std::optional<Direction> direction;
  std::int64_t gt_count = 0;
  std::int64_t pred_count = 0;
};

inline HighValueMismatch high_value_mismatch(const RadarFrame& pred, const RadarFrame& gt,
                                             int hv_threshold) {
  if (!pred.same_dimensions(gt)) {
    throw std::invalid_argument("high_value_mismatch: dimension mismatch");
  }
  HighValueMismatch out;
  int w = gt.width(), h = gt.height();
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    bool g = gt.values()[i] > hv_threshold;
    bool p = pred.values()[i] > hv_threshold;
    if (!g && !p) continue;
    int s = ordinal(sector_of_index(i, w, h));
    if (g) {
      out.gt_count++;
      out.sector_diff[s]--;
    }
    if (p) {
      out.pred_count++;
      out.sector_diff[s]++;
    }
  }

  if (out.gt_count == 0) {
    out.score = out.pred_count == 0 ? 1.0 : 0.0;
  } else {
    double e = std::fabs(static_cast<double>(out.gt_count - out.pred_count) /
                         static_cast<double>(out.gt_count));
    out.score = std::min(1.0, std::max(0.0, 1.0 - e));
  }
  if (out.pred_count > out.gt_count) out.type = MismatchType::OverPredict;
  else if (out.pred_count < out.gt_count) out.type = MismatchType::UnderPredict;

  std::int64_t best = 0;
  int best_sector = -1;
  for (int s = 0; s < 9; ++s) {
    if (std::llabs(out.sector_diff[s]) > best) {
      best = std::llabs(out.sector_diff[s]);
      best_sector = s;
    }
  }
  if (best_sector >= 0) out.direction = static_cast<Direction>(best_sector);
  return out;
}

// --------------------------------------------------------------------------
// Observation-side attributes
// --------------------------------------------------------------------------

inline RainfallLevel max_rainfall_level(const RadarFrame& gt,
                                        const LevelBoundaries& boundaries = kDefaultLevelBoundaries) {
  validate_boundaries(boundaries);
  std::uint8_t max_value = 0;
  for (std::uint8_t v : gt.values()) max_value = std::max(max_value, v);
  return level_of(max_value, boundaries);
}

struct DistributionEntry {
  Direction direction;
  double fraction;
};

// Per-sector share of precipitation mass (intensity summed over pixels
// above the precipitation threshold), sorted descending. Empty when the
// frame holds no precipitation.
inline std::vector<DistributionEntry> distribution(const RadarFrame& gt,
                                                   int precipitation_threshold = 16,
                                                   bool inclusive = false) {
  std::array<double, 9> mass{};
  double total = 0.0;
  int w = gt.width(), h = gt.height();
  for (std::size_t i = 0; i < gt.pixel_count(); ++i) {
    std::uint8_t v = gt.values()[i];
    bool wet = inclusive ? v >= precipitation_threshold : v > precipitation_threshold;
    if (!wet) continue;
    mass[ordinal(sector_of_index(i, w, h))] += v;
    total += v;
  }
  std::vector<DistributionEntry> out;
  if (total == 0.0) return out;
  for (int s = 0; s < 9; ++s) {
    if (mass[s] > 0.0) out.push_back({static_cast<Direction>(s), mass[s] / total});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.fraction > b.fraction; });
  return out;
}

// --------------------------------------------------------------------------
// Composition
// --------------------------------------------------------------------------

struct FrameAttributeReport {
  double miss_rate = 0.0;
  double far_rate = 0.0;
  double sharpness_score = 1.0;
  double high_value_score = 1.0;

  PerformanceLevel miss_performance = PerformanceLevel::Great;
  PerformanceLevel far_performance = PerformanceLevel::Great;
  PerformanceLevel sharpness_performance = PerformanceLevel::Great;
  PerformanceLevel high_value_performance = PerformanceLevel::Great;

  std::optional<RainfallLevel> raw_level_miss;
  std::optional<RainfallLevel> miss_level;
  std::optional<Direction> miss_direction;

  std::optional<RainfallLevel> raw_level_far;
  std::optional<RainfallLevel> far_level;
  std::optional<Direction> far_direction;

  MismatchType hv_mismatch_type = MismatchType::Balanced;
  std::optional<Direction> hv_mismatch_direction;
  SectorCounts hv_sector_diff{};

  RainfallLevel max_rainfall_level = RainfallLevel::Sunny;
  std::vector<DistributionEntry> distribution;

  ContingencyTable table;
};

namespace detail {

struct ErrorAttribution {
  std::optional<RainfallLevel> raw;
  std::optional<RainfallLevel> level;
  std::optional<Direction> direction;
};

// Shared miss/FAR attribution. `error_mask` marks the error pixels of the
// side under study; `event_mask`/`other_mask` are the binarized masks in
// (numerator, success) orientation for the per-sector rate: for the miss
// side the rate is M/(H+M) over ground-truth event pixels at the raw
// level, for the FAR side F/(H+F) over predicted event pixels at the raw
// level. Raw-pixel counts are the error pixels at the raw level.
inline ErrorAttribution attribute_errors(const std::vector<RainfallLevel>& gt_levels,
                                         const std::vector<RainfallLevel>& pred_levels,
                                         const BoolMask& error_mask, const BoolMask& hit_mask,
                                         LevelComparator comparator, const LevelWeights& weights,
                                         int width, int height) {
  ErrorAttribution out;
  out.raw = raw_rainfall_level(gt_levels, error_mask, weights);
  if (!out.raw) return out;

  BoolMask at_raw(error_mask.size());
  for (std::size_t i = 0; i < error_mask.size(); ++i) {
    at_raw[i] = error_mask[i] && gt_levels[i] == *out.raw;
  }
  out.level = error_rainfall_level(pred_levels, at_raw, *out.raw, comparator);

  // per-sector rate restricted to pixels whose ground-truth level equals
  // the raw level: error / (error + hit)
  std::array<double, 9> rates{};
  SectorCounts raw_counts{};
  SectorCounts hit_counts{};
  for (std::size_t i = 0; i < error_mask.size(); ++i) {
    if (gt_levels[i] != *out.raw) continue;
    int s = ordinal(sector_of_index(i, width, height));
    if (error_mask[i]) raw_counts[s]++;
    else if (hit_mask[i]) hit_counts[s]++;
  }
  for (int s = 0; s < 9; ++s) {
    std::int64_t den = raw_counts[s] + hit_counts[s];
    rates[s] = den == 0 ? 0.0 : static_cast<double>(raw_counts[s]) / static_cast<double>(den);
  }
  out.direction = error_direction(rates, raw_counts);
  return out;
}

}  // namespace detail

inline FrameAttributeReport analyze_frame(const RadarFrame& pred, const RadarFrame& gt,
                                          const RunConfig& config = RunConfig{}) {
  if (!pred.same_dimensions(gt)) {
    throw std::invalid_argument("analyze_frame: dimension mismatch");
  }
  config.validate();
  int w = gt.width(), h = gt.height();

  FrameAttributeReport report;
  BoolMask gmask = binarize(gt, config.precipitation_threshold, config.inclusive_precipitation);
  BoolMask pmask = binarize(pred, config.precipitation_threshold, config.inclusive_precipitation);
  report.table = contingency(gmask, pmask);
  report.miss_rate = miss_rate(report.table);
  report.far_rate = far_rate(report.table);
  report.miss_performance = grade(report.miss_rate, config.miss_scale);
  report.far_performance = grade(report.far_rate, config.far_scale);

  auto gt_levels = discretize(gt, config.level_boundaries);
  auto pred_levels = discretize(pred, config.level_boundaries);

  BoolMask miss_mask(gmask.size()), far_mask(gmask.size()), hit_mask(gmask.size());
  for (std::size_t i = 0; i < gmask.size(); ++i) {
    miss_mask[i] = gmask[i] && !pmask[i];
    far_mask[i] = pmask[i] && !gmask[i];
    hit_mask[i] = gmask[i] && pmask[i];
  }

  auto miss_attr = detail::attribute_errors(gt_levels, pred_levels, miss_mask, hit_mask,
                                            LevelComparator::LighterThan, config.level_weights,
                                            w, h);
  report.raw_level_miss = miss_attr.raw;
  report.miss_level = miss_attr.level;
  report.miss_direction = miss_attr.direction;

  auto far_attr = detail::attribute_errors(gt_levels, pred_levels, far_mask, hit_mask,
                                           config.far_level_comparator, config.level_weights,
                                           w, h);
  report.raw_level_far = far_attr.raw;
  report.far_level = far_attr.level;
  report.far_direction = far_attr.direction;

  report.sharpness_score = sharpness_score(pred, gt);
  report.sharpness_performance = grade(report.sharpness_score, config.sharpness_scale);

  auto hv = high_value_mismatch(pred, gt, config.high_value_threshold);
  report.high_value_score = hv.score;
  report.high_value_performance = grade(hv.score, config.high_value_scale);
  report.hv_mismatch_type = hv.type;
  report.hv_mismatch_direction = hv.direction;
  report.hv_sector_diff = hv.sector_diff;

  report.max_rainfall_level = max_rainfall_level(gt, config.level_boundaries);
  report.distribution =
      distribution(gt, config.precipitation_threshold, config.inclusive_precipitation);
  return report;
}

}  // namespace vilscore
