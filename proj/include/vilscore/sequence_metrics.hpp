#pragma once

// Sequence-level attributes: high-value retain (mean of per-frame
// high-value scores), sequence high-value mismatch type/direction, and
// cumulative precipitation score/difference/direction.

#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "config.hpp"
#include "core.hpp"
#include "frame_metrics.hpp"

namespace vilscore {

enum class CumulativeDifference { Underestimate, Balanced, Overestimate };

inline std::string_view to_string(CumulativeDifference d) {
  switch (d) {
    case CumulativeDifference::Underestimate: return "underestimated";
    case CumulativeDifference::Balanced: return "balanced";
    case CumulativeDifference::Overestimate: return "overestimated";
  }
  return "?";
}

struct SequenceAttributeReport {
  double high_value_retain_score = 1.0;
  PerformanceLevel high_value_retain_performance = PerformanceLevel::Great;
  MismatchType hv_mismatch_type_seq = MismatchType::Balanced;
  std::optional<Direction> hv_mismatch_direction_seq;

  double cumulative_score = 1.0;
  PerformanceLevel cumulative_performance = PerformanceLevel::Great;
  CumulativeDifference cumulative_difference = CumulativeDifference::Balanced;
  std::optional<Direction> cumulative_mismatch_direction;

  std::vector<FrameAttributeReport> per_frame;
};

namespace detail {

inline void check_pair(const RadarSequence& pred, const RadarSequence& gt) {
  if (pred.size() != gt.size()) {
    throw std::invalid_argument("sequence pair: length mismatch (" + std::to_string(gt.size()) +
                                " vs " + std::to_string(pred.size()) + ")");
  }
  if (pred.width() != gt.width() || pred.height() != gt.height()) {
    throw std::invalid_argument("sequence pair: dimension mismatch");
  }
}

// Index-parallel map with deterministic placement; degree 1 stays on the
// calling thread.
template <typename Fn>
inline void parallel_for(std::size_t n, int degree, Fn&& fn) {
  if (degree <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(degree), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Mean of per-frame high-value mismatch scores, graded on the same scale.
inline std::pair<double, PerformanceLevel> high_value_retain(const RadarSequence& pred,
                                                             const RadarSequence& gt,
                                                             const RunConfig& config = RunConfig{}) {
  detail::check_pair(pred, gt);
  double sum = 0.0;
  for (std::size_t t = 0; t < gt.size(); ++t) {
    sum += high_value_mismatch(pred[t], gt[t], config.high_value_threshold).score;
  }
  double score = sum / static_cast<double>(gt.size());
  return {score, grade(score, config.high_value_scale)};
}

struct CumulativePrecipitation {
  double score = 1.0;
  CumulativeDifference difference = CumulativeDifference::Balanced;
  std::array<std::int64_t, 9> sector_diff{};  // prediction minus ground truth
  std::optional<Direction> direction;
  std::uint64_t gt_total = 0;
  std::uint64_t pred_total = 0;
};

// Totals are raw intensity codes summed over every frame. The relative
// error folds into a [0,1] score exactly like the high-value mismatch.
inline CumulativePrecipitation cumulative_precipitation(const RadarSequence& pred,
                                                        const RadarSequence& gt,
                                                        const RunConfig& config = RunConfig{}) {
  detail::check_pair(pred, gt);
  CumulativePrecipitation out;
  int w = gt.width(), h = gt.height();
  auto accumulate = [&](const RadarSequence& seq, std::uint64_t& total, int sign) {
    for (const auto& frame : seq.frames()) {
      for (std::size_t i = 0; i < frame.pixel_count(); ++i) {
        std::uint8_t v = frame.values()[i];
        if (config.cumulative_precipitating_only) {
          bool wet = config.inclusive_precipitation ? v >= config.precipitation_threshold
                                                    : v > config.precipitation_threshold;
          if (!wet) continue;
        }
        total += v;
        if (v > 0) out.sector_diff[ordinal(sector_of_index(i, w, h))] += sign * std::int64_t{v};
      }
    }
  };
  accumulate(gt, out.gt_total, -1);
  accumulate(pred, out.pred_total, +1);

  if (out.gt_total == 0) {
    out.score = out.pred_total == 0 ? 1.0 : 0.0;
  } else {
    double e = std::fabs((static_cast<double>(out.gt_total) - static_cast<double>(out.pred_total)) /
                         static_cast<double>(out.gt_total));
    out.score = std::min(1.0, std::max(0.0, 1.0 - e));
  }
  if (out.pred_total > out.gt_total) out.difference = CumulativeDifference::Overestimate;
  else if (out.pred_total < out.gt_total) out.difference = CumulativeDifference::Underestimate;

  std::int64_t best = 0;
  int best_sector = -1;
  for (int s = 0; s < 9; ++s) {
    if (std::llabs(out.sector_diff[s]) > best) {
      best = std::llabs(out.sector_diff[s]);
      best_sector = s;
    }
  }
  double min_abs = config.sequence_direction_min_fraction * static_cast<double>(out.gt_total);
  if (best_sector >= 0 && static_cast<double>(best) >= min_abs) {
    out.direction = static_cast<Direction>(best_sector);
  }
  return out;
}

struct SequenceHighValueAttribution {
  MismatchType type = MismatchType::Balanced;
  std::optional<Direction> direction;
};

// Sums per-frame per-sector signed high-value count differences. The type
// follows the sign of the grand total; the direction is the sector with
// the largest absolute summed difference, suppressed below the configured
// fraction of the ground-truth high-value count.
inline SequenceHighValueAttribution hv_sequence_attribution(
    const std::vector<SectorCounts>& per_frame_sector_diff, std::int64_t gt_high_value_total,
    double min_fraction = 0.05) {
  SequenceHighValueAttribution out;
  SectorCounts summed{};
  for (const auto& frame_diff : per_frame_sector_diff) {
    for (int s = 0; s < 9; ++s) summed[s] += frame_diff[s];
  }
  std::int64_t grand = 0;
  for (int s = 0; s < 9; ++s) grand += summed[s];
  if (grand > 0) out.type = MismatchType::OverPredict;
  else if (grand < 0) out.type = MismatchType::UnderPredict;

  std::int64_t best = 0;
  int best_sector = -1;
  for (int s = 0; s < 9; ++s) {
    if (std::llabs(summed[s]) > best) {
      best = std::llabs(summed[s]);
      best_sector = s;
    }
  }
  double min_abs = min_fraction * static_cast<double>(gt_high_value_total);
  if (best_sector >= 0 && static_cast<double>(best) >= min_abs) {
    out.direction = static_cast<Direction>(best_sector);
  }
  return out;
}

inline SequenceAttributeReport analyze_sequence(const RadarSequence& pred, const RadarSequence& gt,
                                                const RunConfig& config = RunConfig{}) {
  detail::check_pair(pred, gt);
  config.validate();

  SequenceAttributeReport report;
  report.per_frame.resize(gt.size());
  detail::parallel_for(gt.size(), config.parallelism, [&](std::size_t t) {
    report.per_frame[t] = analyze_frame(pred[t], gt[t], config);
  });

  double sum = 0.0;
  std::int64_t gt_hv_total = 0;
  std::vector<SectorCounts> per_frame_diff;
  per_frame_diff.reserve(gt.size());
  for (std::size_t t = 0; t < gt.size(); ++t) {
    sum += report.per_frame[t].high_value_score;
    per_frame_diff.push_back(report.per_frame[t].hv_sector_diff);
    for (std::size_t i = 0; i < gt[t].pixel_count(); ++i) {
      if (gt[t].values()[i] > config.high_value_threshold) gt_hv_total++;
    }
  }
  report.high_value_retain_score = sum / static_cast<double>(gt.size());
  report.high_value_retain_performance =
      grade(report.high_value_retain_score, config.high_value_scale);

  auto hv = hv_sequence_attribution(per_frame_diff, gt_hv_total,
                                    config.sequence_direction_min_fraction);
  report.hv_mismatch_type_seq = hv.type;
  report.hv_mismatch_direction_seq = hv.direction;

  auto cumulative = cumulative_precipitation(pred, gt, config);
  report.cumulative_score = cumulative.score;
  report.cumulative_performance = grade(cumulative.score, config.cumulative_scale);
  report.cumulative_difference = cumulative.difference;
  report.cumulative_mismatch_direction = cumulative.direction;
  return report;
}

}  // namespace vilscore
