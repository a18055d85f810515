#pragma once

// Core domain types for VIL forecast verification: intensity frames and
// sequences, the rainfall/performance/direction enumerations, threshold
// grading, and the 3x3 sector partition. Everything here is an immutable
// value type; all free functions are pure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vilscore {

// VIL intensity codes occupy [0, 254]; 255 is reserved/invalid.
inline constexpr int kMaxIntensity = 254;

// --------------------------------------------------------------------------
// Enumerations
// --------------------------------------------------------------------------

// Sunny plus the six precipitation classes, ordered by intensity.
enum class RainfallLevel : std::uint8_t {
  Sunny = 0,
  Light = 1,
  Moderate = 2,
  Heavy = 3,
  Intense = 4,
  Severe = 5,
  Extreme = 6,
};

inline constexpr int kRainfallLevelCount = 7;
inline constexpr int kPrecipitationLevelCount = 6;  // Light..Extreme

// Four-grade quality scale; ordinal order Poor < Fair < Good < Great.
enum class PerformanceLevel : std::uint8_t {
  Poor = 0,
  Fair = 1,
  Good = 2,
  Great = 3,
};

// Cells of the 3x3 spatial partition, row-major with north at the top.
enum class Direction : std::uint8_t {
  NW = 0, N = 1, NE = 2,
  W = 3, Center = 4, E = 5,
  SW = 6, S = 7, SE = 8,
};

inline constexpr int kDirectionCount = 9;

inline int ordinal(RainfallLevel l) { return static_cast<int>(l); }
inline int ordinal(PerformanceLevel g) { return static_cast<int>(g); }
inline int ordinal(Direction d) { return static_cast<int>(d); }

inline std::string_view to_string(RainfallLevel l) {
  switch (l) {
    case RainfallLevel::Sunny: return "sunny";
    case RainfallLevel::Light: return "light";
    case RainfallLevel::Moderate: return "moderate";
    case RainfallLevel::Heavy: return "heavy";
    case RainfallLevel::Intense: return "intense";
    case RainfallLevel::Severe: return "severe";
    case RainfallLevel::Extreme: return "extreme";
  }
  return "?";
}

inline std::string_view to_string(PerformanceLevel g) {
  switch (g) {
    case PerformanceLevel::Poor: return "Poor";
    case PerformanceLevel::Fair: return "Fair";
    case PerformanceLevel::Good: return "Good";
    case PerformanceLevel::Great: return "Great";
  }
  return "?";
}

// Compass words used in rendered descriptions.
inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::NW: return "northwest";
    case Direction::N: return "north";
    case Direction::NE: return "northeast";
    case Direction::W: return "west";
    case Direction::Center: return "center";
    case Direction::E: return "east";
    case Direction::SW: return "southwest";
    case Direction::S: return "south";
    case Direction::SE: return "southeast";
  }
  return "?";
}

// Case-insensitive parse of a performance grade word.
inline std::optional<PerformanceLevel> parse_performance_level(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "poor") return PerformanceLevel::Poor;
  if (lower == "fair") return PerformanceLevel::Fair;
  if (lower == "good") return PerformanceLevel::Good;
  if (lower == "great") return PerformanceLevel::Great;
  return std::nullopt;
}

// --------------------------------------------------------------------------
// RadarFrame / RadarSequence
// --------------------------------------------------------------------------

// A 2-D grid of VIL intensity codes, row-major. Validated on construction:
// every value in [0, 254] and both dimensions at least 3 (the sector
// partition needs three bands per axis).
class RadarFrame {
 public:
  RadarFrame(int width, int height, std::vector<std::uint8_t> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width_ < 3 || height_ < 3) {
      throw std::invalid_argument("RadarFrame: dimensions must be at least 3x3, got " +
                                  std::to_string(width_) + "x" + std::to_string(height_));
    }
    if (values_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
      throw std::invalid_argument("RadarFrame: value count does not match dimensions");
    }
    for (std::uint8_t v : values_) {
      if (v > kMaxIntensity) {
        throw std::invalid_argument("RadarFrame: intensity code " + std::to_string(int(v)) +
                                    " outside [0, 254]");
      }
    }
  }

  static RadarFrame constant(int width, int height, std::uint8_t value) {
    return RadarFrame(width, height,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return values_.size(); }
  const std::vector<std::uint8_t>& values() const { return values_; }

  std::uint8_t at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * width_ + x];
  }

  bool same_dimensions(const RadarFrame& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const RadarFrame& a, const RadarFrame& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ && a.values_ == b.values_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> values_;
};

// An ordered, non-empty list of frames sharing dimensions. The frame
// interval is carried as metadata only; 12 frames is the canonical target
// length but any positive length is accepted.
class RadarSequence {
 public:
  explicit RadarSequence(std::vector<RadarFrame> frames, double frame_interval_minutes = 5.0)
      : frames_(std::move(frames)), frame_interval_minutes_(frame_interval_minutes) {
    if (frames_.empty()) {
      throw std::invalid_argument("RadarSequence: at least one frame required");
    }
    if (frame_interval_minutes_ <= 0.0) {
      throw std::invalid_argument("RadarSequence: frame interval must be positive");
    }
    for (const RadarFrame& f : frames_) {
      if (!f.same_dimensions(frames_.front())) {
        throw std::invalid_argument("RadarSequence: frames must share dimensions");
      }
    }
  }

  const std::vector<RadarFrame>& frames() const { return frames_; }
  std::size_t size() const { return frames_.size(); }
  const RadarFrame& operator[](std::size_t i) const { return frames_[i]; }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }
  double frame_interval_minutes() const { return frame_interval_minutes_; }

  friend bool operator==(const RadarSequence& a, const RadarSequence& b) {
    return a.frames_ == b.frames_;
  }

 private:
  std::vector<RadarFrame> frames_;
  double frame_interval_minutes_;
};

// --------------------------------------------------------------------------
// ContingencyTable
// --------------------------------------------------------------------------

// Hit/miss/false-alarm/correct-negative counts of a binarized pair.
// H + M + F + C equals the number of pixels evaluated.
struct ContingencyTable {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t correct_negatives = 0;

  std::uint64_t total() const { return hits + misses + false_alarms + correct_negatives; }

  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

// --------------------------------------------------------------------------
// Grading
// --------------------------------------------------------------------------

enum class ScaleOrientation : std::uint8_t {
  LowerIsBetter,
  HigherIsBetter,
};

// A strictly increasing threshold triple plus the direction in which the
// score improves. Grading is monotone under the stated orientation.
struct GradingScale {
  std::array<double, 3> thresholds;
  ScaleOrientation orientation;

  GradingScale(std::array<double, 3> t, ScaleOrientation o) : thresholds(t), orientation(o) {
    if (!(t[0] < t[1] && t[1] < t[2])) {
      throw std::invalid_argument("GradingScale: thresholds must be strictly increasing");
    }
  }
};

// A score exactly at a threshold earns the better grade.
inline PerformanceLevel grade(double score, const GradingScale& scale) {
  if (std::isnan(score)) {
    throw std::invalid_argument("grade: score is NaN");
  }
  const auto& t = scale.thresholds;
  if (scale.orientation == ScaleOrientation::LowerIsBetter) {
    if (score <= t[0]) return PerformanceLevel::Great;
    if (score <= t[1]) return PerformanceLevel::Good;
    if (score <= t[2]) return PerformanceLevel::Fair;
    return PerformanceLevel::Poor;
  }
  if (score >= t[2]) return PerformanceLevel::Great;
  if (score >= t[1]) return PerformanceLevel::Good;
  if (score >= t[0]) return PerformanceLevel::Fair;
  return PerformanceLevel::Poor;
}

// --------------------------------------------------------------------------
// Level discretization
// --------------------------------------------------------------------------

using LevelBoundaries = std::array<std::uint8_t, 6>;

// Default class boundaries. The low/high anchors (16 and 219) plus the
// weather-metric threshold 74 carry the conventional VIL meaning; the
// boundaries are configurable end to end.
inline constexpr LevelBoundaries kDefaultLevelBoundaries{16, 74, 133, 160, 181, 219};

inline void validate_boundaries(const LevelBoundaries& b) {
  if (b[0] < 1) {
    throw std::invalid_argument("level boundaries must lie in [1, 254]");
  }
  for (int i = 1; i < 6; ++i) {
    if (b[i] <= b[i - 1]) {
      throw std::invalid_argument("level boundaries must be strictly increasing");
    }
  }
}

inline RainfallLevel level_of(std::uint8_t value, const LevelBoundaries& boundaries) {
  int k = 0;
  while (k < 6 && value >= boundaries[k]) ++k;
  return static_cast<RainfallLevel>(k);
}

// Maps each pixel to its rainfall level: below the first boundary is Sunny,
// otherwise the highest level k with value >= boundaries[k-1].
inline std::vector<RainfallLevel> discretize(
    const RadarFrame& frame, const LevelBoundaries& boundaries = kDefaultLevelBoundaries) {
  validate_boundaries(boundaries);
  std::vector<RainfallLevel> out(frame.pixel_count());
  const auto& v = frame.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = level_of(v[i], boundaries);
  }
  return out;
}

// --------------------------------------------------------------------------
// Sector partition
// --------------------------------------------------------------------------

// Floor-based 3x3 banding; exact thirds when a dimension is divisible by 3.
inline Direction sector_of(int x, int y, int width, int height) {
  if (x < 0 || y < 0 || x >= width || y >= height) {
    throw std::invalid_argument("sector_of: coordinates out of range");
  }
  int col_band = std::min(2, (3 * x) / width);
  int row_band = std::min(2, (3 * y) / height);
  return static_cast<Direction>(row_band * 3 + col_band);
}

// Sector of the row-major pixel index i.
inline Direction sector_of_index(std::size_t i, int width, int height) {
  int x = static_cast<int>(i % static_cast<std::size_t>(width));
  int y = static_cast<int>(i / static_cast<std::size_t>(width));
  return sector_of(x, y, width, height);
}

}  // namespace vilscore
