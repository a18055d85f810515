#pragma once

// Test-only brute-force reference implementations. These deliberately use
// naive per-pixel loops over plain buffers and re-derive every formula from
// first principles, independent of the library code paths they check.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace oracle {

struct Grid {
  int w = 0;
  int h = 0;
  std::vector<int> v;  // row-major intensity codes

  int at(int x, int y) const { return v[static_cast<std::size_t>(y) * w + x]; }
};

struct Counts {
  long long hits = 0;
  long long misses = 0;
  long long false_alarms = 0;
  long long correct_negatives = 0;
};

inline Counts count_table(const Grid& gt, const Grid& pred, int threshold) {
  Counts c;
  for (int y = 0; y < gt.h; ++y) {
    for (int x = 0; x < gt.w; ++x) {
      bool g = gt.at(x, y) > threshold;
      bool p = pred.at(x, y) > threshold;
      if (g && p) c.hits++;
      else if (g && !p) c.misses++;
      else if (!g && p) c.false_alarms++;
      else c.correct_negatives++;
    }
  }
  return c;
}

inline double miss_rate(const Grid& gt, const Grid& pred, int threshold) {
  Counts c = count_table(gt, pred, threshold);
  long long den = c.hits + c.misses;
  return den == 0 ? 0.0 : static_cast<double>(c.misses) / static_cast<double>(den);
}

inline double far_rate(const Grid& gt, const Grid& pred, int threshold) {
  Counts c = count_table(gt, pred, threshold);
  long long den = c.hits + c.false_alarms;
  return den == 0 ? 0.0 : static_cast<double>(c.false_alarms) / static_cast<double>(den);
}

inline double high_value_score(const Grid& gt, const Grid& pred, int threshold) {
  long long n_gt = 0, n_pred = 0;
  for (int y = 0; y < gt.h; ++y) {
    for (int x = 0; x < gt.w; ++x) {
      if (gt.at(x, y) > threshold) n_gt++;
      if (pred.at(x, y) > threshold) n_pred++;
    }
  }
  if (n_gt == 0) return n_pred == 0 ? 1.0 : 0.0;
  double e = std::fabs(static_cast<double>(n_gt - n_pred) / static_cast<double>(n_gt));
  return std::min(1.0, std::max(0.0, 1.0 - e));
}

// Mean gradient magnitude over interior pixels with the textbook 3x3
// Sobel kernels written out explicitly.
inline double sobel_mean(const Grid& g) {
  static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  double sum = 0.0;
  long long n = 0;
  for (int y = 1; y < g.h - 1; ++y) {
    for (int x = 1; x < g.w - 1; ++x) {
      double gx = 0.0, gy = 0.0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          gx += kx[dy + 1][dx + 1] * g.at(x + dx, y + dy);
          gy += ky[dy + 1][dx + 1] * g.at(x + dx, y + dy);
        }
      }
      sum += std::sqrt(gx * gx + gy * gy);
      n++;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

inline double sharpness_score(const Grid& gt, const Grid& pred) {
  double s_gt = sobel_mean(gt);
  double s_pred = sobel_mean(pred);
  if (s_gt == 0.0) return s_pred == 0.0 ? 1.0 : 0.0;
  double r = std::fabs(s_pred / s_gt);
  double d = r > 1.0 ? 2.0 - r : r;
  return std::max(0.0, d);
}

inline double cumulative_score(const std::vector<Grid>& gt, const std::vector<Grid>& pred) {
  long double p_gt = 0.0L, p_pred = 0.0L;
  for (const Grid& g : gt)
    for (int x : g.v) p_gt += x;
  for (const Grid& g : pred)
    for (int x : g.v) p_pred += x;
  if (p_gt == 0.0L) return p_pred == 0.0L ? 1.0 : 0.0;
  long double e = std::fabs(static_cast<double>((p_gt - p_pred) / p_gt));
  double score = static_cast<double>(1.0L - e);
  return std::min(1.0, std::max(0.0, score));
}

// Piecewise grading re-stated from scratch: 3 = Great .. 0 = Poor.
inline int grade_lower_is_better(double s, double t1, double t2, double t3) {
  if (s > t3) return 0;
  if (s > t2) return 1;
  if (s > t1) return 2;
  return 3;
}

inline int grade_higher_is_better(double s, double t1, double t2, double t3) {
  if (s < t1) return 0;
  if (s < t2) return 1;
  if (s < t3) return 2;
  return 3;
}

// 3x3 band of a coordinate, derived by scanning band edges rather than
// a closed-form division.
inline int band_of(int coord, int extent) {
  for (int b = 2; b >= 0; --b) {
    // band b covers coords with 3*coord/extent == b; edge = ceil(b*extent/3)
    int lo = (b * extent + 2) / 3;
    if (coord >= lo) return b;
  }
  return 0;
}

inline int sector_index(int x, int y, int w, int h) {
  return band_of(y, h) * 3 + band_of(x, w);
}

struct Categorical {
  std::optional<double> csi, pod, far, bias, acc, ets;
};

inline Categorical categorical(long long H, long long M, long long F, long long C) {
  Categorical r;
  long long N = H + M + F + C;
  auto ratio = [](double num, long long den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return num / static_cast<double>(den);
  };
  r.csi = ratio(static_cast<double>(H), H + M + F);
  r.pod = ratio(static_cast<double>(H), H + M);
  r.far = ratio(static_cast<double>(F), H + F);
  r.bias = ratio(static_cast<double>(H + F), H + M);
  r.acc = ratio(static_cast<double>(H + C), N);
  if (N == 0) {
    r.ets = std::nullopt;
  } else {
    double hr = static_cast<double>(H + M) * static_cast<double>(H + F) / static_cast<double>(N);
    double den = static_cast<double>(H + M + F) - hr;
    if (den == 0.0) r.ets = std::nullopt;
    else r.ets = (static_cast<double>(H) - hr) / den;
  }
  return r;
}

}  // namespace oracle
