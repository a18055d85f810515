#pragma once

// Synthetic storm sequences for fixtures and self-tests: Gaussian intensity
// blobs advected by a fixed per-frame displacement, plus the degradation
// operators that emulate common forecast failure modes (temporal blurring,
// displacement, magnitude bias, loss of convective cores, speckle).
// Everything is a pure function of its arguments; a fixed seed reproduces
// byte-identical output.

#include <cmath>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "core.hpp"

namespace vilscore {

struct SynthSpec {
  std::uint64_t seed = 0;
  int frame_count = 12;
  int width = 64;
  int height = 64;
  int blob_count = 3;
  double advect_dx = 0.0;  // pixels per frame
  double advect_dy = 0.0;
  double min_amplitude = 180.0;
  double max_amplitude = 254.0;
};

namespace detail {

struct Blob {
  double x, y, sigma, amplitude;
};

}  // namespace detail

inline RadarSequence synth_sequence(const SynthSpec& spec) {
  if (spec.frame_count < 1 || spec.width < 3 || spec.height < 3 || spec.blob_count < 0) {
    throw std::invalid_argument("synth_sequence: counts must be positive");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> ux(spec.width * 0.2, spec.width * 0.8);
  std::uniform_real_distribution<double> uy(spec.height * 0.2, spec.height * 0.8);
  std::uniform_real_distribution<double> usigma(spec.width * 0.04 + 1.0, spec.width * 0.12 + 2.0);
  std::uniform_real_distribution<double> uamp(spec.min_amplitude, spec.max_amplitude);

  std::vector<detail::Blob> blobs;
  blobs.reserve(static_cast<std::size_t>(spec.blob_count));
  for (int i = 0; i < spec.blob_count; ++i) {
    blobs.push_back({ux(rng), uy(rng), usigma(rng), uamp(rng)});
  }

  std::vector<RadarFrame> frames;
  frames.reserve(static_cast<std::size_t>(spec.frame_count));
  for (int t = 0; t < spec.frame_count; ++t) {
    std::vector<double> field(static_cast<std::size_t>(spec.width) * spec.height, 0.0);
    for (const auto& b : blobs) {
      double cx = b.x + t * spec.advect_dx;
      double cy = b.y + t * spec.advect_dy;
      double inv = 1.0 / (2.0 * b.sigma * b.sigma);
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          field[static_cast<std::size_t>(y) * spec.width + x] +=
              b.amplitude * std::exp(-d2 * inv);
        }
      }
    }
    std::vector<std::uint8_t> values(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
      values[i] = static_cast<std::uint8_t>(
          std::min(254.0, std::max(0.0, std::floor(field[i] + 0.5))));
    }
    frames.emplace_back(spec.width, spec.height, std::move(values));
  }
  return RadarSequence(std::move(frames));
}

// --------------------------------------------------------------------------
// Degradations
// --------------------------------------------------------------------------

struct Blur {
  int radius = 0;  // box blur, edge-clamped; radius 0 is the identity
};
struct Shift {
  int dx = 0;  // vacated pixels fill with 0
  int dy = 0;
};
struct GainScale {
  double factor = 1.0;
};
struct HighValueSuppress {
  int cap = 254;  // values clip to the cap
};
struct AdditiveNoise {
  int amplitude = 0;  // uniform integer noise in [-amplitude, amplitude]
  std::uint64_t seed = 0;
};

using DegradeOp = std::variant<Blur, Shift, GainScale, HighValueSuppress, AdditiveNoise>;

// Operators applied per frame in listed order.
struct DegradationSpec {
  std::vector<DegradeOp> ops;
};

namespace detail {

inline void validate(const DegradeOp& op) {
  if (const auto* b = std::get_if<Blur>(&op)) {
    if (b->radius < 0) throw std::invalid_argument("Blur: radius must be >= 0");
  } else if (const auto* g = std::get_if<GainScale>(&op)) {
    if (!(g->factor > 0.0)) throw std::invalid_argument("GainScale: factor must be > 0");
  } else if (const auto* s = std::get_if<HighValueSuppress>(&op)) {
    if (s->cap < 0 || s->cap > kMaxIntensity)
      throw std::invalid_argument("HighValueSuppress: cap must lie in [0, 254]");
  } else if (const auto* n = std::get_if<AdditiveNoise>(&op)) {
    if (n->amplitude < 0) throw std::invalid_argument("AdditiveNoise: amplitude must be >= 0");
  }
}

inline std::uint8_t clamp_code(double v) {
  return static_cast<std::uint8_t>(std::min(254.0, std::max(0.0, std::floor(v + 0.5))));
}

inline RadarFrame apply_blur(const RadarFrame& f, int radius) {
  if (radius == 0) return f;
  int w = f.width(), h = f.height();
  std::vector<std::uint8_t> out(f.pixel_count());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      long long sum = 0;
      int n = 0;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          int sx = std::clamp(x + dx, 0, w - 1);
          int sy = std::clamp(y + dy, 0, h - 1);
          sum += f.at(sx, sy);
          n++;
        }
      }
      out[static_cast<std::size_t>(y) * w + x] =
          clamp_code(static_cast<double>(sum) / static_cast<double>(n));
    }
  }
  return RadarFrame(w, h, std::move(out));
}

inline RadarFrame apply_shift(const RadarFrame& f, int dx, int dy) {
  int w = f.width(), h = f.height();
  std::vector<std::uint8_t> out(f.pixel_count(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sx = x - dx, sy = y - dy;
      if (sx >= 0 && sx < w && sy >= 0 && sy < h) {
        out[static_cast<std::size_t>(y) * w + x] = f.at(sx, sy);
      }
    }
  }
  return RadarFrame(w, h, std::move(out));
}

}  // namespace detail

inline RadarSequence degrade(const RadarSequence& seq, const DegradationSpec& spec) {
  for (const auto& op : spec.ops) detail::validate(op);

  std::vector<RadarFrame> frames;
  frames.reserve(seq.size());
  for (std::size_t t = 0; t < seq.size(); ++t) {
    RadarFrame f = seq[t];
    for (const auto& op : spec.ops) {
      if (const auto* b = std::get_if<Blur>(&op)) {
        f = detail::apply_blur(f, b->radius);
      } else if (const auto* s = std::get_if<Shift>(&op)) {
        if (s->dx != 0 || s->dy != 0) f = detail::apply_shift(f, s->dx, s->dy);
      } else if (const auto* g = std::get_if<GainScale>(&op)) {
        if (g->factor != 1.0) {
          std::vector<std::uint8_t> v(f.pixel_count());
          for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = detail::clamp_code(f.values()[i] * g->factor);
          }
          f = RadarFrame(f.width(), f.height(), std::move(v));
        }
      } else if (const auto* hv = std::get_if<HighValueSuppress>(&op)) {
        std::vector<std::uint8_t> v(f.pixel_count());
        for (std::size_t i = 0; i < v.size(); ++i) {
          v[i] = std::min<std::uint8_t>(f.values()[i], static_cast<std::uint8_t>(hv->cap));
        }
        f = RadarFrame(f.width(), f.height(), std::move(v));
      } else if (const auto* n = std::get_if<AdditiveNoise>(&op)) {
        if (n->amplitude > 0) {
          // per-frame stream so frame t is independent of sequence length
          std::mt19937_64 rng(n->seed + 0x9E3779B97F4A7C15ull * (t + 1));
          std::uniform_int_distribution<int> dist(-n->amplitude, n->amplitude);
          std::vector<std::uint8_t> v(f.pixel_count());
          for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = detail::clamp_code(static_cast<double>(f.values()[i]) + dist(rng));
          }
          f = RadarFrame(f.width(), f.height(), std::move(v));
        }
      }
    }
    frames.push_back(std::move(f));
  }
  return RadarSequence(std::move(frames), seq.frame_interval_minutes());
}

}  // namespace vilscore
