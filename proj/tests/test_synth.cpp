#include <vilscore/synth.hpp>

#include <catch2/catch_amalgamated.hpp>

#include "oracle.hpp"
#include "test_util.hpp"

using namespace vilscore;

namespace {

// argmax pixel of a frame, first occurrence in row-major order
std::pair<int, int> argmax(const RadarFrame& f) {
  int bx = 0, by = 0, best = -1;
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      if (f.at(x, y) > best) {
        best = f.at(x, y);
        bx = x;
        by = y;
      }
    }
  }
  return {bx, by};
}

}  // namespace

TEST_CASE("same seed gives byte-identical sequences") {
  SynthSpec spec;
  spec.seed = 42;
  spec.frame_count = 6;
  auto a = synth_sequence(spec);
  auto b = synth_sequence(spec);
  CHECK(a == b);
}

TEST_CASE("advection moves the intensity argmax") {
  // single blob so the argmax tracks the blob center
  SynthSpec spec;
  spec.seed = 7;
  spec.frame_count = 2;
  spec.blob_count = 1;
  spec.advect_dx = 4.0;
  spec.advect_dy = 0.0;
  auto seq = synth_sequence(spec);
  auto [x0, y0] = argmax(seq[0]);
  auto [x1, y1] = argmax(seq[1]);
  CHECK(std::abs((x1 - x0) - 4) <= 1);
  CHECK(std::abs(y1 - y0) <= 1);
}

TEST_CASE("blob_count 0 yields an all-zero sequence") {
  SynthSpec spec;
  spec.blob_count = 0;
  spec.frame_count = 3;
  auto seq = synth_sequence(spec);
  for (const auto& f : seq.frames())
    for (auto v : f.values()) CHECK(v == 0);
}

TEST_CASE("identity degradations leave the sequence unchanged") {
  SynthSpec spec;
  spec.seed = 3;
  spec.frame_count = 4;
  auto seq = synth_sequence(spec);

  CHECK(degrade(seq, {{GainScale{1.0}}}) == seq);
  CHECK(degrade(seq, {{Blur{0}}}) == seq);
  CHECK(degrade(seq, {{Shift{0, 0}}}) == seq);
  CHECK(degrade(seq, {{Blur{0}, Shift{0, 0}, GainScale{1.0}, AdditiveNoise{0, 1}}}) == seq);
}

TEST_CASE("HighValueSuppress caps every pixel") {
  SynthSpec spec;
  spec.seed = 11;
  spec.frame_count = 3;
  spec.min_amplitude = 240.0;
  auto seq = synth_sequence(spec);
  auto capped = degrade(seq, {{HighValueSuppress{219}}});
  for (const auto& f : capped.frames())
    for (auto v : f.values()) CHECK(v <= 219);
}

TEST_CASE("stronger blur lowers the Sobel mean") {
  SynthSpec spec;
  spec.seed = 19;
  spec.frame_count = 2;
  auto seq = synth_sequence(spec);
  auto r1 = degrade(seq, {{Blur{1}}});
  auto r3 = degrade(seq, {{Blur{3}}});
  for (std::size_t t = 0; t < seq.size(); ++t) {
    CHECK(oracle::sobel_mean(testutil::to_grid(r3[t])) <=
          oracle::sobel_mean(testutil::to_grid(r1[t])));
  }
}

TEST_CASE("shift fills vacated pixels with zero") {
  auto f = RadarFrame::constant(4, 4, 50);
  RadarSequence seq({f});
  auto shifted = degrade(seq, {{Shift{2, 1}}});
  CHECK(shifted[0].at(0, 0) == 0);
  CHECK(shifted[0].at(1, 0) == 0);
  CHECK(shifted[0].at(2, 1) == 50);
}

TEST_CASE("additive noise is deterministic per seed") {
  SynthSpec spec;
  spec.seed = 23;
  spec.frame_count = 3;
  auto seq = synth_sequence(spec);
  auto a = degrade(seq, {{AdditiveNoise{10, 99}}});
  auto b = degrade(seq, {{AdditiveNoise{10, 99}}});
  auto c = degrade(seq, {{AdditiveNoise{10, 100}}});
  CHECK(a == b);
  CHECK_FALSE(a == c);
}

TEST_CASE("degradation parameters are validated") {
  auto seq = synth_sequence(SynthSpec{});
  CHECK_THROWS_AS(degrade(seq, {{Blur{-1}}}), std::invalid_argument);
  CHECK_THROWS_AS(degrade(seq, {{GainScale{0.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(degrade(seq, {{HighValueSuppress{255}}}), std::invalid_argument);
  CHECK_THROWS_AS(degrade(seq, {{AdditiveNoise{-2, 0}}}), std::invalid_argument);
}
