#ifndef GFADAPT_SYNTH_H_
#define GFADAPT_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string_view>

#include "gfadapt/frame.h"

namespace gfadapt {

enum class SynthKind { kStatic, kStaticNoise, kPan, kZoom, kCut };

std::string_view SynthKindName(SynthKind kind);
std::optional<SynthKind> ParseSynthKind(std::string_view name);

struct SynthSpec {
  SynthKind kind = SynthKind::kStatic;
  int width = 176;
  int height = 144;
  int frame_count = 17;
  // static_noise: noise sigma; pan: px/frame (rounded per frame);
  // zoom: percent scale per frame. Ignored by static and cut.
  double amplitude = 0.0;
  uint64_t seed = 1;

  void Validate() const;
};

// SplitMix64 step: the only pseudo-random source used by the generator.
uint64_t SplitMix64(uint64_t x);

// Deterministic value-noise texture on the unbounded integer plane: a
// coarse 16 px lattice plus a fine 4 px lattice, bilinearly interpolated in
// integer arithmetic.
uint8_t TextureSample(uint64_t seed, int64_t x, int64_t y);

// Frames depend only on (spec, frame index, coordinates), so output is
// bit-identical across runs and platforms.
//   static:       one texture frame repeated
//   static_noise: static plus i.i.d. approx-Gaussian integer noise, clipped
//   pan:          content moves right by amplitude px per frame
//   zoom:         nearest-neighbour magnification about the centre
//   cut:          texture switches to an unrelated seed at frame_count / 2
VideoSequence Generate(const SynthSpec& spec);

}  // namespace gfadapt

#endif  // GFADAPT_SYNTH_H_
