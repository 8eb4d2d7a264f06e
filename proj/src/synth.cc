#include "gfadapt/synth.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

constexpr uint64_t kCutSeedSalt = 0xC2B2AE3D27D4EB4Full;
constexpr uint64_t kNoiseSalt = 0x165667B19E3779F9ull;

uint64_t Hash(uint64_t seed, int64_t a, int64_t b, int64_t c = 0) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ uint64_t(a));
  h = SplitMix64(h ^ uint64_t(b));
  return SplitMix64(h ^ uint64_t(c));
}

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Bilinear value noise with lattice spacing `cell` (power of two), result
// in [0, 255].
int ValueNoise(uint64_t seed, int64_t x, int64_t y, int64_t cell,
               int64_t octave) {
  const int64_t gx = FloorDiv(x, cell);
  const int64_t gy = FloorDiv(y, cell);
  const int64_t fx = x - gx * cell;
  const int64_t fy = y - gy * cell;
  auto lattice = [&](int64_t i, int64_t j) {
    return int64_t(Hash(seed, i, j, octave) >> 56);
  };
  const int64_t top = lattice(gx, gy) * (cell - fx) + lattice(gx + 1, gy) * fx;
  const int64_t bottom =
      lattice(gx, gy + 1) * (cell - fx) + lattice(gx + 1, gy + 1) * fx;
  return int((top * (cell - fy) + bottom * fy) / (cell * cell));
}

// Irwin-Hall approximation of a unit normal: sum of 12 uniforms minus 6.
double UnitNoise(uint64_t seed, int frame, int x, int y) {
  const uint64_t base = Hash(seed ^ kNoiseSalt, frame, x, y);
  double sum = 0.0;
  for (int k = 0; k < 12; ++k) {
    const uint64_t u = SplitMix64(base + uint64_t(k));
    sum += double(u >> 11) * 0x1.0p-53;
  }
  return sum - 6.0;
}

FramePlane TextureFrame(uint64_t seed, int width, int height,
                        int64_t shift_x) {
  FramePlane frame(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      frame.at(x, y) = TextureSample(seed, x - shift_x, y);
    }
  }
  return frame;
}

FramePlane ZoomFrame(uint64_t seed, int width, int height, double scale) {
  FramePlane frame(width, height);
  const double cx = width / 2.0;
  const double cy = height / 2.0;
  for (int y = 0; y < height; ++y) {
    const auto sy = int64_t(std::floor(cy + (y + 0.5 - cy) / scale));
    for (int x = 0; x < width; ++x) {
      const auto sx = int64_t(std::floor(cx + (x + 0.5 - cx) / scale));
      frame.at(x, y) = TextureSample(seed, sx, sy);
    }
  }
  return frame;
}

}  // namespace

std::string_view SynthKindName(SynthKind kind) {
  switch (kind) {
    case SynthKind::kStatic:
      return "static";
    case SynthKind::kStaticNoise:
      return "static_noise";
    case SynthKind::kPan:
      return "pan";
    case SynthKind::kZoom:
      return "zoom";
    case SynthKind::kCut:
      return "cut";
  }
  return "?";
}

std::optional<SynthKind> ParseSynthKind(std::string_view name) {
  for (const SynthKind k : {SynthKind::kStatic, SynthKind::kStaticNoise,
                            SynthKind::kPan, SynthKind::kZoom,
                            SynthKind::kCut}) {
    if (SynthKindName(k) == name) return k;
  }
  return std::nullopt;
}

void SynthSpec::Validate() const {
  if (width < kMinFrameDimension || height < kMinFrameDimension) {
    throw InvalidArgument(fmt::format("synth size {}x{} below minimum {}",
                                      width, height, kMinFrameDimension));
  }
  if (frame_count < 2) {
    throw InvalidArgument(
        fmt::format("synth frame count {} must be >= 2", frame_count));
  }
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw InvalidArgument("synth amplitude must be finite and >= 0");
  }
}

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint8_t TextureSample(uint64_t seed, int64_t x, int64_t y) {
  const int coarse = ValueNoise(seed, x, y, 16, 0);
  const int fine = ValueNoise(seed, x, y, 4, 1);
  return uint8_t((3 * coarse + fine) / 4);
}

VideoSequence Generate(const SynthSpec& spec) {
  spec.Validate();
  std::vector<FramePlane> frames;
  frames.reserve(size_t(spec.frame_count));
  const FramePlane base = TextureFrame(spec.seed, spec.width, spec.height, 0);

  double scale = 1.0;
  for (int f = 0; f < spec.frame_count; ++f) {
    switch (spec.kind) {
      case SynthKind::kStatic:
        frames.push_back(base);
        break;
      case SynthKind::kStaticNoise: {
        FramePlane frame = base;
        for (int y = 0; y < spec.height; ++y) {
          for (int x = 0; x < spec.width; ++x) {
            const double noise =
                spec.amplitude * UnitNoise(spec.seed, f, x, y);
            const int v = int(frame.at(x, y)) + int(std::lround(noise));
            frame.at(x, y) = uint8_t(std::clamp(v, 0, 255));
          }
        }
        frames.push_back(std::move(frame));
        break;
      }
      case SynthKind::kPan:
        frames.push_back(TextureFrame(spec.seed, spec.width, spec.height,
                                      std::llround(f * spec.amplitude)));
        break;
      case SynthKind::kZoom:
        frames.push_back(ZoomFrame(spec.seed, spec.width, spec.height, scale));
        scale *= 1.0 + spec.amplitude / 100.0;
        break;
      case SynthKind::kCut:
        if (f < spec.frame_count / 2) {
          frames.push_back(base);
        } else {
          frames.push_back(TextureFrame(spec.seed ^ kCutSeedSalt, spec.width,
                                        spec.height, 0));
        }
        break;
    }
  }
  return VideoSequence(std::move(frames), FrameRate{30, 1},
                       fmt::format("synth:{}", SynthKindName(spec.kind)));
}

}  // namespace gfadapt
