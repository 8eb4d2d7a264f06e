#include "gfadapt/frame.h"

#include <algorithm>
#include <utility>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

void CheckDimensions(int width, int height) {
  if (width < kMinFrameDimension || height < kMinFrameDimension) {
    throw InvalidArgument(fmt::format(
        "frame dimensions {}x{} below minimum {}", width, height,
        kMinFrameDimension));
  }
}

}  // namespace

FramePlane::FramePlane(int width, int height) : FramePlane(width, height, 0) {}

FramePlane::FramePlane(int width, int height, uint8_t fill)
    : width_(width), height_(height) {
  CheckDimensions(width, height);
  samples_.assign(size_t(width) * size_t(height), fill);
}

FramePlane::FramePlane(int width, int height, std::vector<uint8_t> samples)
    : width_(width), height_(height), samples_(std::move(samples)) {
  CheckDimensions(width, height);
  if (samples_.size() != size_t(width) * size_t(height)) {
    throw InvalidArgument(fmt::format(
        "sample count {} does not match {}x{}", samples_.size(), width,
        height));
  }
}

uint8_t FramePlane::clamped(int x, int y) const {
  return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
}

FramePlane PadToMultiple(const FramePlane& frame, int multiple) {
  if (multiple <= 0) throw InvalidArgument("padding multiple must be > 0");
  const int padded_w = (frame.width() + multiple - 1) / multiple * multiple;
  const int padded_h = (frame.height() + multiple - 1) / multiple * multiple;
  if (padded_w == frame.width() && padded_h == frame.height()) return frame;

  FramePlane out(padded_w, padded_h);
  for (int y = 0; y < padded_h; ++y) {
    for (int x = 0; x < padded_w; ++x) out.at(x, y) = frame.clamped(x, y);
  }
  return out;
}

VideoSequence::VideoSequence(std::vector<FramePlane> frames,
                             FrameRate frame_rate, std::string source_name)
    : frames_(std::move(frames)),
      frame_rate_(frame_rate),
      source_name_(std::move(source_name)) {
  if (frames_.empty()) throw InvalidArgument("video sequence has no frames");
  for (size_t i = 1; i < frames_.size(); ++i) {
    if (!frames_[i].same_size(frames_[0])) {
      throw InvalidArgument(fmt::format(
          "frame {} is {}x{}, expected {}x{}", i, frames_[i].width(),
          frames_[i].height(), frames_[0].width(), frames_[0].height()));
    }
  }
}

}  // namespace gfadapt
