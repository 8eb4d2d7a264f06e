#ifndef GFADAPT_FRAME_H_
#define GFADAPT_FRAME_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gfadapt {

inline constexpr int kMinFrameDimension = 16;

// One 8-bit luma plane, row-major, no stride padding.
class FramePlane {
 public:
  // Zero-filled plane. Throws InvalidArgument if either dimension is below
  // kMinFrameDimension.
  FramePlane(int width, int height);
  FramePlane(int width, int height, uint8_t fill);
  // Takes ownership of `samples`; its size must be exactly width * height.
  FramePlane(int width, int height, std::vector<uint8_t> samples);

  int width() const { return width_; }
  int height() const { return height_; }
  int64_t pixel_count() const { return int64_t{width_} * height_; }

  uint8_t at(int x, int y) const { return samples_[index(x, y)]; }
  uint8_t& at(int x, int y) { return samples_[index(x, y)]; }

  // Sample with coordinates clamped into the plane (edge replication).
  uint8_t clamped(int x, int y) const;

  std::span<const uint8_t> row(int y) const {
    return {samples_.data() + size_t(y) * size_t(width_), size_t(width_)};
  }
  std::span<const uint8_t> samples() const { return samples_; }
  std::span<uint8_t> mutable_samples() { return samples_; }

  bool same_size(const FramePlane& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const FramePlane&, const FramePlane&) = default;

 private:
  size_t index(int x, int y) const {
    return size_t(y) * size_t(width_) + size_t(x);
  }

  int width_;
  int height_;
  std::vector<uint8_t> samples_;
};

// Copy of `frame` grown to the next multiple of `multiple` in each
// dimension by replicating the last column/row. Returns an unchanged copy
// when the dimensions are already aligned.
FramePlane PadToMultiple(const FramePlane& frame, int multiple);

struct FrameRate {
  int num = 30;
  int den = 1;

  double fps() const { return den == 0 ? 0.0 : double(num) / den; }
  friend bool operator==(const FrameRate&, const FrameRate&) = default;
};

// Decoded luma frames sharing one geometry. Immutable once built, so it can
// be shared across analysis threads.
class VideoSequence {
 public:
  // Throws InvalidArgument if `frames` is empty or sizes differ.
  explicit VideoSequence(std::vector<FramePlane> frames,
                         FrameRate frame_rate = {},
                         std::string source_name = {});

  const std::vector<FramePlane>& frames() const { return frames_; }
  const FramePlane& frame(size_t i) const { return frames_.at(i); }
  size_t size() const { return frames_.size(); }
  int width() const { return frames_.front().width(); }
  int height() const { return frames_.front().height(); }
  const FrameRate& frame_rate() const { return frame_rate_; }
  const std::string& source_name() const { return source_name_; }

 private:
  std::vector<FramePlane> frames_;
  FrameRate frame_rate_;
  std::string source_name_;
};

}  // namespace gfadapt

#endif  // GFADAPT_FRAME_H_
