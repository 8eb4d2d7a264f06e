#ifndef GFADAPT_STILLNESS_H_
#define GFADAPT_STILLNESS_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "gfadapt/first_pass.h"

namespace gfadapt {

// Stillness statistics of one GF group.
struct GfGroupMetrics {
  int interval = 0;
  // Minimum per-frame pcnt_zero_motion.
  double zero_motion_accumulator = 0.0;
  // Mean over frames of frame_sse / pixels_per_frame.
  double avg_pixel_error = 0.0;
  // Mean over frames of the zero-MV block SSE standard deviation.
  double avg_error_stdev = 0.0;
};

// A group is still only if all three hold (strict):
//   zero_motion_accumulator > zero_motion_min
//   avg_pixel_error         < pixel_error_max
//   avg_error_stdev         < error_stdev_max
// Defaults were calibrated on 8-bit CIF content with 16x16 blocks.
struct StillnessThresholds {
  double zero_motion_min = 0.9;
  double pixel_error_max = 40.0;
  double error_stdev_max = 2000.0;

  // zero_motion_min must lie in [0, 1]; the error limits must be > 0.
  void Validate() const;
  bool is_default() const;
};

enum class Verdict { kStill, kNonStill };

std::string_view VerdictName(Verdict verdict);

// `pixels_per_frame` is the true (unpadded) frame area. Throws
// InvalidArgument on an empty list or non-positive pixel count.
GfGroupMetrics ComputeGroupMetrics(std::span<const FrameFirstPassStats> stats,
                                   int64_t pixels_per_frame);

Verdict ClassifyStillness(const GfGroupMetrics& metrics,
                          const StillnessThresholds& thresholds);

struct GroupRecord {
  int group_id = 0;
  int first_display_index = 0;
  GfGroupMetrics metrics;
  Verdict verdict = Verdict::kNonStill;
};

// CSV with header
//   group_id,first_display_index,interval,zero_motion_accumulator,
//   avg_pixel_error,avg_error_stdev,verdict
void DumpGroupMetrics(std::span<const GroupRecord> groups, std::ostream& out);

struct Histogram {
  double min = 0.0;
  double max = 0.0;
  std::vector<int> counts;

  double bin_width() const;
};

// Fixed-width bins spanning [min(values), max(values)]; the maximum lands
// in the last bin. An empty input yields all-zero counts over [0, 0].
Histogram BuildHistogram(std::span<const double> values, int bins);

// CSV with header metric,bin,lower,upper,count; one block of rows per
// metric in the order of the metrics CSV columns.
void DumpHistograms(std::span<const GroupRecord> groups, int bins,
                    std::ostream& out);

}  // namespace gfadapt

#endif  // GFADAPT_STILLNESS_H_
