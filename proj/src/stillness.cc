#include "gfadapt/stillness.h"

#include <algorithm>
#include <functional>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

// Summing a sorted copy keeps the mean bit-identical under any reordering
// of the input.
double OrderFreeMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / double(values.size());
}

void CheckSink(const std::ostream& out) {
  if (!out) throw IoError("failed writing CSV output");
}

}  // namespace

void StillnessThresholds::Validate() const {
  // zero_motion_accumulator is a fraction; 1.0 disables the still path.
  if (!(zero_motion_min >= 0.0 && zero_motion_min <= 1.0)) {
    throw InvalidArgument(fmt::format(
        "zero-motion threshold {} outside [0, 1]", zero_motion_min));
  }
  if (!(pixel_error_max > 0.0) || !(error_stdev_max > 0.0)) {
    throw InvalidArgument(fmt::format(
        "error thresholds must be positive (got {}, {})", pixel_error_max,
        error_stdev_max));
  }
}

bool StillnessThresholds::is_default() const {
  const StillnessThresholds d;
  return zero_motion_min == d.zero_motion_min &&
         pixel_error_max == d.pixel_error_max &&
         error_stdev_max == d.error_stdev_max;
}

std::string_view VerdictName(Verdict verdict) {
  return verdict == Verdict::kStill ? "still" : "non-still";
}

GfGroupMetrics ComputeGroupMetrics(std::span<const FrameFirstPassStats> stats,
                                   int64_t pixels_per_frame) {
  if (stats.empty()) throw InvalidArgument("no frame statistics in group");
  if (pixels_per_frame <= 0) {
    throw InvalidArgument("pixels_per_frame must be positive");
  }

  GfGroupMetrics m;
  m.interval = int(stats.size());
  m.zero_motion_accumulator = stats.front().pcnt_zero_motion;
  uint64_t total_sse = 0;
  std::vector<double> stdevs;
  stdevs.reserve(stats.size());
  for (const FrameFirstPassStats& s : stats) {
    m.zero_motion_accumulator =
        std::min(m.zero_motion_accumulator, s.pcnt_zero_motion);
    total_sse += s.frame_sse;
    stdevs.push_back(s.zero_mv_sse_stdev);
  }
  // mean(sse_i / P) == sum(sse_i) / (n * P); the integer sum is exact.
  m.avg_pixel_error =
      double(total_sse) / (double(stats.size()) * double(pixels_per_frame));
  m.avg_error_stdev = OrderFreeMean(std::move(stdevs));
  return m;
}

Verdict ClassifyStillness(const GfGroupMetrics& metrics,
                          const StillnessThresholds& thresholds) {
  const bool still =
      metrics.zero_motion_accumulator > thresholds.zero_motion_min &&
      metrics.avg_pixel_error < thresholds.pixel_error_max &&
      metrics.avg_error_stdev < thresholds.error_stdev_max;
  return still ? Verdict::kStill : Verdict::kNonStill;
}

void DumpGroupMetrics(std::span<const GroupRecord> groups, std::ostream& out) {
  out << "group_id,first_display_index,interval,zero_motion_accumulator,"
         "avg_pixel_error,avg_error_stdev,verdict\n";
  for (const GroupRecord& g : groups) {
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{}\n", g.group_id,
                       g.first_display_index, g.metrics.interval,
                       g.metrics.zero_motion_accumulator,
                       g.metrics.avg_pixel_error, g.metrics.avg_error_stdev,
                       VerdictName(g.verdict));
  }
  CheckSink(out);
}

double Histogram::bin_width() const {
  if (counts.empty()) return 0.0;
  return (max - min) / double(counts.size());
}

Histogram BuildHistogram(std::span<const double> values, int bins) {
  if (bins < 1) throw InvalidArgument("histogram needs at least one bin");
  Histogram h;
  h.counts.assign(size_t(bins), 0);
  if (values.empty()) return h;

  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  h.min = *lo;
  h.max = *hi;
  const double width = h.max - h.min;
  for (const double v : values) {
    int bin = 0;
    if (width > 0.0) {
      bin = int((v - h.min) / width * bins);
      bin = std::clamp(bin, 0, bins - 1);
    }
    ++h.counts[size_t(bin)];
  }
  return h;
}

void DumpHistograms(std::span<const GroupRecord> groups, int bins,
                    std::ostream& out) {
  using Getter = std::function<double(const GfGroupMetrics&)>;
  const std::pair<const char*, Getter> metrics[] = {
      {"zero_motion_accumulator",
       [](const GfGroupMetrics& m) { return m.zero_motion_accumulator; }},
      {"avg_pixel_error",
       [](const GfGroupMetrics& m) { return m.avg_pixel_error; }},
      {"avg_error_stdev",
       [](const GfGroupMetrics& m) { return m.avg_error_stdev; }},
  };

  out << "metric,bin,lower,upper,count\n";
  for (const auto& [name, get] : metrics) {
    std::vector<double> values;
    values.reserve(groups.size());
    for (const GroupRecord& g : groups) values.push_back(get(g.metrics));
    const Histogram h = BuildHistogram(values, bins);
    const double w = h.bin_width();
    for (int b = 0; b < bins; ++b) {
      out << fmt::format("{},{},{:.6f},{:.6f},{}\n", name, b, h.min + w * b,
                         b == bins - 1 ? h.max : h.min + w * (b + 1),
                         h.counts[size_t(b)]);
    }
  }
  CheckSink(out);
}

}  // namespace gfadapt
