#include "gfadapt/pipeline.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {

std::vector<FrameFirstPassStats> AnalyzeFrames(
    const VideoSequence& seq, const std::vector<int>& frame_indices,
    const SearchConfig& cfg, int threads) {
  cfg.Validate();
  for (const int i : frame_indices) {
    if (i < 1 || size_t(i) >= seq.size()) {
      throw InvalidArgument(fmt::format("frame {} has no predecessor", i));
    }
  }

  std::vector<FrameFirstPassStats> out(frame_indices.size());
  const int hw = int(std::max(1u, std::thread::hardware_concurrency()));
  const int workers = std::clamp(threads > 0 ? threads : hw, 1,
                                 std::max(1, int(frame_indices.size())));
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (size_t k = next++; k < frame_indices.size(); k = next++) {
      const int i = frame_indices[k];
      try {
        out[k] = AnalyzeFrame(seq.frame(size_t(i)), seq.frame(size_t(i) - 1),
                              cfg, i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

std::vector<GroupResult> PlanSequence(const VideoSequence& seq,
                                      const PipelineConfig& cfg) {
  cfg.search.Validate();
  cfg.thresholds.Validate();
  const GroupSegmentation seg =
      SegmentGroups(int(seq.size()), cfg.target_interval, cfg.key_interval);

  std::vector<int> indices;
  for (const GroupSpan& g : seg.groups) {
    for (int i = 0; i < g.interval; ++i) indices.push_back(g.start + i);
  }
  const std::vector<FrameFirstPassStats> stats =
      AnalyzeFrames(seq, indices, cfg.search, cfg.threads);

  std::vector<GroupResult> results;
  results.reserve(seg.groups.size());
  size_t cursor = 0;
  for (size_t gi = 0; gi < seg.groups.size(); ++gi) {
    const GroupSpan& g = seg.groups[gi];
    const std::span<const FrameFirstPassStats> group_stats(
        stats.data() + cursor, size_t(g.interval));
    cursor += size_t(g.interval);

    GroupResult r;
    r.record.group_id = int(gi);
    r.record.first_display_index = g.start;
    r.record.metrics = ComputeGroupMetrics(
        group_stats, int64_t{seq.width()} * seq.height());
    r.record.verdict = ClassifyStillness(r.record.metrics, cfg.thresholds);
    r.plan = PlanGroup(g.interval, r.record.verdict);
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gfadapt
