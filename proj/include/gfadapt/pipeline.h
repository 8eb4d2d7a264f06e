#ifndef GFADAPT_PIPELINE_H_
#define GFADAPT_PIPELINE_H_

#include <optional>
#include <vector>

#include "gfadapt/first_pass.h"
#include "gfadapt/frame.h"
#include "gfadapt/gop_planner.h"
#include "gfadapt/stillness.h"

namespace gfadapt {

struct PipelineConfig {
  SearchConfig search;
  StillnessThresholds thresholds;
  int target_interval = kMaxGroupInterval;
  std::optional<int> key_interval;
  // Worker threads for first-pass analysis; 0 picks hardware concurrency.
  int threads = 0;
};

struct GroupResult {
  GroupRecord record;
  GfGroupPlan plan;
};

// First-pass statistics for every frame in `frame_indices`, each predicted
// from its predecessor in display order. Output order matches the input
// regardless of scheduling.
std::vector<FrameFirstPassStats> AnalyzeFrames(const VideoSequence& seq,
                                               const std::vector<int>& frame_indices,
                                               const SearchConfig& cfg,
                                               int threads = 0);

// Segment -> first pass -> group metrics -> stillness verdict -> plan.
// Keyframes are not analyzed; the first frame of every other group is
// predicted from the frame just before it, across the group boundary.
std::vector<GroupResult> PlanSequence(const VideoSequence& seq,
                                      const PipelineConfig& cfg);

}  // namespace gfadapt

#endif  // GFADAPT_PIPELINE_H_
