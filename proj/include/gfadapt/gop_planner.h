#ifndef GFADAPT_GOP_PLANNER_H_
#define GFADAPT_GOP_PLANNER_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gfadapt/stillness.h"

namespace gfadapt {

inline constexpr int kMinGroupInterval = 4;
inline constexpr int kMaxGroupInterval = 16;
inline constexpr int kDefaultBufferSlots = 8;

enum class FrameRole {
  kGolden,
  kAltref,
  kExtraAltref,
  kBwdref,
  kRegular,
  // Re-shows an already coded ALTREF at its display position.
  kOverlay,
};

// Named reference slots, in the order they are serialized.
enum class RefSlot { kLast, kLast2, kLast3, kGolden, kBwdref, kAltref2, kAltref };

enum class GroupStructure { kSingleLayer, kMultilayer };

std::string_view FrameRoleName(FrameRole role);
std::string_view RefSlotName(RefSlot slot);
std::string_view GroupStructureName(GroupStructure structure);

// One step of a group's coding schedule. Display indices are group
// relative: 0 is the anchor owned by the previous group (or keyframe),
// 1..interval are the group's own frames.
struct PlanEntry {
  int display_index = 0;
  int encode_order = 0;
  FrameRole role = FrameRole::kRegular;
  int layer = 0;
  std::map<RefSlot, int> refs;
  bool show_existing = false;

  friend bool operator==(const PlanEntry&, const PlanEntry&) = default;
};

// Entries are stored in encode order.
struct GfGroupPlan {
  int interval = 0;
  GroupStructure structure = GroupStructure::kSingleLayer;
  std::vector<PlanEntry> entries;
};

struct GroupSpan {
  // Sequence display index of the group's first frame; its anchor is
  // start - 1.
  int start = 0;
  int interval = 0;

  friend bool operator==(const GroupSpan&, const GroupSpan&) = default;
};

struct GroupSegmentation {
  // Sequence display indices of keyframes; always starts with 0.
  std::vector<int> keyframes;
  std::vector<GroupSpan> groups;
};

// Greedy split into target-sized groups after each keyframe. A trailing
// remainder of 1..3 frames is merged with the previous full group and the
// pair re-split as evenly as possible, provided both halves stay >= 4;
// otherwise the remainder is kept as a short final group. With
// `key_interval`, frames at multiples of it become keyframes and groups
// never straddle them.
// Throws InvalidArgument if total_frames < 2, target_interval is outside
// [4, 16] or key_interval < 2.
GroupSegmentation SegmentGroups(int total_frames, int target_interval = 16,
                                std::optional<int> key_interval = {});

// Coding schedule for one group. Still groups get the single-layer
// structure: ALTREF first, then every other frame in display order
// referencing only past frames and ALTREF. Non-still groups get a binary
// pyramid of backward anchors (see gop_planner.cc). Both end with an
// OVERLAY entry re-showing the ALTREF.
GfGroupPlan PlanGroup(int interval, Verdict verdict);

enum class PlanCheck {
  kReferenceOrder,   // references coded earlier in encode order
  kCoverage,         // each display 1..L coded exactly once
  kBufferCapacity,   // live references fit the buffer
  kStructure,        // single-layer / multilayer role constraints
  kSlotDirection,    // LAST* past, BWDREF/ALTREF2/ALTREF future
};

std::string_view PlanCheckName(PlanCheck check);

struct PlanViolation {
  PlanCheck check;
  // Offending entry, or -1 for plan-wide violations.
  int encode_order = -1;
  std::string message;
};

struct ValidationReport {
  std::vector<PlanViolation> violations;
  int max_live_references = 0;

  bool ok() const { return violations.empty(); }
  bool failed(PlanCheck check) const;
};

ValidationReport ValidatePlan(const GfGroupPlan& plan,
                              int buffer_slots = kDefaultBufferSlots);

}  // namespace gfadapt

#endif  // GFADAPT_GOP_PLANNER_H_
