#include "gfadapt/gop_planner.h"

#include <algorithm>
#include <iterator>
#include <set>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

// A backward anchor placed more than this many frames ahead of its nearest
// coded past frame is an EXTRA_ALTREF; closer ones are BWDREFs.
constexpr int kExtraAltrefMinDistance = 5;
// A span gets a midpoint anchor only if the anchor would sit at least this
// far from the span's past end; shorter spans are filled with leaves.
constexpr int kMinAnchorDistance = 2;

bool IsBackwardAnchor(FrameRole role) {
  return role == FrameRole::kExtraAltref || role == FrameRole::kBwdref;
}

class PlanBuilder {
 public:
  PlanBuilder(int interval, GroupStructure structure)
      : interval_(interval), structure_(structure) {
    plan_.interval = interval;
    plan_.structure = structure;
    coded_.insert(0);
  }

  void Code(int display, FrameRole role, int layer) {
    PlanEntry e;
    e.display_index = display;
    e.encode_order = int(plan_.entries.size());
    e.role = role;
    e.layer = layer;
    AssignRefs(e);
    plan_.entries.push_back(std::move(e));
    coded_.insert(display);
  }

  void Overlay(int display) {
    PlanEntry e;
    e.display_index = display;
    e.encode_order = int(plan_.entries.size());
    e.role = FrameRole::kOverlay;
    e.layer = 0;
    e.show_existing = true;
    plan_.entries.push_back(std::move(e));
  }

  GfGroupPlan Finish() && { return std::move(plan_); }

 private:
  void AssignRefs(PlanEntry& e) const {
    const int d = e.display_index;
    static constexpr RefSlot kPastSlots[] = {RefSlot::kLast, RefSlot::kLast2,
                                             RefSlot::kLast3};
    auto past = std::make_reverse_iterator(coded_.lower_bound(d));
    for (const RefSlot slot : kPastSlots) {
      if (past == coded_.rend()) break;
      e.refs[slot] = *past++;
    }
    e.refs[RefSlot::kGolden] = 0;

    if (structure_ == GroupStructure::kMultilayer) {
      auto future = coded_.upper_bound(d);
      if (future != coded_.end()) e.refs[RefSlot::kBwdref] = *future++;
      if (future != coded_.end()) e.refs[RefSlot::kAltref2] = *future;
    }
    if (d < interval_ && coded_.contains(interval_)) {
      e.refs[RefSlot::kAltref] = interval_;
    }
  }

  int interval_;
  GroupStructure structure_;
  GfGroupPlan plan_;
  std::set<int> coded_;
};

// Tree depth of the pyramid for span (0, interval): the deepest anchor
// layer, so leaves can sit one layer below every anchor.
int MaxAnchorLayer(int a, int b, int layer) {
  const int m = (a + b) / 2;
  if (m - a < kMinAnchorDistance) return layer - 1;
  return std::max(MaxAnchorLayer(a, m, layer + 1),
                  MaxAnchorLayer(m, b, layer + 1));
}

// Codes the frames strictly between the coded endpoints a and b.
void CodeSpan(PlanBuilder& builder, int a, int b, int layer, int leaf_layer) {
  const int m = (a + b) / 2;
  if (m - a < kMinAnchorDistance) {
    for (int d = a + 1; d < b; ++d) {
      builder.Code(d, FrameRole::kRegular, leaf_layer);
    }
    return;
  }
  const FrameRole role = m - a >= kExtraAltrefMinDistance
                             ? FrameRole::kExtraAltref
                             : FrameRole::kBwdref;
  builder.Code(m, role, layer);
  CodeSpan(builder, a, m, layer + 1, leaf_layer);
  CodeSpan(builder, m, b, layer + 1, leaf_layer);
}

}  // namespace

std::string_view FrameRoleName(FrameRole role) {
  switch (role) {
    case FrameRole::kGolden:
      return "GOLDEN";
    case FrameRole::kAltref:
      return "ALTREF";
    case FrameRole::kExtraAltref:
      return "EXTRA_ALTREF";
    case FrameRole::kBwdref:
      return "BWDREF";
    case FrameRole::kRegular:
      return "REGULAR";
    case FrameRole::kOverlay:
      return "OVERLAY";
  }
  return "?";
}

std::string_view RefSlotName(RefSlot slot) {
  switch (slot) {
    case RefSlot::kLast:
      return "LAST";
    case RefSlot::kLast2:
      return "LAST2";
    case RefSlot::kLast3:
      return "LAST3";
    case RefSlot::kGolden:
      return "GOLDEN";
    case RefSlot::kBwdref:
      return "BWDREF";
    case RefSlot::kAltref2:
      return "ALTREF2";
    case RefSlot::kAltref:
      return "ALTREF";
  }
  return "?";
}

std::string_view GroupStructureName(GroupStructure structure) {
  return structure == GroupStructure::kSingleLayer ? "single_layer"
                                                   : "multilayer";
}

std::string_view PlanCheckName(PlanCheck check) {
  switch (check) {
    case PlanCheck::kReferenceOrder:
      return "reference_order";
    case PlanCheck::kCoverage:
      return "coverage";
    case PlanCheck::kBufferCapacity:
      return "buffer_capacity";
    case PlanCheck::kStructure:
      return "structure";
    case PlanCheck::kSlotDirection:
      return "slot_direction";
  }
  return "?";
}

GroupSegmentation SegmentGroups(int total_frames, int target_interval,
                                std::optional<int> key_interval) {
  if (total_frames < 2) {
    throw InvalidArgument(
        fmt::format("need at least 2 frames, got {}", total_frames));
  }
  if (target_interval < kMinGroupInterval ||
      target_interval > kMaxGroupInterval) {
    throw InvalidArgument(fmt::format("target interval {} outside [{}, {}]",
                                      target_interval, kMinGroupInterval,
                                      kMaxGroupInterval));
  }
  if (key_interval && *key_interval < 2) {
    throw InvalidArgument(
        fmt::format("key interval {} must be >= 2", *key_interval));
  }

  GroupSegmentation seg;
  const int period = key_interval.value_or(total_frames);
  for (int key = 0; key < total_frames; key += period) {
    seg.keyframes.push_back(key);
    const int n = std::min(period, total_frames - key) - 1;
    const size_t first = seg.groups.size();
    int start = key + 1;
    for (int i = 0; i < n / target_interval; ++i) {
      seg.groups.push_back({start, target_interval});
      start += target_interval;
    }
    const int remainder = n % target_interval;
    if (remainder == 0) continue;
    const int merged = target_interval + remainder;
    if (remainder < kMinGroupInterval && seg.groups.size() > first &&
        merged >= 2 * kMinGroupInterval) {
      GroupSpan& last = seg.groups.back();
      last.interval = (merged + 1) / 2;
      seg.groups.push_back({last.start + last.interval, merged / 2});
    } else {
      seg.groups.push_back({start, remainder});
    }
  }
  return seg;
}

GfGroupPlan PlanGroup(int interval, Verdict verdict) {
  if (interval < 1 || interval > kMaxGroupInterval) {
    throw InvalidArgument(fmt::format("group interval {} outside [1, {}]",
                                      interval, kMaxGroupInterval));
  }
  const GroupStructure structure = verdict == Verdict::kStill
                                       ? GroupStructure::kSingleLayer
                                       : GroupStructure::kMultilayer;
  PlanBuilder builder(interval, structure);
  builder.Code(interval, FrameRole::kAltref, 1);
  if (structure == GroupStructure::kSingleLayer) {
    for (int d = 1; d < interval; ++d) {
      builder.Code(d, FrameRole::kRegular, 2);
    }
  } else {
    const int leaf_layer = std::max(MaxAnchorLayer(0, interval, 2), 1) + 1;
    CodeSpan(builder, 0, interval, 2, leaf_layer);
  }
  builder.Overlay(interval);
  return std::move(builder).Finish();
}

bool ValidationReport::failed(PlanCheck check) const {
  return std::any_of(violations.begin(), violations.end(),
                     [check](const PlanViolation& v) {
                       return v.check == check;
                     });
}

ValidationReport ValidatePlan(const GfGroupPlan& plan, int buffer_slots) {
  ValidationReport report;
  auto fail = [&report](PlanCheck check, int order, std::string message) {
    report.violations.push_back({check, order, std::move(message)});
  };
  const int L = plan.interval;
  const auto& entries = plan.entries;

  // (a) decode-before-reference, (b) coverage, (e) slot direction.
  std::set<int> coded = {0};
  std::vector<int> coded_count(size_t(std::max(L, 0)) + 1, 0);
  for (size_t i = 0; i < entries.size(); ++i) {
    const PlanEntry& e = entries[i];
    const int order = int(i);
    if (e.encode_order != order) {
      fail(PlanCheck::kReferenceOrder, order,
           fmt::format("entry {} carries encode_order {}", i, e.encode_order));
    }
    if (e.display_index < 1 || e.display_index > L) {
      fail(PlanCheck::kCoverage, order,
           fmt::format("display {} outside [1, {}]", e.display_index, L));
      continue;
    }
    const bool is_overlay = e.role == FrameRole::kOverlay;
    if (e.show_existing != is_overlay) {
      fail(PlanCheck::kCoverage, order,
           "show_existing must be set exactly on OVERLAY entries");
    }
    if (is_overlay) {
      if (!coded.contains(e.display_index)) {
        fail(PlanCheck::kReferenceOrder, order,
             fmt::format("overlay of display {} before it is coded",
                         e.display_index));
      }
      continue;
    }
    ++coded_count[size_t(e.display_index)];

    for (const auto& [slot, target] : e.refs) {
      if (!coded.contains(target)) {
        fail(PlanCheck::kReferenceOrder, order,
             fmt::format("display {} references {} via {} before it is coded",
                         e.display_index, target, RefSlotName(slot)));
      }
      const bool backward = slot == RefSlot::kBwdref ||
                            slot == RefSlot::kAltref2 ||
                            slot == RefSlot::kAltref;
      if (backward ? target <= e.display_index : target >= e.display_index) {
        fail(PlanCheck::kSlotDirection, order,
             fmt::format("display {} maps {} to display {}", e.display_index,
                         RefSlotName(slot), target));
      }
    }
    coded.insert(e.display_index);
  }
  for (int d = 1; d <= L; ++d) {
    if (coded_count[size_t(d)] != 1) {
      fail(PlanCheck::kCoverage, -1,
           fmt::format("display {} coded {} times", d, coded_count[size_t(d)]));
    }
  }

  // (c) frames that are coded and still needed by a later entry must fit.
  std::set<int> available = {0};
  for (size_t i = 0; i < entries.size(); ++i) {
    int live = 0;
    for (const int d : available) {
      const bool needed = std::any_of(
          entries.begin() + std::ptrdiff_t(i), entries.end(),
          [d](const PlanEntry& later) {
            if (later.role == FrameRole::kOverlay) {
              return later.display_index == d;
            }
            return std::any_of(
                later.refs.begin(), later.refs.end(),
                [d](const auto& ref) { return ref.second == d; });
          });
      if (needed) ++live;
    }
    report.max_live_references = std::max(report.max_live_references, live);
    if (live > buffer_slots) {
      fail(PlanCheck::kBufferCapacity, int(i),
           fmt::format("{} live references exceed {} slots", live,
                       buffer_slots));
    }
    if (entries[i].role != FrameRole::kOverlay) {
      available.insert(entries[i].display_index);
    }
  }

  // (d) structure dichotomy.
  const bool has_backward_anchor =
      std::any_of(entries.begin(), entries.end(),
                  [](const PlanEntry& e) { return IsBackwardAnchor(e.role); });
  if (plan.structure == GroupStructure::kSingleLayer) {
    for (const PlanEntry& e : entries) {
      if (IsBackwardAnchor(e.role) || e.refs.contains(RefSlot::kBwdref) ||
          e.refs.contains(RefSlot::kAltref2)) {
        fail(PlanCheck::kStructure, e.encode_order,
             fmt::format("single-layer plan uses {} at display {}",
                         FrameRoleName(e.role), e.display_index));
      }
    }
  } else if (L >= kMinGroupInterval && !has_backward_anchor) {
    fail(PlanCheck::kStructure, -1,
         "multilayer plan has no BWDREF or EXTRA_ALTREF");
  }
  return report;
}

}  // namespace gfadapt
