#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "gfadapt/error.h"
#include "gfadapt/gop_planner.h"

namespace gfadapt {
namespace {

std::vector<int> Intervals(const GroupSegmentation& seg) {
  std::vector<int> out;
  for (const GroupSpan& g : seg.groups) out.push_back(g.interval);
  return out;
}

TEST(SegmentGroupsTest, ExactFit) {
  const GroupSegmentation seg = SegmentGroups(33);
  EXPECT_EQ(seg.keyframes, std::vector<int>{0});
  EXPECT_EQ(Intervals(seg), (std::vector<int>{16, 16}));
  EXPECT_EQ(seg.groups[1].start, 17);
}

TEST(SegmentGroupsTest, ShortRemainderIsRebalanced) {
  const GroupSegmentation seg = SegmentGroups(35);
  EXPECT_EQ(Intervals(seg), (std::vector<int>{16, 9, 9}));
  EXPECT_EQ(seg.groups[1], (GroupSpan{17, 9}));
  EXPECT_EQ(seg.groups[2], (GroupSpan{26, 9}));
}

TEST(SegmentGroupsTest, ShortSequences) {
  EXPECT_EQ(Intervals(SegmentGroups(5)), std::vector<int>{4});
  EXPECT_EQ(Intervals(SegmentGroups(2)), std::vector<int>{1});
  // 4 + 2 cannot be split into two groups of at least 4.
  EXPECT_EQ(Intervals(SegmentGroups(7, 4)), (std::vector<int>{4, 2}));
  EXPECT_EQ(Intervals(SegmentGroups(9, 4)), (std::vector<int>{4, 4}));
}

TEST(SegmentGroupsTest, KeyframesRestartSegmentation) {
  const GroupSegmentation seg = SegmentGroups(40, 16, 20);
  EXPECT_EQ(seg.keyframes, (std::vector<int>{0, 20}));
  EXPECT_EQ(Intervals(seg), (std::vector<int>{10, 9, 10, 9}));
  EXPECT_EQ(seg.groups[2].start, 21);
  for (const GroupSpan& g : seg.groups) {
    EXPECT_FALSE(g.start <= 20 && 20 < g.start + g.interval);
  }
}

// Every total/target pair partitions frames 1..n-1 contiguously, with
// interior groups in [4, 16].
TEST(SegmentGroupsTest, PartitionSweep) {
  for (int target = kMinGroupInterval; target <= kMaxGroupInterval; ++target) {
    for (int total = 2; total <= 120; ++total) {
      const GroupSegmentation seg = SegmentGroups(total, target);
      int next = 1;
      for (size_t i = 0; i < seg.groups.size(); ++i) {
        const GroupSpan& g = seg.groups[i];
        EXPECT_EQ(g.start, next);
        EXPECT_GE(g.interval, 1);
        EXPECT_LE(g.interval, kMaxGroupInterval);
        if (i + 1 < seg.groups.size()) {
          EXPECT_GE(g.interval, kMinGroupInterval);
        }
        next += g.interval;
      }
      EXPECT_EQ(next, total) << total << "/" << target;
    }
  }
}

TEST(SegmentGroupsTest, RejectsBadArguments) {
  EXPECT_THROW(SegmentGroups(1), InvalidArgument);
  EXPECT_THROW(SegmentGroups(33, 3), InvalidArgument);
  EXPECT_THROW(SegmentGroups(33, 17), InvalidArgument);
  EXPECT_THROW(SegmentGroups(33, 16, 1), InvalidArgument);
}

TEST(PlanGroupTest, StillSixteen) {
  const GfGroupPlan plan = PlanGroup(16, Verdict::kStill);
  EXPECT_EQ(plan.structure, GroupStructure::kSingleLayer);
  ASSERT_EQ(plan.entries.size(), 17u);
  EXPECT_EQ(plan.entries.front().role, FrameRole::kAltref);
  EXPECT_EQ(plan.entries.front().display_index, 16);
  for (int d = 1; d <= 15; ++d) {
    const PlanEntry& e = plan.entries[size_t(d)];
    EXPECT_EQ(e.display_index, d);
    EXPECT_EQ(e.role, FrameRole::kRegular);
    EXPECT_EQ(e.refs.at(RefSlot::kLast), d - 1);
    EXPECT_EQ(e.refs.at(RefSlot::kGolden), 0);
    EXPECT_EQ(e.refs.at(RefSlot::kAltref), 16);
    EXPECT_FALSE(e.refs.contains(RefSlot::kBwdref));
  }
  EXPECT_EQ(plan.entries[3].refs.at(RefSlot::kLast3), 0);
  EXPECT_EQ(plan.entries[5].refs.at(RefSlot::kLast3), 2);
  EXPECT_EQ(plan.entries.back().role, FrameRole::kOverlay);
  EXPECT_TRUE(plan.entries.back().show_existing);
}

TEST(PlanGroupTest, SingleFrameGroup) {
  for (const Verdict v : {Verdict::kStill, Verdict::kNonStill}) {
    const GfGroupPlan plan = PlanGroup(1, v);
    ASSERT_EQ(plan.entries.size(), 2u);
    EXPECT_EQ(plan.entries[0].display_index, 1);
    EXPECT_EQ(plan.entries[0].role, FrameRole::kAltref);
    EXPECT_EQ(plan.entries[0].refs,
              (std::map<RefSlot, int>{{RefSlot::kLast, 0},
                                      {RefSlot::kGolden, 0}}));
    EXPECT_EQ(plan.entries[1].role, FrameRole::kOverlay);
    EXPECT_TRUE(ValidatePlan(plan).ok());
  }
}

TEST(PlanGroupTest, MultilayerSixteenPyramid) {
  const GfGroupPlan plan = PlanGroup(16, Verdict::kNonStill);
  EXPECT_EQ(plan.structure, GroupStructure::kMultilayer);
  ASSERT_EQ(plan.entries.size(), 17u);

  std::vector<int> order;
  std::map<int, const PlanEntry*> by_display;
  for (const PlanEntry& e : plan.entries) {
    if (e.role == FrameRole::kOverlay) continue;
    order.push_back(e.display_index);
    by_display[e.display_index] = &e;
  }
  EXPECT_EQ(order, (std::vector<int>{16, 8, 4, 2, 1, 3, 6, 5, 7, 12, 10, 9,
                                     11, 14, 13, 15}));

  auto expect = [&](int d, FrameRole role, int layer) {
    EXPECT_EQ(by_display[d]->role, role) << d;
    EXPECT_EQ(by_display[d]->layer, layer) << d;
  };
  expect(16, FrameRole::kAltref, 1);
  expect(8, FrameRole::kExtraAltref, 2);
  expect(4, FrameRole::kBwdref, 3);
  expect(12, FrameRole::kBwdref, 3);
  for (int d : {2, 6, 10, 14}) expect(d, FrameRole::kBwdref, 4);
  for (int d = 1; d < 16; d += 2) expect(d, FrameRole::kRegular, 5);

  // Leaf 5 sits between anchors 4 and 6, with 8 and 16 further out.
  const PlanEntry& leaf = *by_display[5];
  EXPECT_EQ(leaf.refs.at(RefSlot::kLast), 4);
  EXPECT_EQ(leaf.refs.at(RefSlot::kLast2), 3);
  EXPECT_EQ(leaf.refs.at(RefSlot::kLast3), 2);
  EXPECT_EQ(leaf.refs.at(RefSlot::kBwdref), 6);
  EXPECT_EQ(leaf.refs.at(RefSlot::kAltref2), 8);
  EXPECT_EQ(leaf.refs.at(RefSlot::kAltref), 16);
  EXPECT_EQ(plan.entries.back().role, FrameRole::kOverlay);
  EXPECT_EQ(plan.entries.back().display_index, 16);
}

TEST(PlanGroupTest, RejectsBadInterval) {
  EXPECT_THROW(PlanGroup(0, Verdict::kStill), InvalidArgument);
  EXPECT_THROW(PlanGroup(17, Verdict::kNonStill), InvalidArgument);
}

// Reference closure computed independently: the largest number of coded
// frames that some later entry still refers to or re-shows.
int OracleMaxLive(const GfGroupPlan& plan) {
  int best = 0;
  for (size_t i = 0; i < plan.entries.size(); ++i) {
    std::set<int> coded = {0};
    for (size_t j = 0; j < i; ++j) {
      if (!plan.entries[j].show_existing) {
        coded.insert(plan.entries[j].display_index);
      }
    }
    std::set<int> needed;
    for (size_t j = i; j < plan.entries.size(); ++j) {
      const PlanEntry& e = plan.entries[j];
      if (e.show_existing && coded.contains(e.display_index)) {
        needed.insert(e.display_index);
      }
      for (const auto& [slot, d] : e.refs) {
        if (coded.contains(d)) needed.insert(d);
      }
    }
    best = std::max(best, int(needed.size()));
  }
  return best;
}

TEST(ValidatePlanTest, EveryEmittedPlanPasses) {
  for (int L = 1; L <= kMaxGroupInterval; ++L) {
    for (const Verdict v : {Verdict::kStill, Verdict::kNonStill}) {
      const GfGroupPlan plan = PlanGroup(L, v);
      const ValidationReport report = ValidatePlan(plan);
      EXPECT_TRUE(report.ok()) << "L=" << L << " " << VerdictName(v) << ": "
                               << (report.ok() ? ""
                                               : report.violations[0].message);
      EXPECT_LE(report.max_live_references, kDefaultBufferSlots);
      EXPECT_EQ(report.max_live_references, OracleMaxLive(plan));

      // Permutation and topological order, checked directly.
      std::vector<int> displays;
      std::set<int> seen = {0};
      for (const PlanEntry& e : plan.entries) {
        if (e.show_existing) {
          EXPECT_TRUE(seen.contains(e.display_index));
          continue;
        }
        for (const auto& [slot, d] : e.refs) EXPECT_TRUE(seen.contains(d));
        seen.insert(e.display_index);
        displays.push_back(e.display_index);
      }
      std::sort(displays.begin(), displays.end());
      std::vector<int> expected;
      for (int d = 1; d <= L; ++d) expected.push_back(d);
      EXPECT_EQ(displays, expected);

      const int anchors = int(std::count_if(
          plan.entries.begin(), plan.entries.end(), [](const PlanEntry& e) {
            return e.role == FrameRole::kBwdref ||
                   e.role == FrameRole::kExtraAltref;
          }));
      if (v == Verdict::kStill) {
        EXPECT_EQ(anchors, 0);
      } else if (L >= kMinGroupInterval) {
        EXPECT_GE(anchors, 1) << L;
      }
    }
  }
}

// Layer of every leaf exceeds the layers of the two anchors enclosing it.
TEST(ValidatePlanTest, MultilayerLayerSanity) {
  for (int L = 1; L <= kMaxGroupInterval; ++L) {
    const GfGroupPlan plan = PlanGroup(L, Verdict::kNonStill);
    std::map<int, int> anchor_layer = {{0, 0}};
    for (const PlanEntry& e : plan.entries) {
      if (e.role == FrameRole::kAltref) {
        EXPECT_EQ(e.layer, 1);
      }
      if (e.role == FrameRole::kAltref || e.role == FrameRole::kBwdref ||
          e.role == FrameRole::kExtraAltref) {
        anchor_layer[e.display_index] = e.layer;
      }
    }
    for (const PlanEntry& e : plan.entries) {
      if (e.role != FrameRole::kRegular) continue;
      const auto after = anchor_layer.upper_bound(e.display_index);
      ASSERT_NE(after, anchor_layer.end());
      const auto before = std::prev(anchor_layer.lower_bound(e.display_index));
      EXPECT_GT(e.layer, before->second) << L << ":" << e.display_index;
      EXPECT_GT(e.layer, after->second) << L << ":" << e.display_index;
    }
  }
}

PlanEntry Entry(int display, int order, FrameRole role,
                std::map<RefSlot, int> refs) {
  PlanEntry e;
  e.display_index = display;
  e.encode_order = order;
  e.role = role;
  e.layer = role == FrameRole::kAltref ? 1 : 2;
  e.refs = std::move(refs);
  e.show_existing = role == FrameRole::kOverlay;
  return e;
}

TEST(ValidatePlanTest, LeafReferencingLaterAnchorFailsOrder) {
  GfGroupPlan plan;
  plan.interval = 4;
  plan.structure = GroupStructure::kMultilayer;
  plan.entries = {
      Entry(4, 0, FrameRole::kAltref, {{RefSlot::kLast, 0}}),
      Entry(1, 1, FrameRole::kRegular,
            {{RefSlot::kLast, 0}, {RefSlot::kBwdref, 2}}),
      Entry(2, 2, FrameRole::kBwdref, {{RefSlot::kLast, 0}}),
      Entry(3, 3, FrameRole::kRegular, {{RefSlot::kLast, 2}}),
      Entry(4, 4, FrameRole::kOverlay, {}),
  };
  const ValidationReport r = ValidatePlan(plan);
  EXPECT_TRUE(r.failed(PlanCheck::kReferenceOrder));
  EXPECT_FALSE(r.failed(PlanCheck::kCoverage));
  EXPECT_EQ(r.violations.front().encode_order, 1);
}

TEST(ValidatePlanTest, BwdrefToPastFailsSlotDirection) {
  GfGroupPlan plan = PlanGroup(4, Verdict::kNonStill);
  for (PlanEntry& e : plan.entries) {
    if (e.display_index == 3 && !e.show_existing) {
      e.refs[RefSlot::kBwdref] = 1;
    }
  }
  const ValidationReport r = ValidatePlan(plan);
  EXPECT_TRUE(r.failed(PlanCheck::kSlotDirection));
  EXPECT_FALSE(r.failed(PlanCheck::kReferenceOrder));
}

TEST(ValidatePlanTest, DuplicateAndMissingDisplaysFailCoverage) {
  GfGroupPlan plan = PlanGroup(4, Verdict::kStill);
  plan.entries[2].display_index = 1;
  const ValidationReport r = ValidatePlan(plan);
  EXPECT_TRUE(r.failed(PlanCheck::kCoverage));
}

TEST(ValidatePlanTest, SmallBufferFailsCapacity) {
  const GfGroupPlan plan = PlanGroup(16, Verdict::kNonStill);
  EXPECT_TRUE(ValidatePlan(plan, 2).failed(PlanCheck::kBufferCapacity));
  EXPECT_FALSE(ValidatePlan(plan, 8).failed(PlanCheck::kBufferCapacity));
}

TEST(ValidatePlanTest, StructureDichotomy) {
  GfGroupPlan single = PlanGroup(8, Verdict::kNonStill);
  single.structure = GroupStructure::kSingleLayer;
  EXPECT_TRUE(ValidatePlan(single).failed(PlanCheck::kStructure));

  GfGroupPlan multi = PlanGroup(8, Verdict::kStill);
  multi.structure = GroupStructure::kMultilayer;
  EXPECT_TRUE(ValidatePlan(multi).failed(PlanCheck::kStructure));
}

TEST(ValidatePlanTest, WrongEncodeOrderFieldIsReported) {
  GfGroupPlan plan = PlanGroup(4, Verdict::kStill);
  plan.entries[1].encode_order = 7;
  EXPECT_TRUE(ValidatePlan(plan).failed(PlanCheck::kReferenceOrder));
}

}  // namespace
}  // namespace gfadapt
