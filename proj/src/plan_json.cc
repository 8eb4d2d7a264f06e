#include "gfadapt/plan_json.h"

#include <array>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

constexpr std::array kRoles = {FrameRole::kGolden,      FrameRole::kAltref,
                               FrameRole::kExtraAltref, FrameRole::kBwdref,
                               FrameRole::kRegular,     FrameRole::kOverlay};
constexpr std::array kSlots = {RefSlot::kLast,    RefSlot::kLast2,
                               RefSlot::kLast3,   RefSlot::kGolden,
                               RefSlot::kBwdref,  RefSlot::kAltref2,
                               RefSlot::kAltref};

FrameRole ParseRole(const std::string& name) {
  for (const FrameRole r : kRoles) {
    if (FrameRoleName(r) == name) return r;
  }
  throw ParseError(fmt::format("unknown frame role '{}'", name), -1);
}

RefSlot ParseSlot(const std::string& name) {
  for (const RefSlot s : kSlots) {
    if (RefSlotName(s) == name) return s;
  }
  throw ParseError(fmt::format("unknown reference slot '{}'", name), -1);
}

}  // namespace

nlohmann::ordered_json PlanEntryToJson(const PlanEntry& entry) {
  nlohmann::ordered_json refs = nlohmann::ordered_json::object();
  for (const auto& [slot, display] : entry.refs) {
    refs[std::string(RefSlotName(slot))] = display;
  }
  nlohmann::ordered_json j;
  j["display_index"] = entry.display_index;
  j["encode_order"] = entry.encode_order;
  j["role"] = FrameRoleName(entry.role);
  j["layer"] = entry.layer;
  j["refs"] = std::move(refs);
  j["show_existing"] = entry.show_existing;
  return j;
}

nlohmann::ordered_json GroupResultsToJson(std::span<const GroupResult> groups) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const GroupResult& g : groups) {
    const GfGroupMetrics& m = g.record.metrics;
    nlohmann::ordered_json j;
    j["group_id"] = g.record.group_id;
    j["first_display_index"] = g.record.first_display_index;
    j["interval"] = g.plan.interval;
    j["verdict"] = VerdictName(g.record.verdict);
    j["structure"] = GroupStructureName(g.plan.structure);
    j["metrics"] = {{"zero_motion_accumulator", m.zero_motion_accumulator},
                    {"avg_pixel_error", m.avg_pixel_error},
                    {"avg_error_stdev", m.avg_error_stdev}};
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const PlanEntry& e : g.plan.entries) {
      entries.push_back(PlanEntryToJson(e));
    }
    j["entries"] = std::move(entries);
    out.push_back(std::move(j));
  }
  return out;
}

std::string DumpPlanJson(std::span<const GroupResult> groups) {
  return GroupResultsToJson(groups).dump(2) + "\n";
}

GfGroupPlan PlanFromJson(const nlohmann::json& group) {
  try {
    GfGroupPlan plan;
    plan.interval = group.at("interval").get<int>();
    const auto structure = group.at("structure").get<std::string>();
    if (structure == GroupStructureName(GroupStructure::kSingleLayer)) {
      plan.structure = GroupStructure::kSingleLayer;
    } else if (structure == GroupStructureName(GroupStructure::kMultilayer)) {
      plan.structure = GroupStructure::kMultilayer;
    } else {
      throw ParseError(fmt::format("unknown structure '{}'", structure), -1);
    }
    for (const auto& je : group.at("entries")) {
      PlanEntry e;
      e.display_index = je.at("display_index").get<int>();
      e.encode_order = je.at("encode_order").get<int>();
      e.role = ParseRole(je.at("role").get<std::string>());
      e.layer = je.at("layer").get<int>();
      e.show_existing = je.at("show_existing").get<bool>();
      for (const auto& [name, display] : je.at("refs").items()) {
        e.refs[ParseSlot(name)] = display.get<int>();
      }
      plan.entries.push_back(std::move(e));
    }
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("malformed plan JSON: {}", e.what()), -1);
  }
}

}  // namespace gfadapt
