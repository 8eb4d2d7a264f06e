#ifndef GFADAPT_PLAN_JSON_H_
#define GFADAPT_PLAN_JSON_H_

#include <span>
#include <string>

#include <json.hpp>

#include "gfadapt/gop_planner.h"
#include "gfadapt/pipeline.h"

namespace gfadapt {

// Serialized plan export. Key order is fixed so output is byte-stable:
//
// [ { "group_id", "first_display_index", "interval", "verdict",
//     "structure", "metrics": { "zero_motion_accumulator",
//     "avg_pixel_error", "avg_error_stdev" },
//     "entries": [ { "display_index", "encode_order", "role", "layer",
//                    "refs": { "LAST": n, ... }, "show_existing" } ] } ]
nlohmann::ordered_json PlanEntryToJson(const PlanEntry& entry);
nlohmann::ordered_json GroupResultsToJson(std::span<const GroupResult> groups);
std::string DumpPlanJson(std::span<const GroupResult> groups);

// Inverse of the "interval"/"structure"/"entries" part of one group object.
// Throws ParseError on unknown role/slot names or missing fields.
GfGroupPlan PlanFromJson(const nlohmann::json& group);

}  // namespace gfadapt

#endif  // GFADAPT_PLAN_JSON_H_
