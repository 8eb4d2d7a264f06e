#include "cli.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "gfadapt/error.h"
#include "gfadapt/pipeline.h"
#include "gfadapt/plan_json.h"
#include "gfadapt/quality.h"
#include "gfadapt/stillness.h"
#include "gfadapt/synth.h"
#include "gfadapt/y4m.h"

namespace gfadapt::cli {
namespace {

// Flag combination rejected after CLI11 parsing but before any file I/O.
class UsageError : public Error {
 public:
  using Error::Error;
};

class PlanValidationError : public Error {
 public:
  using Error::Error;
};

struct InputOptions {
  int width = 0;
  int height = 0;
  std::string chroma = "420";
  int fps = 30;
};

struct AnalysisOptions {
  std::string input;
  std::string output;
  InputOptions raw;
  PipelineConfig pipeline;
  std::string search_kind = "exhaustive";
  int key_interval = 0;
  std::string histogram;
  int bins = 20;
};

bool IsRawYuvPath(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".yuv") == 0;
}

void ValidateInputOptions(const std::string& path, const InputOptions& raw) {
  if (IsRawYuvPath(path) && (raw.width <= 0 || raw.height <= 0)) {
    throw UsageError(
        fmt::format("raw input '{}' needs --width and --height", path));
  }
}

VideoSequence LoadVideo(const std::string& path, const InputOptions& raw) {
  if (IsRawYuvPath(path)) {
    const ChromaFormat format =
        raw.chroma == "444" ? ChromaFormat::k444 : ChromaFormat::k420;
    return LoadRawYuvFile(path, raw.width, raw.height, format,
                          FrameRate{raw.fps, 1});
  }
  return LoadY4mFile(path);
}

// Writes `text` to `path`, or to `out` when the path is empty.
void Emit(const std::string& text, const std::string& path,
          std::ostream& out) {
  if (path.empty()) {
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError(fmt::format("cannot open '{}' for writing", path));
  file << text;
  file.flush();
  if (!file) throw IoError(fmt::format("failed writing '{}'", path));
}

void AddRawInputFlags(CLI::App* cmd, InputOptions& raw) {
  cmd->add_option("--width", raw.width, "Raw .yuv frame width");
  cmd->add_option("--height", raw.height, "Raw .yuv frame height");
  cmd->add_option("--chroma", raw.chroma, "Raw .yuv chroma format")
      ->check(CLI::IsMember({"420", "444"}))
      ->capture_default_str();
  cmd->add_option("--fps", raw.fps, "Raw .yuv frame rate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void AddAnalysisFlags(CLI::App* cmd, AnalysisOptions& opt) {
  cmd->add_option("input", opt.input, "Input .y4m (or .yuv with --width/--height)")
      ->required();
  cmd->add_option("-o,--output", opt.output, "Output file (default stdout)");
  AddRawInputFlags(cmd, opt.raw);
  SearchConfig& s = opt.pipeline.search;
  cmd->add_option("--block-size", s.block_size, "Motion search block size")
      ->check(CLI::IsMember({8, 16, 32}))
      ->capture_default_str();
  cmd->add_option("--search-range", s.search_range,
                  "Integer-pel search range")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--search", opt.search_kind, "Search strategy")
      ->check(CLI::IsMember({"exhaustive", "diamond"}))
      ->capture_default_str();
  cmd->add_option("--interval", opt.pipeline.target_interval,
                  "Target GF group interval")
      ->check(CLI::Range(kMinGroupInterval, kMaxGroupInterval))
      ->capture_default_str();
  cmd->add_option("--key-interval", opt.key_interval,
                  "Keyframe period (0 = only the first frame)")
      ->check(CLI::NonNegativeNumber);
  StillnessThresholds& t = opt.pipeline.thresholds;
  cmd->add_option("--zm-min", t.zero_motion_min,
                  "Still if zero_motion_accumulator exceeds this")
      ->capture_default_str();
  cmd->add_option("--ape-max", t.pixel_error_max,
                  "Still if avg_pixel_error is below this")
      ->capture_default_str();
  cmd->add_option("--aes-max", t.error_stdev_max,
                  "Still if avg_error_stdev is below this")
      ->capture_default_str();
  cmd->add_option("--threads", opt.pipeline.threads,
                  "First-pass worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

void FinalizeAnalysisOptions(AnalysisOptions& opt, std::ostream& err) {
  opt.pipeline.search.search_kind = opt.search_kind == "diamond"
                                        ? SearchKind::kDiamond
                                        : SearchKind::kExhaustive;
  if (opt.key_interval == 1) {
    throw UsageError("--key-interval must be 0 or >= 2");
  }
  if (opt.key_interval > 1) opt.pipeline.key_interval = opt.key_interval;
  try {
    opt.pipeline.search.Validate();
    opt.pipeline.thresholds.Validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  if (opt.bins < 1) throw UsageError("--bins must be >= 1");
  ValidateInputOptions(opt.input, opt.raw);
  if (opt.pipeline.search.block_size != 16 &&
      opt.pipeline.thresholds.is_default()) {
    err << fmt::format(
        "warning: default stillness thresholds were calibrated for 16x16 "
        "blocks; block size {} may need recalibrated --zm-min/--ape-max/"
        "--aes-max\n",
        opt.pipeline.search.block_size);
  }
}

std::vector<GroupResult> RunPipeline(const AnalysisOptions& opt) {
  const VideoSequence seq = LoadVideo(opt.input, opt.raw);
  return PlanSequence(seq, opt.pipeline);
}

std::vector<GroupRecord> Records(const std::vector<GroupResult>& results) {
  std::vector<GroupRecord> records;
  records.reserve(results.size());
  for (const GroupResult& r : results) records.push_back(r.record);
  return records;
}

void PrintSummary(const std::vector<GroupResult>& results, std::ostream& err) {
  int still = 0;
  for (const GroupResult& r : results) {
    if (r.record.verdict == Verdict::kStill) ++still;
  }
  err << fmt::format("{} group(s): {} still, {} non-still\n", results.size(),
                     still, int(results.size()) - still);
}

void CmdAnalyze(AnalysisOptions& opt, std::ostream& out, std::ostream& err) {
  const auto results = RunPipeline(opt);
  const auto records = Records(results);
  std::ostringstream csv;
  DumpGroupMetrics(records, csv);
  Emit(csv.str(), opt.output, out);
  if (!opt.histogram.empty()) {
    std::ostringstream hist;
    DumpHistograms(records, opt.bins, hist);
    Emit(hist.str(), opt.histogram, out);
  }
  PrintSummary(results, err);
}

void CmdPlan(AnalysisOptions& opt, std::ostream& out, std::ostream& err) {
  const auto results = RunPipeline(opt);
  for (const GroupResult& r : results) {
    const ValidationReport report = ValidatePlan(r.plan);
    if (!report.ok()) {
      std::string detail;
      for (const PlanViolation& v : report.violations) {
        detail += fmt::format("\n  [{}] entry {}: {}", PlanCheckName(v.check),
                              v.encode_order, v.message);
      }
      throw PlanValidationError(fmt::format(
          "plan for group {} failed validation:{}", r.record.group_id, detail));
    }
  }
  Emit(DumpPlanJson(results), opt.output, out);
  PrintSummary(results, err);
}

struct QualityOptions {
  std::string ref;
  std::string dist;
  std::string output;
  InputOptions raw;
};

void CmdQuality(const QualityOptions& opt, std::ostream& out,
                std::ostream& err) {
  const VideoSequence ref = LoadVideo(opt.ref, opt.raw);
  const VideoSequence dist = LoadVideo(opt.dist, opt.raw);
  if (ref.size() != dist.size() || ref.width() != dist.width() ||
      ref.height() != dist.height()) {
    throw InvalidArgument(fmt::format(
        "sequences differ: {} frames {}x{} vs {} frames {}x{}", ref.size(),
        ref.width(), ref.height(), dist.size(), dist.width(), dist.height()));
  }
  const QualityReport report = SequenceQuality(ref, dist);
  std::string csv = "frame,psnr_db,ssim\n";
  for (size_t i = 0; i < report.psnr.size(); ++i) {
    csv += fmt::format("{},{:.6f},{:.6f}\n", i, report.psnr[i],
                       report.ssim[i]);
  }
  csv += fmt::format("mean,{:.6f},{:.6f}\n", report.average_psnr,
                     report.average_ssim);
  Emit(csv, opt.output, out);
  err << fmt::format("{} frame(s): mean PSNR {:.4f} dB, mean SSIM {:.6f}\n",
                     report.psnr.size(), report.average_psnr,
                     report.average_ssim);
}

std::string FormatPercent(double value) {
  // Avoid printing "-0.000" for results that round to zero.
  if (std::fabs(value) < 0.0005) value = 0.0;
  return fmt::format("{:.3f}\n", value);
}

void CmdBdRate(const std::string& base_path, const std::string& test_path,
               std::ostream& out) {
  const RdCurve base = LoadRdCurveCsvFile(base_path);
  const RdCurve test = LoadRdCurveCsvFile(test_path);
  out << FormatPercent(BdRate(base, test));
  out.flush();
}

struct SynthOptions {
  SynthSpec spec;
  std::string kind = "static";
  std::string output;
};

void CmdSynth(SynthOptions& opt, std::ostream& out, std::ostream& err) {
  const VideoSequence seq = Generate(opt.spec);
  int64_t bytes = 0;
  if (opt.output.empty()) {
    bytes = WriteY4m(seq, out);
  } else {
    bytes = WriteY4mFile(seq, opt.output);
  }
  err << fmt::format("wrote {} frame(s) {}x{} ({} bytes)\n", seq.size(),
                     seq.width(), seq.height(), bytes);
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Adaptive GF group coding-structure planner with stillness "
               "detection",
               "gfadapt"};
  app.require_subcommand(1);

  AnalysisOptions analyze_opt;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "First pass + stillness metrics per GF group (CSV)");
  AddAnalysisFlags(analyze, analyze_opt);
  analyze->add_option("--histogram", analyze_opt.histogram,
                      "Also write per-metric histogram CSV to this path");
  analyze->add_option("--bins", analyze_opt.bins, "Histogram bin count")
      ->capture_default_str();

  AnalysisOptions plan_opt;
  CLI::App* plan = app.add_subcommand(
      "plan", "Adaptive GF group coding structure per group (JSON)");
  AddAnalysisFlags(plan, plan_opt);

  QualityOptions quality_opt;
  CLI::App* quality =
      app.add_subcommand("quality", "Per-frame PSNR/SSIM of two sequences");
  quality->add_option("ref", quality_opt.ref, "Reference sequence")->required();
  quality->add_option("dist", quality_opt.dist, "Distorted sequence")
      ->required();
  quality->add_option("-o,--output", quality_opt.output,
                      "Output CSV (default stdout)");
  AddRawInputFlags(quality, quality_opt.raw);

  std::string base_csv;
  std::string test_csv;
  CLI::App* bdrate =
      app.add_subcommand("bdrate", "Bjontegaard delta rate of two RD curves");
  bdrate->add_option("base", base_csv, "Base RD curve CSV")->required();
  bdrate->add_option("test", test_csv, "Test RD curve CSV")->required();

  SynthOptions synth_opt;
  CLI::App* synth =
      app.add_subcommand("synth", "Generate a deterministic test sequence");
  synth->add_option("--kind", synth_opt.kind, "Content kind")
      ->check(CLI::IsMember({"static", "static_noise", "pan", "zoom", "cut"}))
      ->capture_default_str();
  synth->add_option("--width", synth_opt.spec.width)->capture_default_str();
  synth->add_option("--height", synth_opt.spec.height)->capture_default_str();
  synth->add_option("--frames", synth_opt.spec.frame_count)
      ->capture_default_str();
  synth->add_option("--amplitude", synth_opt.spec.amplitude,
                    "Noise sigma, pan px/frame or zoom %/frame")
      ->capture_default_str();
  synth->add_option("--seed", synth_opt.spec.seed)->capture_default_str();
  synth->add_option("-o,--output", synth_opt.output,
                    "Output .y4m (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    // Flags are validated up front; no file is touched before this point.
    if (*analyze) FinalizeAnalysisOptions(analyze_opt, err);
    if (*plan) FinalizeAnalysisOptions(plan_opt, err);
    if (*quality) {
      ValidateInputOptions(quality_opt.ref, quality_opt.raw);
      ValidateInputOptions(quality_opt.dist, quality_opt.raw);
    }
    if (*synth) {
      synth_opt.spec.kind = *ParseSynthKind(synth_opt.kind);
      try {
        synth_opt.spec.Validate();
      } catch (const InvalidArgument& e) {
        throw UsageError(e.what());
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*analyze) CmdAnalyze(analyze_opt, out, err);
    if (*plan) CmdPlan(plan_opt, out, err);
    if (*quality) CmdQuality(quality_opt, out, err);
    if (*bdrate) CmdBdRate(base_csv, test_csv, out);
    if (*synth) CmdSynth(synth_opt, out, err);
  } catch (const PlanValidationError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace gfadapt::cli
