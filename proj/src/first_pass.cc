#include "gfadapt/first_pass.h"

#include <array>
#include <cmath>
#include <cstdlib>

#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

bool CandidateInBounds(const FramePlane& ref, int x, int y, int block_size,
                       MotionVector mv) {
  const int rx = x + mv.dx;
  const int ry = y + mv.dy;
  return rx >= 0 && ry >= 0 && rx + block_size <= ref.width() &&
         ry + block_size <= ref.height();
}

bool WithinRange(MotionVector mv, int range) {
  return std::abs(mv.dx) <= range && std::abs(mv.dy) <= range;
}

BlockMatch ExhaustiveSearch(const FramePlane& cur, const FramePlane& ref,
                            int x, int y, const SearchConfig& cfg) {
  BlockMatch match;
  match.zero_mv_sse = BlockSse(cur, ref, x, y, cfg.block_size, {});
  match.best_sse = match.zero_mv_sse;
  const int r = cfg.search_range;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      const MotionVector mv{dx, dy};
      if (mv.is_zero() || !CandidateInBounds(ref, x, y, cfg.block_size, mv)) {
        continue;
      }
      const uint64_t sse = BlockSse(cur, ref, x, y, cfg.block_size, mv);
      if (IsBetterCandidate(sse, mv, match.best_sse, match.mv)) {
        match.best_sse = sse;
        match.mv = mv;
      }
    }
  }
  return match;
}

// Large diamond steps until the centre wins, then one small-diamond
// refinement. Starts from (0, 0), so a zero-SSE origin is never displaced.
BlockMatch DiamondSearch(const FramePlane& cur, const FramePlane& ref, int x,
                         int y, const SearchConfig& cfg) {
  static constexpr std::array<MotionVector, 8> kLarge = {{
      {0, -2}, {-1, -1}, {1, -1}, {-2, 0}, {2, 0}, {-1, 1}, {1, 1}, {0, 2}}};
  static constexpr std::array<MotionVector, 4> kSmall = {{
      {0, -1}, {-1, 0}, {1, 0}, {0, 1}}};

  BlockMatch match;
  match.zero_mv_sse = BlockSse(cur, ref, x, y, cfg.block_size, {});
  match.best_sse = match.zero_mv_sse;

  auto try_step = [&](MotionVector center, MotionVector step) {
    const MotionVector mv{center.dx + step.dx, center.dy + step.dy};
    if (!WithinRange(mv, cfg.search_range) ||
        !CandidateInBounds(ref, x, y, cfg.block_size, mv)) {
      return;
    }
    const uint64_t sse = BlockSse(cur, ref, x, y, cfg.block_size, mv);
    if (IsBetterCandidate(sse, mv, match.best_sse, match.mv)) {
      match.best_sse = sse;
      match.mv = mv;
    }
  };

  // Each accepted move strictly improves the ordering, so this terminates;
  // the cap bounds pathological inputs.
  const int max_iterations = 4 * cfg.search_range + 4;
  for (int i = 0; i < max_iterations && match.best_sse != 0; ++i) {
    const MotionVector center = match.mv;
    for (const MotionVector& step : kLarge) try_step(center, step);
    if (match.mv == center) break;
  }
  const MotionVector center = match.mv;
  for (const MotionVector& step : kSmall) try_step(center, step);
  return match;
}

// Floor of sum((s - mean)^2), computed exactly in integers.
uint64_t IntraProxySse(const FramePlane& frame, int x, int y,
                       int block_size) {
  uint64_t sum = 0;
  uint64_t sum_sq = 0;
  for (int j = 0; j < block_size; ++j) {
    const auto row = frame.row(y + j).subspan(size_t(x), size_t(block_size));
    for (const uint8_t s : row) {
      sum += s;
      sum_sq += uint64_t{s} * s;
    }
  }
  const uint64_t n = uint64_t(block_size) * uint64_t(block_size);
  return (n * sum_sq - sum * sum) / n;
}

}  // namespace

void SearchConfig::Validate() const {
  if (block_size != 8 && block_size != 16 && block_size != 32) {
    throw InvalidArgument(
        fmt::format("block size {} not in {{8, 16, 32}}", block_size));
  }
  if (search_range < 1) {
    throw InvalidArgument(
        fmt::format("search range {} must be >= 1", search_range));
  }
}

bool IsBetterCandidate(uint64_t sse_a, MotionVector a, uint64_t sse_b,
                       MotionVector b) {
  if (sse_a != sse_b) return sse_a < sse_b;
  const int len_a = std::abs(a.dx) + std::abs(a.dy);
  const int len_b = std::abs(b.dx) + std::abs(b.dy);
  if (len_a != len_b) return len_a < len_b;
  if (a.dy != b.dy) return a.dy < b.dy;
  return a.dx < b.dx;
}

uint64_t BlockSse(const FramePlane& cur, const FramePlane& ref, int x, int y,
                  int block_size, MotionVector mv) {
  uint64_t sse = 0;
  for (int j = 0; j < block_size; ++j) {
    const auto c = cur.row(y + j).subspan(size_t(x), size_t(block_size));
    const auto r =
        ref.row(y + j + mv.dy).subspan(size_t(x + mv.dx), size_t(block_size));
    uint32_t row_sse = 0;
    for (int i = 0; i < block_size; ++i) {
      const int d = int(c[size_t(i)]) - int(r[size_t(i)]);
      row_sse += uint32_t(d * d);
    }
    sse += row_sse;
  }
  return sse;
}

BlockMatch BlockSearch(const FramePlane& cur, const FramePlane& ref,
                       int block_col, int block_row, const SearchConfig& cfg) {
  const int x = block_col * cfg.block_size;
  const int y = block_row * cfg.block_size;
  if (cfg.search_kind == SearchKind::kDiamond) {
    return DiamondSearch(cur, ref, x, y, cfg);
  }
  return ExhaustiveSearch(cur, ref, x, y, cfg);
}

std::vector<BlockStats> AnalyzeBlocks(const FramePlane& cur,
                                      const FramePlane& prev,
                                      const SearchConfig& cfg) {
  cfg.Validate();
  if (!cur.same_size(prev)) {
    throw InvalidArgument(fmt::format(
        "frame size mismatch: {}x{} vs {}x{}", cur.width(), cur.height(),
        prev.width(), prev.height()));
  }
  const FramePlane padded_cur = PadToMultiple(cur, cfg.block_size);
  const FramePlane padded_prev = PadToMultiple(prev, cfg.block_size);
  const int cols = padded_cur.width() / cfg.block_size;
  const int rows = padded_cur.height() / cfg.block_size;

  std::vector<BlockStats> blocks;
  blocks.reserve(size_t(cols) * size_t(rows));
  for (int row = 0; row < rows; ++row) {
    for (int col = 0; col < cols; ++col) {
      const BlockMatch m = BlockSearch(padded_cur, padded_prev, col, row, cfg);
      BlockStats b;
      b.block_col = col;
      b.block_row = row;
      b.best_mv = m.mv;
      b.best_sse = m.best_sse;
      b.zero_mv_sse = m.zero_mv_sse;
      b.intra_proxy_sse = IntraProxySse(padded_cur, col * cfg.block_size,
                                        row * cfg.block_size, cfg.block_size);
      // Ties go to inter so identical flat content counts as still.
      b.is_inter = b.best_sse <= b.intra_proxy_sse;
      blocks.push_back(b);
    }
  }
  return blocks;
}

FrameFirstPassStats SummarizeBlocks(const std::vector<BlockStats>& blocks,
                                    int frame_index) {
  FrameFirstPassStats stats;
  stats.frame_index = frame_index;
  stats.block_count = int(blocks.size());
  if (blocks.empty()) return stats;

  int zero_motion = 0;
  uint64_t zero_mv_total = 0;
  for (const BlockStats& b : blocks) {
    stats.frame_sse += b.best_sse;
    zero_mv_total += b.zero_mv_sse;
    if (b.is_inter) {
      ++stats.inter_count;
      if (b.best_mv.is_zero()) ++zero_motion;
    }
  }
  stats.pcnt_zero_motion =
      stats.inter_count == 0 ? 0.0 : double(zero_motion) / stats.inter_count;

  const double n = double(blocks.size());
  const double mean = double(zero_mv_total) / n;
  double sum_sq_dev = 0.0;
  for (const BlockStats& b : blocks) {
    const double d = double(b.zero_mv_sse) - mean;
    sum_sq_dev += d * d;
  }
  stats.zero_mv_sse_stdev = std::sqrt(sum_sq_dev / n);
  return stats;
}

FrameFirstPassStats AnalyzeFrame(const FramePlane& cur, const FramePlane& prev,
                                 const SearchConfig& cfg, int frame_index) {
  return SummarizeBlocks(AnalyzeBlocks(cur, prev, cfg), frame_index);
}

}  // namespace gfadapt
