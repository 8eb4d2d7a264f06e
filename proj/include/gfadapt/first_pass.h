#ifndef GFADAPT_FIRST_PASS_H_
#define GFADAPT_FIRST_PASS_H_

#include <cstdint>
#include <vector>

#include "gfadapt/frame.h"

namespace gfadapt {

// Integer-pixel displacement into the reference frame: the block at (x, y)
// in the current frame is predicted by the reference block at
// (x + dx, y + dy). Content that moved right by 2 px therefore yields
// dx = -2.
struct MotionVector {
  int dx = 0;
  int dy = 0;

  bool is_zero() const { return dx == 0 && dy == 0; }
  friend bool operator==(const MotionVector&, const MotionVector&) = default;
};

enum class SearchKind { kExhaustive, kDiamond };

struct SearchConfig {
  int block_size = 16;
  int search_range = 8;
  SearchKind search_kind = SearchKind::kExhaustive;

  // Throws InvalidArgument unless block_size is 8, 16 or 32 and
  // search_range >= 1.
  void Validate() const;
};

// Result of matching one block.
struct BlockMatch {
  MotionVector mv;
  uint64_t best_sse = 0;
  uint64_t zero_mv_sse = 0;
};

struct BlockStats {
  int block_col = 0;
  int block_row = 0;
  MotionVector best_mv;
  uint64_t best_sse = 0;
  uint64_t zero_mv_sse = 0;
  // SSE of the block against its own mean, standing in for intra error.
  uint64_t intra_proxy_sse = 0;
  bool is_inter = false;
};

struct FrameFirstPassStats {
  int frame_index = 0;
  double pcnt_zero_motion = 0.0;
  uint64_t frame_sse = 0;
  double zero_mv_sse_stdev = 0.0;
  int block_count = 0;
  int inter_count = 0;
};

// True when candidate (sse_a, a) beats (sse_b, b): lower SSE, then smaller
// |dx|+|dy|, then smaller dy, then smaller dx.
bool IsBetterCandidate(uint64_t sse_a, MotionVector a, uint64_t sse_b,
                       MotionVector b);

// SSE between the block_size x block_size block of `cur` at (x, y) and the
// block of `ref` at (x + mv.dx, y + mv.dy). Both positions must be inside
// the planes.
uint64_t BlockSse(const FramePlane& cur, const FramePlane& ref, int x, int y,
                  int block_size, MotionVector mv);

// Integer-pel motion search for block (block_col, block_row). `cur` and
// `ref` must already be padded to a multiple of cfg.block_size; candidates
// whose reference block would leave the plane are skipped.
BlockMatch BlockSearch(const FramePlane& cur, const FramePlane& ref,
                       int block_col, int block_row, const SearchConfig& cfg);

// Per-block statistics for `cur` predicted from `prev`. Unaligned frames
// are edge-replicated up to the block grid first.
std::vector<BlockStats> AnalyzeBlocks(const FramePlane& cur,
                                      const FramePlane& prev,
                                      const SearchConfig& cfg);

// Frame-level aggregate of AnalyzeBlocks.
//   pcnt_zero_motion  = zero-MV inter blocks / inter blocks (0 if none)
//   frame_sse         = sum of best_sse over all blocks
//   zero_mv_sse_stdev = population stdev of zero_mv_sse over all blocks
FrameFirstPassStats AnalyzeFrame(const FramePlane& cur, const FramePlane& prev,
                                 const SearchConfig& cfg, int frame_index = 1);

FrameFirstPassStats SummarizeBlocks(const std::vector<BlockStats>& blocks,
                                    int frame_index);

}  // namespace gfadapt

#endif  // GFADAPT_FIRST_PASS_H_
