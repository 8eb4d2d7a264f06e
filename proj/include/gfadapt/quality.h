#ifndef GFADAPT_QUALITY_H_
#define GFADAPT_QUALITY_H_

#include <istream>
#include <string>
#include <vector>

#include "gfadapt/frame.h"

namespace gfadapt {

// Returned for identical frames, and the ceiling for all PSNR values, so
// per-frame averages stay finite.
inline constexpr double kPsnrCapDb = 100.0;

// Luma PSNR, 10 * log10(255^2 / MSE), capped at kPsnrCapDb.
double Psnr(const FramePlane& a, const FramePlane& b);

// Mean SSIM over every 11x11 window fully inside the frame (stride 1),
// Gaussian weights sigma 1.5, K1 = 0.01, K2 = 0.03, L = 255.
double Ssim(const FramePlane& a, const FramePlane& b);

struct QualityReport {
  std::vector<double> psnr;
  std::vector<double> ssim;
  double average_psnr = 0.0;
  double average_ssim = 0.0;
};

// Per-frame metrics plus their arithmetic means.
QualityReport SequenceQuality(const VideoSequence& ref,
                              const VideoSequence& dist);

struct RdPoint {
  double bitrate = 0.0;  // kbps
  double quality = 0.0;  // PSNR dB or SSIM
};

// At least 4 points, bitrate strictly increasing, quality non-decreasing.
class RdCurve {
 public:
  explicit RdCurve(std::vector<RdPoint> points);

  const std::vector<RdPoint>& points() const { return points_; }

 private:
  std::vector<RdPoint> points_;
};

// `bitrate_kbps,quality` rows; a leading non-numeric header line and blank
// lines are ignored.
RdCurve LoadRdCurveCsv(std::istream& in);
RdCurve LoadRdCurveCsvFile(const std::string& path);

// Bjontegaard delta rate in percent: cubic least-squares fit of
// log10(bitrate) against quality for each curve, averaged difference over
// the overlapping quality interval, reported as (10^diff - 1) * 100.
// Negative values mean `test` needs less bitrate than `base`.
double BdRate(const RdCurve& base, const RdCurve& test);

}  // namespace gfadapt

#endif  // GFADAPT_QUALITY_H_
