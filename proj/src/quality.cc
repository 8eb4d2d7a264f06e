#include "gfadapt/quality.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "gfadapt/error.h"

namespace gfadapt {
namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);

void CheckSameSize(const FramePlane& a, const FramePlane& b) {
  if (!a.same_size(b)) {
    throw InvalidArgument(fmt::format("frame size mismatch: {}x{} vs {}x{}",
                                      a.width(), a.height(), b.width(),
                                      b.height()));
  }
}

std::array<double, kSsimWindow> GaussianTaps() {
  std::array<double, kSsimWindow> taps{};
  double sum = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - kSsimWindow / 2;
    taps[size_t(i)] = std::exp(-(d * d) / (2 * kSsimSigma * kSsimSigma));
    sum += taps[size_t(i)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

// Valid-region separable filter of `values` (width x height), output
// (width - 10) x (height - 10).
std::vector<double> FilterValid(const std::vector<double>& values, int width,
                                int height,
                                const std::array<double, kSsimWindow>& taps) {
  const int out_w = width - kSsimWindow + 1;
  const int out_h = height - kSsimWindow + 1;
  std::vector<double> horizontal(size_t(out_w) * size_t(height));
  for (int y = 0; y < height; ++y) {
    const double* row = values.data() + size_t(y) * size_t(width);
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += taps[size_t(k)] * row[x + k];
      horizontal[size_t(y) * size_t(out_w) + size_t(x)] = acc;
    }
  }
  std::vector<double> out(size_t(out_w) * size_t(out_h));
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) {
        acc += taps[size_t(k)] *
               horizontal[size_t(y + k) * size_t(out_w) + size_t(x)];
      }
      out[size_t(y) * size_t(out_w) + size_t(x)] = acc;
    }
  }
  return out;
}

// Least-squares cubic fit of log10(rate) against quality, normalized to
// t = (q - center) / scale for conditioning.
struct LogRateFit {
  double center = 0.0;
  double scale = 1.0;
  Eigen::Vector4d coeffs = Eigen::Vector4d::Zero();

  // Mean of the fitted polynomial over [lo, hi] in quality units.
  double MeanOver(double lo, double hi) const {
    const double t0 = (lo - center) / scale;
    const double t1 = (hi - center) / scale;
    auto antiderivative = [this](double t) {
      return t * (coeffs[0] +
                  t * (coeffs[1] / 2 + t * (coeffs[2] / 3 + t * coeffs[3] / 4)));
    };
    return (antiderivative(t1) - antiderivative(t0)) / (t1 - t0);
  }
};

LogRateFit FitLogRate(const RdCurve& curve) {
  const auto& pts = curve.points();
  const auto [lo, hi] = std::minmax_element(
      pts.begin(), pts.end(),
      [](const RdPoint& a, const RdPoint& b) { return a.quality < b.quality; });
  LogRateFit fit;
  fit.center = (lo->quality + hi->quality) / 2;
  fit.scale = (hi->quality - lo->quality) / 2;

  Eigen::MatrixXd design(Eigen::Index(pts.size()), 4);
  Eigen::VectorXd target(Eigen::Index(pts.size()));
  for (size_t i = 0; i < pts.size(); ++i) {
    const double t = (pts[i].quality - fit.center) / fit.scale;
    const auto row = Eigen::Index(i);
    design(row, 0) = 1.0;
    design(row, 1) = t;
    design(row, 2) = t * t;
    design(row, 3) = t * t * t;
    target(row) = std::log10(pts[i].bitrate);
  }
  fit.coeffs = design.colPivHouseholderQr().solve(target);
  return fit;
}

void RequireDistinctQualities(const RdCurve& curve, const char* which) {
  const auto& pts = curve.points();
  for (size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].quality == pts[i - 1].quality) {
      throw InvalidArgument(fmt::format(
          "{} curve repeats quality {}; cubic fit is degenerate", which,
          pts[i].quality));
    }
  }
}

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ParseDouble(std::string_view text, double& value) {
  text = Trim(text);
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return !text.empty() && ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

double Psnr(const FramePlane& a, const FramePlane& b) {
  CheckSameSize(a, b);
  uint64_t sse = 0;
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (size_t i = 0; i < sa.size(); ++i) {
    const int d = int(sa[i]) - int(sb[i]);
    sse += uint64_t(d * d);
  }
  if (sse == 0) return kPsnrCapDb;
  const double mse = double(sse) / double(sa.size());
  return std::min(kPsnrCapDb, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double Ssim(const FramePlane& a, const FramePlane& b) {
  CheckSameSize(a, b);
  if (a.width() < kSsimWindow || a.height() < kSsimWindow) {
    throw InvalidArgument(fmt::format("frame {}x{} smaller than SSIM window",
                                      a.width(), a.height()));
  }
  const int w = a.width();
  const int h = a.height();
  const size_t n = size_t(w) * size_t(h);
  std::vector<double> va(n), vb(n), aa(n), bb(n), ab(n);
  const auto sa = a.samples();
  const auto sb = b.samples();
  for (size_t i = 0; i < n; ++i) {
    va[i] = sa[i];
    vb[i] = sb[i];
    aa[i] = va[i] * va[i];
    bb[i] = vb[i] * vb[i];
    ab[i] = va[i] * vb[i];
  }
  const auto taps = GaussianTaps();
  const auto mu_a = FilterValid(va, w, h, taps);
  const auto mu_b = FilterValid(vb, w, h, taps);
  const auto e_aa = FilterValid(aa, w, h, taps);
  const auto e_bb = FilterValid(bb, w, h, taps);
  const auto e_ab = FilterValid(ab, w, h, taps);

  double total = 0.0;
  for (size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i];
    const double mb = mu_b[i];
    const double var_a = e_aa[i] - ma * ma;
    const double var_b = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    total += ((2 * ma * mb + kSsimC1) * (2 * cov + kSsimC2)) /
             ((ma * ma + mb * mb + kSsimC1) * (var_a + var_b + kSsimC2));
  }
  return total / double(mu_a.size());
}

QualityReport SequenceQuality(const VideoSequence& ref,
                              const VideoSequence& dist) {
  if (ref.size() != dist.size()) {
    throw InvalidArgument(fmt::format("frame count mismatch: {} vs {}",
                                      ref.size(), dist.size()));
  }
  QualityReport report;
  for (size_t i = 0; i < ref.size(); ++i) {
    report.psnr.push_back(Psnr(ref.frame(i), dist.frame(i)));
    report.ssim.push_back(Ssim(ref.frame(i), dist.frame(i)));
  }
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  for (size_t i = 0; i < ref.size(); ++i) {
    psnr_sum += report.psnr[i];
    ssim_sum += report.ssim[i];
  }
  report.average_psnr = psnr_sum / double(ref.size());
  report.average_ssim = ssim_sum / double(ref.size());
  return report;
}

RdCurve::RdCurve(std::vector<RdPoint> points) : points_(std::move(points)) {
  if (points_.size() < 4) {
    throw InvalidArgument(fmt::format(
        "RD curve needs at least 4 points, got {}", points_.size()));
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].bitrate > 0.0) || !std::isfinite(points_[i].bitrate) ||
        !std::isfinite(points_[i].quality)) {
      throw InvalidArgument(
          fmt::format("RD point {} has invalid bitrate/quality", i));
    }
    if (i > 0 && !(points_[i].bitrate > points_[i - 1].bitrate)) {
      throw InvalidArgument("RD curve bitrates must be strictly increasing");
    }
    if (i > 0 && points_[i].quality < points_[i - 1].quality) {
      throw InvalidArgument("RD curve quality must be non-decreasing");
    }
  }
}

RdCurve LoadRdCurveCsv(std::istream& in) {
  std::vector<RdPoint> points;
  std::string line;
  int64_t offset = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    const int64_t line_start = offset;
    offset += int64_t(line.size()) + 1;
    const std::string_view text = Trim(line);
    if (text.empty()) continue;
    const size_t comma = text.find(',');
    RdPoint p;
    const bool ok = comma != std::string_view::npos &&
                    ParseDouble(text.substr(0, comma), p.bitrate) &&
                    ParseDouble(text.substr(comma + 1), p.quality);
    if (!ok) {
      if (first_content_line) {
        first_content_line = false;
        continue;
      }
      throw ParseError(fmt::format("bad RD row '{}'", text), line_start);
    }
    first_content_line = false;
    points.push_back(p);
  }
  return RdCurve(std::move(points));
}

RdCurve LoadRdCurveCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  return LoadRdCurveCsv(in);
}

double BdRate(const RdCurve& base, const RdCurve& test) {
  RequireDistinctQualities(base, "base");
  RequireDistinctQualities(test, "test");
  const auto& bp = base.points();
  const auto& tp = test.points();
  const double lo = std::max(bp.front().quality, tp.front().quality);
  const double hi = std::min(bp.back().quality, tp.back().quality);
  if (!(hi > lo)) {
    throw InvalidArgument("RD curves have no overlapping quality interval");
  }
  const LogRateFit base_fit = FitLogRate(base);
  const LogRateFit test_fit = FitLogRate(test);
  const double avg_diff = test_fit.MeanOver(lo, hi) - base_fit.MeanOver(lo, hi);
  return (std::pow(10.0, avg_diff) - 1.0) * 100.0;
}

}  // namespace gfadapt
