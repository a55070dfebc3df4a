#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include <opencv2/core.hpp>
#include <opencv2/imgproc.hpp>

#include "leuko/pipeline.hpp"

namespace leuko::harness {

std::vector<Pixel> outline_pixels(const shapes::CellDetection& det, int width, int height) {
  std::set<Pixel> out;
  const auto add = [&](Pixel p) {
    if (p.x >= 0 && p.y >= 0 && p.x < width && p.y < height) out.insert(p);
  };
  if (det.kind == shapes::CellKind::circle && det.contour) {
    for (const Pixel& p : det.contour->points) add(p);
  } else {
    const shapes::EllipseParams& e = det.geometry;
    const double c = std::cos(e.rotation);
    const double s = std::sin(e.rotation);
    // Sub-pixel step along the outline keeps the raster 8-connected.
    const auto steps = static_cast<int>(std::ceil(4.0 * std::numbers::pi * std::max(e.a, 1.0)));
    for (int i = 0; i < steps; ++i) {
      const double t = 2.0 * std::numbers::pi * i / steps;
      const double u = e.a * std::cos(t);
      const double v = e.b * std::sin(t);
      add({static_cast<int>(std::lround(e.cx + c * u - s * v)), static_cast<int>(std::lround(e.cy + s * u + c * v))});
    }
  }
  return {out.begin(), out.end()};
}

RasterImage render_overlay(const RasterImage& img, std::span<const shapes::CellDetection> detections,
                           const fuzzy::Diagnosis& diagnosis, const BinaryMask* nucleus, const OverlayStyle& style) {
  RasterImage out = img;
  const int w = img.width();
  const int h = img.height();

  if (nucleus && nucleus->width() == w && nucleus->height() == h) {
    BinaryMask covered(w, h);
    for (const shapes::CellDetection& d : detections) covered = covered | shapes::detection_region(d, w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!covered.test(x, y) || !nucleus->test(x, y)) continue;
        Rgb& px = out(x, y);
        px.r = static_cast<std::uint8_t>((px.r + style.nucleus_tint.r + 1) / 2);
        px.g = static_cast<std::uint8_t>((px.g + style.nucleus_tint.g + 1) / 2);
        px.b = static_cast<std::uint8_t>((px.b + style.nucleus_tint.b + 1) / 2);
      }
    }
  }

  for (const shapes::CellDetection& d : detections) {
    for (const Pixel& p : outline_pixels(d, w, h)) out[p] = style.outline;
  }

  const int band = std::min(style.banner_height, h);
  if (band > 0) {
    cv::Mat banner(band, w, CV_8UC3, cv::Scalar(style.banner_fill.r, style.banner_fill.g, style.banner_fill.b));
    char text[96];
    if (diagnosis.wa) {
      std::snprintf(text, sizeof text, "WA=%.3f %s", *diagnosis.wa, std::string(fuzzy::to_string(diagnosis.label)).c_str());
    } else {
      std::snprintf(text, sizeof text, "WA=n/a %s", std::string(fuzzy::to_string(diagnosis.label)).c_str());
    }
    const double scale = std::max(0.3, band / 40.0);
    cv::putText(banner, text, cv::Point(3, std::max(1, band - band / 4)), cv::FONT_HERSHEY_SIMPLEX, scale,
                cv::Scalar(style.banner_text.r, style.banner_text.g, style.banner_text.b), 1, cv::LINE_8);
    for (int y = 0; y < band; ++y) {
      for (int x = 0; x < w; ++x) {
        const cv::Vec3b v = banner.at<cv::Vec3b>(y, x);
        out(x, y) = {v[0], v[1], v[2]};
      }
    }
  }
  return out;
}

}  // namespace leuko::harness
