#include "leuko/edges.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace leuko::edges {

namespace {

struct Offset {
  int dx;
  int dy;
};

Offset offset_of(Direction d) noexcept {
  switch (d) {
    case Direction::deg0: return {1, 0};
    case Direction::deg45: return {1, 1};
    case Direction::deg90: return {0, 1};
    case Direction::deg135: return {-1, 1};
  }
  return {1, 0};
}

Direction quantize(double gx, double gy) noexcept {
  double deg = std::atan2(gy, gx) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 180.0;
  if (deg >= 180.0) deg -= 180.0;
  if (deg < 22.5 || deg >= 157.5) return Direction::deg0;
  if (deg < 67.5) return Direction::deg45;
  if (deg < 112.5) return Direction::deg90;
  return Direction::deg135;
}

}  // namespace

void CannyParams::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("canny sigma must be positive");
  if (!(low >= 0.0 && low < high)) throw std::invalid_argument("canny thresholds must satisfy 0 <= low < high");
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian sigma must be positive, got " + std::to_string(sigma));
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

RealImage gaussian_smooth(const GrayImage& gray, double sigma) {
  const std::vector<double> k = gaussian_kernel(sigma);
  const int radius = static_cast<int>(k.size() / 2);
  const int w = gray.width();
  const int h = gray.height();

  RealImage tmp(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += k[static_cast<std::size_t>(i + radius)] * gray.clamped(x + i, y);
      tmp(x, y) = acc;
    }
  }
  RealImage out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i) acc += k[static_cast<std::size_t>(i + radius)] * tmp.clamped(x, y + i);
      out(x, y) = acc;
    }
  }
  return out;
}

GradientField sobel_gradients(const RealImage& img) {
  const int w = img.width();
  const int h = img.height();
  GradientField f{RealImage(w, h), RealImage(w, h), Grid<Direction>(w, h)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      auto p = [&](int ox, int oy) { return img.clamped(x + ox, y + oy); };
      const double gx = (p(1, -1) + 2.0 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2.0 * p(-1, 0) + p(-1, 1));
      const double gy = (p(-1, 1) + 2.0 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2.0 * p(0, -1) + p(1, -1));
      f.magnitude(x, y) = std::hypot(gx, gy);
      f.angle(x, y) = std::atan2(gy, gx);
      f.direction(x, y) = quantize(gx, gy);
    }
  }
  return f;
}

RealImage non_maximum_suppression(const GradientField& field) {
  const int w = field.magnitude.width();
  const int h = field.magnitude.height();
  RealImage out(w, h, 0.0);
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      const double m = field.magnitude(x, y);
      if (m <= 0.0) continue;
      const Offset o = offset_of(field.direction(x, y));
      const double backward = field.magnitude(x - o.dx, y - o.dy);
      const double forward = field.magnitude(x + o.dx, y + o.dy);
      if (m > backward && m >= forward) out(x, y) = m;
    }
  }
  return out;
}

Grid<EdgeClass> double_threshold(const RealImage& suppressed, double low, double high) {
  Grid<EdgeClass> out(suppressed.width(), suppressed.height(), EdgeClass::none);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double m = suppressed.data()[i];
    if (m <= 0.0) continue;
    if (m >= high) {
      out.data()[i] = EdgeClass::strong;
    } else if (m >= low) {
      out.data()[i] = EdgeClass::weak;
    }
  }
  return out;
}

BinaryMask hysteresis(const Grid<EdgeClass>& classes) {
  const int w = classes.width();
  const int h = classes.height();
  BinaryMask kept(w, h);
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (classes(x, y) == EdgeClass::strong) {
        kept.set(x, y);
        stack.push_back({x, y});
      }
    }
  }
  while (!stack.empty()) {
    const Pixel p = stack.back();
    stack.pop_back();
    for (int oy = -1; oy <= 1; ++oy) {
      for (int ox = -1; ox <= 1; ++ox) {
        const int nx = p.x + ox;
        const int ny = p.y + oy;
        if (!classes.contains(nx, ny) || kept.test(nx, ny)) continue;
        if (classes(nx, ny) == EdgeClass::weak) {
          kept.set(nx, ny);
          stack.push_back({nx, ny});
        }
      }
    }
  }
  return kept;
}

BinaryMask canny(const GrayImage& gray, const CannyParams& params) {
  params.validate();
  const RealImage smooth = gaussian_smooth(gray, params.sigma);
  const GradientField field = sobel_gradients(smooth);
  const RealImage thin = non_maximum_suppression(field);
  return hysteresis(double_threshold(thin, params.low, params.high));
}

}  // namespace leuko::edges
