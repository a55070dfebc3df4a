#include "leuko/raster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "leuko/error.hpp"

namespace leuko {

namespace {

template <typename Op>
BinaryMask combine(const BinaryMask& l, const BinaryMask& r, Op op) {
  if (!l.same_shape(r)) throw std::invalid_argument("mask dimensions differ");
  BinaryMask out(l.width(), l.height());
  for (std::size_t i = 0; i < l.size(); ++i) out.data()[i] = op(l.data()[i] != 0, r.data()[i] != 0) ? 1 : 0;
  return out;
}

}  // namespace

BinaryMask operator|(const BinaryMask& l, const BinaryMask& r) {
  return combine(l, r, [](bool a, bool b) { return a || b; });
}

BinaryMask operator&(const BinaryMask& l, const BinaryMask& r) {
  return combine(l, r, [](bool a, bool b) { return a && b; });
}

}  // namespace leuko

namespace leuko::raster {

Hsv to_hsv(Rgb c) noexcept {
  const double r = c.r / 255.0;
  const double g = c.g / 255.0;
  const double b = c.b / 255.0;
  const double hi = std::max({r, g, b});
  const double lo = std::min({r, g, b});
  const double delta = hi - lo;

  Hsv out;
  out.v = hi;
  out.s = hi > 0.0 ? delta / hi : 0.0;
  if (delta <= 0.0) return out;

  double h;
  if (hi == r) {
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (hi == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
  if (h >= 360.0) h -= 360.0;
  out.h = h;
  return out;
}

void ColorRange::validate() const {
  auto bad = [this](const std::string& what) {
    return std::invalid_argument("color range '" + name + "': " + what);
  };
  if (!(hue.min >= 0.0 && hue.min < 360.0 && hue.max >= 0.0 && hue.max < 360.0)) {
    throw bad("hue bounds must lie in [0, 360)");
  }
  for (const auto* iv : {&saturation, &value}) {
    if (!(iv->min >= 0.0 && iv->max <= 1.0)) throw bad("saturation/value bounds must lie in [0, 1]");
    if (iv->min > iv->max) throw bad("saturation/value min exceeds max");
  }
}

bool ColorRange::contains(const Hsv& c) const noexcept {
  const bool hue_ok = hue.min <= hue.max ? (c.h >= hue.min && c.h <= hue.max) : (c.h >= hue.min || c.h <= hue.max);
  return hue_ok && c.s >= saturation.min && c.s <= saturation.max && c.v >= value.min && c.v <= value.max;
}

ColorRange ColorRange::everything() {
  return {"everything", {0.0, std::nextafter(360.0, 0.0)}, {0.0, 1.0}, {0.0, 1.0}};
}

ColorRange giemsa_purple() { return {"giemsa-purple", {260.0, 320.0}, {0.15, 1.0}, {0.2, 1.0}}; }
ColorRange nucleus_dark_blue() { return {"nucleus-dark-blue", {210.0, 280.0}, {0.3, 1.0}, {0.1, 0.7}}; }
ColorRange granule_reddish_purple() { return {"granule-reddish-purple", {300.0, 350.0}, {0.2, 1.0}, {0.2, 0.9}}; }
ColorRange rbc_red() { return {"rbc-red", {350.5, 25.0}, {0.2, 1.0}, {0.3, 1.0}}; }

GrayImage to_grayscale(const RasterImage& img) {
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb c = img.data()[i];
    const double luma = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
    out.data()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(luma), 0L, 255L));
  }
  return out;
}

BinaryMask threshold(const GrayImage& gray, int a_th, bool a0, bool a1) {
  if (a_th <= 0 || a_th > 255) {
    throw std::invalid_argument("threshold must satisfy 0 < a_th <= 255, got " + std::to_string(a_th));
  }
  BinaryMask out(gray.width(), gray.height());
  for (std::size_t i = 0; i < gray.size(); ++i) out.data()[i] = (gray.data()[i] >= a_th ? a1 : a0) ? 1 : 0;
  return out;
}

BinaryMask threshold_region(const GrayImage& gray, const BinaryMask& region, int a_th, bool a0, bool a1) {
  if (!gray.same_shape(region)) throw std::invalid_argument("region mask dimensions differ from image");
  BinaryMask out = threshold(gray, a_th, a0, a1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (region.data()[i] == 0) out.data()[i] = a0 ? 1 : 0;
  }
  return out;
}

BinaryMask color_filter(const RasterImage& img, const ColorRange& range) {
  range.validate();
  BinaryMask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out.data()[i] = range.contains(to_hsv(img.data()[i])) ? 1 : 0;
  return out;
}

GrayImage to_gray(const BinaryMask& mask) {
  GrayImage out(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) out.data()[i] = mask.data()[i] ? 255 : 0;
  return out;
}

BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask outside(w, h);
  std::deque<Pixel> queue;
  auto seed = [&](int x, int y) {
    if (!mask.test(x, y) && !outside.test(x, y)) {
      outside.set(x, y);
      queue.push_back({x, y});
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  constexpr int dx[] = {1, -1, 0, 0};
  constexpr int dy[] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const Pixel p = queue.front();
    queue.pop_front();
    for (int k = 0; k < 4; ++k) {
      const int nx = p.x + dx[k];
      const int ny = p.y + dy[k];
      if (mask.contains(nx, ny)) seed(nx, ny);
    }
  }
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = outside.data()[i] ? 0 : 1;
  return out;
}

BinaryMask remove_small_components(const BinaryMask& mask, std::size_t min_pixels) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(w, h);
  BinaryMask seen(w, h);
  std::vector<Pixel> component;
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.test(x, y) || seen.test(x, y)) continue;
      component.clear();
      stack.assign(1, {x, y});
      seen.set(x, y);
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        component.push_back(p);
        for (int oy = -1; oy <= 1; ++oy) {
          for (int ox = -1; ox <= 1; ++ox) {
            const int nx = p.x + ox;
            const int ny = p.y + oy;
            if (mask.test_safe(nx, ny) && !seen.test(nx, ny)) {
              seen.set(nx, ny);
              stack.push_back({nx, ny});
            }
          }
        }
      }
      if (component.size() >= min_pixels) {
        for (const Pixel& p : component) out.set(p);
      }
    }
  }
  return out;
}

}  // namespace leuko::raster
