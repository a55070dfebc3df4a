#include "fixtures.hpp"

#include <algorithm>
#include <cmath>

namespace leuko::testing {

Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 360.0) / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = v - c;
  const auto q = [m](double ch) { return static_cast<std::uint8_t>(std::lround(std::clamp(ch + m, 0.0, 1.0) * 255.0)); };
  return {q(r), q(g), q(b)};
}

RasterImage blank(int width, int height, Rgb fill) { return RasterImage(width, height, fill); }

BinaryMask filled_disc(int width, int height, double cx, double cy, double r) {
  BinaryMask m(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) m.set(x, y);
    }
  }
  return m;
}

BinaryMask filled_ellipse(int width, int height, const shapes::EllipseParams& e) {
  BinaryMask m(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (shapes::inside_ellipse(e, {static_cast<double>(x), static_cast<double>(y)})) m.set(x, y);
    }
  }
  return m;
}

BinaryMask boundary(const BinaryMask& filled) {
  BinaryMask out(filled.width(), filled.height());
  for (int y = 0; y < filled.height(); ++y) {
    for (int x = 0; x < filled.width(); ++x) {
      if (!filled.test(x, y)) continue;
      if (!filled.test_safe(x + 1, y) || !filled.test_safe(x - 1, y) || !filled.test_safe(x, y + 1) ||
          !filled.test_safe(x, y - 1)) {
        out.set(x, y);
      }
    }
  }
  return out;
}

BinaryMask ellipse_outline(int width, int height, const shapes::EllipseParams& e) {
  return boundary(filled_ellipse(width, height, e));
}

void erase_near(BinaryMask& m, double x, double y, double radius) {
  for (int yy = 0; yy < m.height(); ++yy) {
    for (int xx = 0; xx < m.width(); ++xx) {
      if ((xx - x) * (xx - x) + (yy - y) * (yy - y) <= radius * radius) m.set(xx, yy, false);
    }
  }
}

Rgb cytoplasm_color() { return hsv_to_rgb(290.0, 0.5, 0.8); }
Rgb nucleus_color() { return hsv_to_rgb(240.0, 0.7, 0.5); }
Rgb granule_color() { return hsv_to_rgb(325.0, 0.7, 0.6); }
Rgb rbc_color() { return hsv_to_rgb(5.0, 0.6, 0.85); }

RasterImage render_smear(const SmearSpec& spec) {
  RasterImage img = blank(spec.width, spec.height);
  const auto paint = [&](const BinaryMask& m, Rgb c) {
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (m.test(x, y)) img(x, y) = c;
      }
    }
  };
  for (const shapes::Point2& p : spec.rbcs) paint(filled_disc(spec.width, spec.height, p.x, p.y, spec.rbc_radius), rbc_color());
  for (const CellSpec& c : spec.cells) {
    paint(filled_disc(spec.width, spec.height, c.cx, c.cy, c.radius), cytoplasm_color());
    const double rn = c.radius * std::sqrt(c.nucleus_ratio);
    const BinaryMask nucleus = filled_disc(spec.width, spec.height, c.cx, c.cy, rn);
    paint(nucleus, nucleus_color());
    if (c.granule_ratio <= 0.0) continue;
    // Ordered dither spreads granules evenly at the requested density.
    const int levels = 97;
    const int cut = static_cast<int>(std::lround(c.granule_ratio * levels));
    for (int y = 0; y < img.height(); ++y) {
      for (int x = 0; x < img.width(); ++x) {
        if (nucleus.test(x, y) && (x * 37 + y * 61) % levels < cut) img(x, y) = granule_color();
      }
    }
  }
  return img;
}

SmearSpec single_cell(double radius, double nucleus_ratio, double granule_ratio, int size) {
  SmearSpec s;
  s.width = size;
  s.height = size;
  s.cells.push_back({size / 2.0, size / 2.0, radius, nucleus_ratio, granule_ratio});
  s.rbcs = {{16.0, 16.0}, {size - 17.0, size - 17.0}};
  s.rbc_radius = 13.0;
  return s;
}

GrayImage random_gray(std::mt19937_64& rng, int width, int height, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  GrayImage g(width, height, std::uint8_t{0});
  for (auto& v : g.data()) v = static_cast<std::uint8_t>(dist(rng));
  return g;
}

std::vector<GrayImage> structured_grays() {
  std::vector<GrayImage> out;
  const int n = 48;
  GrayImage step(n, n, std::uint8_t{0});
  for (int y = 0; y < n; ++y) {
    for (int x = n / 2; x < n; ++x) step(x, y) = 200;
  }
  out.push_back(step);
  GrayImage disc(n, n, std::uint8_t{20});
  const BinaryMask d = filled_disc(n, n, 24, 24, 12);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (d.test(x, y)) disc(x, y) = 230;
    }
  }
  out.push_back(disc);
  GrayImage ramp(n, n, std::uint8_t{0});
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) ramp(x, y) = static_cast<std::uint8_t>(x * 5);
  }
  out.push_back(ramp);
  GrayImage checker(n, n, std::uint8_t{0});
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) checker(x, y) = ((x / 8 + y / 8) % 2) ? 255 : 0;
  }
  out.push_back(checker);
  GrayImage diagonal(n, n, std::uint8_t{0});
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) diagonal(x, y) = x + y > n ? 180 : 40;
  }
  out.push_back(diagonal);
  return out;
}

double disc_diameter_um(double radius_px, double px_per_um2, double pi) {
  const double area_um2 = pi * radius_px * radius_px / px_per_um2;
  return 2.0 * std::sqrt(area_um2 / pi);
}

}  // namespace leuko::testing
