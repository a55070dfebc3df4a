#include <algorithm>
#include <array>
#include <stdexcept>

#include "leuko/raster.hpp"
#include "leuko/shapes.hpp"

namespace leuko::shapes {

namespace {

// Clockwise from west, image coordinates (y grows downward).
constexpr std::array<Pixel, 8> kRing = {{{-1, 0}, {-1, -1}, {0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}}};

int ring_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i) {
    if (kRing[static_cast<std::size_t>(i)].x == dx && kRing[static_cast<std::size_t>(i)].y == dy) return i;
  }
  return -1;
}

std::vector<Pixel> moore_trace(const BinaryMask& comp, Pixel start) {
  std::vector<Pixel> points{start};
  Pixel cur = start;
  int back = 0;  // west of the topmost-leftmost pixel is always background
  int first_dir = -1;
  const std::size_t guard = 4 * comp.size() + 8;
  while (points.size() < guard) {
    int found = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      const Pixel n{cur.x + kRing[static_cast<std::size_t>(d)].x, cur.y + kRing[static_cast<std::size_t>(d)].y};
      if (comp.test_safe(n.x, n.y)) {
        found = d;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    if (cur == start && first_dir >= 0 && found == first_dir) break;
    if (first_dir < 0) first_dir = found;
    const Pixel next{cur.x + kRing[static_cast<std::size_t>(found)].x, cur.y + kRing[static_cast<std::size_t>(found)].y};
    const auto& pb = kRing[static_cast<std::size_t>((found + 7) % 8)];
    const Pixel prev{cur.x + pb.x, cur.y + pb.y};
    back = ring_index(prev.x - next.x, prev.y - next.y);
    cur = next;
    points.push_back(cur);
  }
  if (points.size() > 1 && points.back() == start) points.pop_back();
  return points;
}

}  // namespace

std::vector<Contour> trace_contours(const BinaryMask& edges) {
  const int w = edges.width();
  const int h = edges.height();
  std::vector<Contour> out;
  BinaryMask seen(w, h);
  std::vector<Pixel> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!edges.test(x, y) || seen.test(x, y)) continue;
      Contour c;
      stack.assign(1, {x, y});
      seen.set(x, y);
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        c.pixels.push_back(p);
        for (const Pixel& o : kRing) {
          const int nx = p.x + o.x;
          const int ny = p.y + o.y;
          if (edges.test_safe(nx, ny) && !seen.test(nx, ny)) {
            seen.set(nx, ny);
            stack.push_back({nx, ny});
          }
        }
      }
      std::sort(c.pixels.begin(), c.pixels.end());
      c.bbox = {x, y, x, y};
      for (const Pixel& p : c.pixels) {
        c.bbox.min_x = std::min(c.bbox.min_x, p.x);
        c.bbox.max_x = std::max(c.bbox.max_x, p.x);
        c.bbox.min_y = std::min(c.bbox.min_y, p.y);
        c.bbox.max_y = std::max(c.bbox.max_y, p.y);
      }

      // Local copy with a one-pixel margin for tracing and the enclosure test.
      const int lw = c.bbox.width() + 3;
      const int lh = c.bbox.height() + 3;
      BinaryMask local(lw, lh);
      for (const Pixel& p : c.pixels) local.set(p.x - c.bbox.min_x + 1, p.y - c.bbox.min_y + 1);
      c.points = moore_trace(local, {x - c.bbox.min_x + 1, y - c.bbox.min_y + 1});
      for (Pixel& p : c.points) {
        p.x += c.bbox.min_x - 1;
        p.y += c.bbox.min_y - 1;
      }
      c.closed = raster::fill_holes(local).count() > c.pixels.size();
      out.push_back(std::move(c));
    }
  }
  return out;
}

bool circle_test(const Contour& contour, double tolerance_pct) {
  if (!contour.closed) throw std::invalid_argument("circle test needs a closed contour");
  if (!(tolerance_pct >= 0.0 && tolerance_pct < 100.0)) {
    throw std::invalid_argument("circle tolerance must lie in [0, 100)");
  }
  const double height = contour.height();
  if (height <= 0.0) return false;
  const double t = tolerance_pct / 100.0;
  // Work in doubled coordinates so the bbox center stays integral and the
  // verdict is exactly invariant under integer rescaling.
  const long sx = static_cast<long>(contour.bbox.min_x) + contour.bbox.max_x;
  const long sy = static_cast<long>(contour.bbox.min_y) + contour.bbox.max_y;
  const double h2 = height * height;
  const double lo = (1.0 - t) * (1.0 - t);
  const double hi = (1.0 + t) * (1.0 + t);
  for (const Pixel& p : contour.points) {
    const double dx = static_cast<double>(2L * p.x - sx);
    const double dy = static_cast<double>(2L * p.y - sy);
    const double q = (dx * dx + dy * dy) / h2;  // (2r / H)^2
    if (q < lo || q > hi) return false;
  }
  return true;
}

BinaryMask thin(const BinaryMask& mask) {
  BinaryMask out = mask;
  const int w = out.width();
  const int h = out.height();
  // Counter-clockwise from east: x1..x8.
  constexpr std::array<Pixel, 8> ccw = {{{1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}}};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!out.test(x, y)) continue;
        std::array<int, 9> nb{};
        int count = 0;
        for (std::size_t k = 0; k < 8; ++k) {
          nb[k] = out.test_safe(x + ccw[k].x, y + ccw[k].y) ? 1 : 0;
          count += nb[k];
        }
        if (count < 2) continue;
        nb[8] = nb[0];
        // Yokoi 8-connectivity number on the complement.
        int yokoi = 0;
        for (std::size_t k = 0; k < 8; k += 2) {
          const int a = 1 - nb[k];
          const int b = 1 - nb[k + 1];
          const int c = 1 - nb[(k + 2) % 8];
          yokoi += a - a * b * c;
        }
        if (yokoi == 1) {
          out.set(x, y, false);
          changed = true;
        }
      }
    }
  }
  return out;
}

}  // namespace leuko::shapes
