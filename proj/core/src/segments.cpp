#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "leuko/shapes.hpp"

namespace leuko::shapes {

namespace {

constexpr std::array<Pixel, 4> kFour = {{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
constexpr std::array<Pixel, 4> kDiag = {{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};

int neighbor_count(const BinaryMask& m, Pixel p) {
  int n = 0;
  for (int oy = -1; oy <= 1; ++oy) {
    for (int ox = -1; ox <= 1; ++ox) {
      if ((ox || oy) && m.test_safe(p.x + ox, p.y + oy)) ++n;
    }
  }
  return n;
}

// Orders the pixels of one junction-free component into a chain.
std::vector<Pixel> walk_chain(const BinaryMask& comp, const std::vector<Pixel>& pixels, bool& cyclic) {
  Pixel start = pixels.front();
  bool has_end = false;
  for (const Pixel& p : pixels) {
    if (neighbor_count(comp, p) <= 1) {
      start = p;
      has_end = true;
      break;
    }
  }
  BinaryMask visited(comp.width(), comp.height());
  std::vector<Pixel> chain{start};
  visited.set(start);
  Pixel cur = start;
  for (;;) {
    bool moved = false;
    for (const auto* ring : {&kFour, &kDiag}) {
      for (const Pixel& o : *ring) {
        const Pixel n{cur.x + o.x, cur.y + o.y};
        if (comp.test_safe(n.x, n.y) && !visited.test(n)) {
          visited.set(n);
          chain.push_back(n);
          cur = n;
          moved = true;
          break;
        }
      }
      if (moved) break;
    }
    if (!moved) break;
  }
  const Pixel last = chain.back();
  cyclic = !has_end && chain.size() > 2 && std::abs(last.x - start.x) <= 1 && std::abs(last.y - start.y) <= 1;
  return chain;
}

double turning_angle(Pixel prev, Pixel mid, Pixel next) {
  const double ax = mid.x - prev.x;
  const double ay = mid.y - prev.y;
  const double bx = next.x - mid.x;
  const double by = next.y - mid.y;
  const double cross = ax * by - ay * bx;
  const double dot = ax * bx + ay * by;
  return std::abs(std::atan2(cross, dot)) * 180.0 / std::numbers::pi;
}

// Local maxima of the turning angle above the corner threshold.
std::vector<std::size_t> find_corners(const std::vector<Pixel>& chain, bool cyclic, const SplitParams& p) {
  const std::size_t n = chain.size();
  const auto k = static_cast<std::size_t>(std::max(1, p.corner_half_window));
  if (n < 2 * k + 1) return {};
  std::vector<double> angle(n, 0.0);
  std::vector<char> hot(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!cyclic && (i < k || i + k >= n)) continue;
    const Pixel prev = chain[(i + n - k) % n];
    const Pixel next = chain[(i + k) % n];
    angle[i] = turning_angle(prev, chain[i], next);
    hot[i] = angle[i] > p.corner_angle_deg;
  }

  std::vector<std::size_t> corners;
  std::size_t begin = 0;
  if (cyclic) {
    // Start scanning right after a cold index so no run wraps around.
    std::size_t cold = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!hot[i]) {
        cold = i;
        break;
      }
    }
    if (cold == n) {
      corners.push_back(static_cast<std::size_t>(std::max_element(angle.begin(), angle.end()) - angle.begin()));
      return corners;
    }
    begin = cold;
  }
  std::size_t run_best = n;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t i = (begin + step) % n;
    if (hot[i]) {
      if (run_best == n || angle[i] > angle[run_best]) run_best = i;
    } else if (run_best != n) {
      corners.push_back(run_best);
      run_best = n;
    }
  }
  if (run_best != n) corners.push_back(run_best);
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  return corners;
}

void emit(std::vector<Pixel> piece, const SplitParams& p, std::vector<CurveSegment>& out) {
  if (piece.size() < 3) return;
  out.push_back(make_segment(std::move(piece), p.tangent_points));
}

void split_chain(const std::vector<Pixel>& chain, bool cyclic, const SplitParams& p, std::vector<CurveSegment>& out) {
  const std::vector<std::size_t> corners = find_corners(chain, cyclic, p);
  const std::size_t n = chain.size();
  if (corners.empty()) {
    emit(chain, p, out);
    return;
  }
  if (cyclic) {
    for (std::size_t c = 0; c < corners.size(); ++c) {
      const std::size_t from = corners[c];
      const std::size_t to = corners[(c + 1) % corners.size()];
      const std::size_t len = corners.size() == 1 ? n : (to + n - from) % n;
      std::vector<Pixel> piece;
      piece.reserve(len);
      for (std::size_t s = 0; s < len; ++s) piece.push_back(chain[(from + s) % n]);
      emit(std::move(piece), p, out);
    }
    return;
  }
  std::size_t from = 0;
  for (std::size_t c : corners) {
    emit(std::vector<Pixel>(chain.begin() + static_cast<std::ptrdiff_t>(from), chain.begin() + static_cast<std::ptrdiff_t>(c)), p,
         out);
    from = c;
  }
  emit(std::vector<Pixel>(chain.begin() + static_cast<std::ptrdiff_t>(from), chain.end()), p, out);
}

void split_contour(const Contour& contour, const SplitParams& p, std::vector<CurveSegment>& out) {
  const int ox = contour.bbox.min_x - 1;
  const int oy = contour.bbox.min_y - 1;
  BinaryMask local(contour.bbox.width() + 3, contour.bbox.height() + 3);
  for (const Pixel& px : contour.pixels) local.set(px.x - ox, px.y - oy);
  local = thin(local);

  BinaryMask curves = local;
  for (int y = 0; y < local.height(); ++y) {
    for (int x = 0; x < local.width(); ++x) {
      if (local.test(x, y) && neighbor_count(local, {x, y}) >= 3) curves.set(x, y, false);
    }
  }

  BinaryMask seen(local.width(), local.height());
  for (int y = 0; y < curves.height(); ++y) {
    for (int x = 0; x < curves.width(); ++x) {
      if (!curves.test(x, y) || seen.test(x, y)) continue;
      std::vector<Pixel> pixels;
      std::vector<Pixel> stack{{x, y}};
      seen.set(x, y);
      while (!stack.empty()) {
        const Pixel q = stack.back();
        stack.pop_back();
        pixels.push_back(q);
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const Pixel n{q.x + dx, q.y + dy};
            if (curves.test_safe(n.x, n.y) && !seen.test(n)) {
              seen.set(n);
              stack.push_back(n);
            }
          }
        }
      }
      std::sort(pixels.begin(), pixels.end());
      BinaryMask comp(curves.width(), curves.height());
      for (const Pixel& q : pixels) comp.set(q);
      bool cyclic = false;
      std::vector<Pixel> chain = walk_chain(comp, pixels, cyclic);
      for (Pixel& q : chain) {
        q.x += ox;
        q.y += oy;
      }
      split_chain(chain, cyclic, p, out);
    }
  }
}

}  // namespace

void MergeParams::validate() const {
  if (!(th > 0.0)) throw std::invalid_argument("merge th must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("merge c must be positive");
  if (!(mm_cut > 0.0 && mm_cut <= 1.0)) throw std::invalid_argument("merge mm_cut must lie in (0, 1]");
}

double line_angle(std::span<const Pixel> points) {
  if (points.size() < 2) return 0.0;
  double mx = 0.0;
  double my = 0.0;
  for (const Pixel& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const Pixel& p : points) {
    const double dx = p.x - mx;
    const double dy = p.y - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  if (theta <= -std::numbers::pi / 2) theta += std::numbers::pi;
  return theta;
}

double tangent_gap(double theta_i, double theta_j) noexcept {
  double g = std::fmod(std::abs(theta_i - theta_j), std::numbers::pi);
  if (g > std::numbers::pi / 2) g = std::numbers::pi - g;
  return g;
}

CurveSegment make_segment(std::vector<Pixel> chain, std::size_t tangent_points) {
  if (chain.size() < 3) throw std::invalid_argument("curve segment needs at least 3 points");
  const std::size_t k = std::min(std::max<std::size_t>(tangent_points, 2), chain.size());
  CurveSegment s;
  s.end_a = chain.front();
  s.end_b = chain.back();
  s.tangent_a = line_angle(std::span<const Pixel>(chain.data(), k));
  s.tangent_b = line_angle(std::span<const Pixel>(chain.data() + (chain.size() - k), k));
  s.points = std::move(chain);
  return s;
}

std::vector<CurveSegment> split_curve_segments(std::span<const Contour> contours, const SplitParams& params) {
  std::vector<CurveSegment> out;
  for (const Contour& c : contours) split_contour(c, params, out);
  return out;
}

MergeTerms merge_terms(const CurveSegment& si, const CurveSegment& sj, const MergeParams& p) {
  const std::array<std::pair<Pixel, double>, 2> ei = {{{si.end_a, si.tangent_a}, {si.end_b, si.tangent_b}}};
  const std::array<std::pair<Pixel, double>, 2> ej = {{{sj.end_a, sj.tangent_a}, {sj.end_b, sj.tangent_b}}};
  MergeTerms t;
  t.distance = std::numeric_limits<double>::infinity();
  double gap = std::numbers::pi / 2;
  for (const auto& [pi, ti] : ei) {
    for (const auto& [pj, tj] : ej) {
      const double d = std::hypot(static_cast<double>(pi.x - pj.x), static_cast<double>(pi.y - pj.y));
      const double g = tangent_gap(ti, tj);
      // Ties on distance resolve to the smaller gap, which keeps MM symmetric.
      if (d < t.distance || (d == t.distance && g < gap)) {
        t.distance = d;
        gap = g;
      }
    }
  }
  t.d = t.distance < p.th ? 1 : 0;
  t.theta = 1.0 / (1.0 + gap / p.c);
  t.mm = t.d * t.theta;
  return t;
}

double merging_measure(const CurveSegment& si, const CurveSegment& sj, const MergeParams& p) {
  return merge_terms(si, sj, p).mm;
}

std::vector<std::vector<double>> merging_matrix(std::span<const CurveSegment> segments, const MergeParams& p) {
  const std::size_t n = segments.size();
  std::vector<std::vector<double>> mm(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      mm[i][j] = merging_measure(segments[i], segments[j], p);
      mm[j][i] = mm[i][j];
    }
  }
  return mm;
}

std::vector<std::vector<std::size_t>> merge_segments(std::span<const CurveSegment> segments, const MergeParams& p) {
  p.validate();
  const std::size_t n = segments.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  const auto mm = merging_matrix(segments, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (mm[i][j] >= p.mm_cut) {
        const std::size_t a = find(i);
        const std::size_t b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (slot[r] == n) {
      slot[r] = groups.size();
      groups.emplace_back();
    }
    groups[slot[r]].push_back(i);
  }
  return groups;
}

}  // namespace leuko::shapes
