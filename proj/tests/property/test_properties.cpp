#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "generators.hpp"
#include "leuko/edges.hpp"
#include "leuko/features.hpp"
#include "leuko/fuzzy.hpp"
#include "leuko/pipeline.hpp"
#include "leuko/raster.hpp"
#include "leuko/shapes.hpp"

using namespace leuko;

TEST_CASE("merging measure properties") {
  std::mt19937_64 rng(101);
  const shapes::MergeParams p;
  for (int i = 0; i < 2000; ++i) {
    const shapes::CurveSegment a = testing::random_segment(rng, 40);
    const shapes::CurveSegment b = testing::random_segment(rng, 40);
    const shapes::MergeTerms ab = shapes::merge_terms(a, b, p);
    const shapes::MergeTerms ba = shapes::merge_terms(b, a, p);
    CHECK(ab.mm == ba.mm);
    CHECK(ab.mm >= 0.0);
    CHECK(ab.mm <= 1.0);
    CHECK((ab.d == 0 || ab.d == 1));
    CHECK(ab.theta > 0.0);
    CHECK(ab.theta <= 1.0);
    CHECK(ab.d == (ab.distance < p.th ? 1 : 0));
  }
}

TEST_CASE("theta is one half at a right-angle tangent gap") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(-std::numbers::pi / 2, std::numbers::pi / 2);
  for (int i = 0; i < 500; ++i) {
    const double t = ang(rng);
    double u = t + std::numbers::pi / 2;
    if (u > std::numbers::pi / 2) u -= std::numbers::pi;
    const auto a = testing::synthetic_segment({0, 0}, {10, 0}, t);
    const auto b = testing::synthetic_segment({12, 1}, {30, 5}, u);
    const shapes::MergeTerms m = shapes::merge_terms(a, b, {});
    CHECK(std::abs(m.theta - 0.5) < 1e-12);
    CHECK(m.d == 1);
  }
}

TEST_CASE("tangent gap symmetry and range") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = ang(rng), b = ang(rng);
    const double g = shapes::tangent_gap(a, b);
    CHECK(g >= 0.0);
    CHECK(g <= std::numbers::pi / 2 + 1e-15);
    CHECK(g == shapes::tangent_gap(b, a));
    CHECK(shapes::tangent_gap(a, b + std::numbers::pi) == doctest::Approx(g).epsilon(1e-9));
  }
}

TEST_CASE("line angle range") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const double t = shapes::line_angle(testing::random_chain(rng));
    CHECK(t > -std::numbers::pi / 2);
    CHECK(t <= std::numbers::pi / 2);
  }
}

TEST_CASE("merge groups partition segment indices") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<shapes::CurveSegment> segs;
    for (int i = 0; i < 12; ++i) segs.push_back(testing::random_segment(rng, 60));
    const auto groups = shapes::merge_segments(segs, {});
    const auto mm = shapes::merging_matrix(segs, {});
    std::vector<int> owner(segs.size(), -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      CHECK(std::is_sorted(groups[g].begin(), groups[g].end()));
      if (g > 0) CHECK(groups[g - 1].front() < groups[g].front());
      for (std::size_t idx : groups[g]) {
        CHECK(owner[idx] == -1);
        owner[idx] = static_cast<int>(g);
      }
    }
    for (std::size_t i = 0; i < segs.size(); ++i) {
      CHECK(owner[i] >= 0);
      for (std::size_t j = 0; j < segs.size(); ++j) {
        if (i != j && mm[i][j] >= 0.75) CHECK(owner[i] == owner[j]);
      }
    }
  }
}

TEST_CASE("contour traces partition edge pixels") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const BinaryMask m = testing::random_edge_mask(rng, 70, 70);
    const auto contours = shapes::trace_contours(m);
    std::size_t total = 0;
    for (const shapes::Contour& c : contours) {
      total += c.pixels.size();
      const std::set<Pixel> own(c.pixels.begin(), c.pixels.end());
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        CHECK(own.contains(c.points[i]));
        if (c.points.size() > 1) {
          const Pixel a = c.points[i], b = c.points[(i + 1) % c.points.size()];
          CHECK(std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)) <= 1);
        }
      }
    }
    CHECK(total == m.count());
  }
}

TEST_CASE("thinning is a subset that keeps component counts") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    BinaryMask m = testing::random_edge_mask(rng, 60, 60);
    // Thicken so that thinning has work to do.
    BinaryMask thick = m;
    for (int y = 0; y < m.height(); ++y) {
      for (int x = 0; x < m.width(); ++x) {
        if (m.test(x, y)) {
          if (thick.contains(x + 1, y)) thick.set(x + 1, y);
          if (thick.contains(x, y + 1)) thick.set(x, y + 1);
        }
      }
    }
    const BinaryMask t = shapes::thin(thick);
    CHECK((t & thick) == t);
    CHECK(shapes::trace_contours(t).size() == shapes::trace_contours(thick).size());
    CHECK(shapes::thin(t) == t);
  }
}

TEST_CASE("ellipse fit recovers random exact ellipses") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> c(-50, 50), ax(2, 60), rot(-1.5, 1.5), u(0, 1);
  for (int i = 0; i < 300; ++i) {
    const double a = ax(rng);
    const double b = a * (0.2 + 0.8 * u(rng));
    const shapes::EllipseParams e{c(rng), c(rng), a, b, rot(rng)};
    std::vector<shapes::Point2> pts;
    const double t0 = u(rng) * 6.28;
    for (int k = 0; k < 30; ++k) {
      const double t = t0 + (1.0 + 5.0 * u(rng) / 6.0) * k / 30.0 * 2.5;
      const double px = e.a * std::cos(t), py = e.b * std::sin(t);
      pts.push_back({e.cx + std::cos(e.rotation) * px - std::sin(e.rotation) * py,
                     e.cy + std::sin(e.rotation) * px + std::cos(e.rotation) * py});
    }
    const shapes::EllipseFit f = shapes::fit_ellipse(pts);
    CHECK(f.ellipse.cx == doctest::Approx(e.cx).epsilon(1e-5).scale(10));
    CHECK(f.ellipse.cy == doctest::Approx(e.cy).epsilon(1e-5).scale(10));
    CHECK(f.ellipse.a == doctest::Approx(e.a).epsilon(1e-5));
    CHECK(f.ellipse.b == doctest::Approx(e.b).epsilon(1e-5));
    CHECK(f.ellipse.a >= f.ellipse.b);
  }
}

TEST_CASE("cell counts nest and stay bounded") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> pos(30, 130), rad(12, 28), ratio(0, 1);
  for (int trial = 0; trial < 25; ++trial) {
    testing::SmearSpec s;
    s.width = s.height = 160;
    const int n = 1 + static_cast<int>(ratio(rng) * 3);
    for (int i = 0; i < n; ++i) s.cells.push_back({pos(rng), pos(rng), rad(rng), ratio(rng), ratio(rng) * 0.6});
    const RasterImage img = testing::render_smear(s);
    const harness::PipelineConfig cfg;
    const harness::Segmentation seg = harness::segment(img, cfg);
    const BinaryMask edges = edges::canny(raster::to_gray(seg.wbc), cfg.canny);
    const shapes::CountResult r = shapes::count_cells(edges, {seg.wbc, seg.nucleus, seg.granule}, cfg.detection);
    CHECK(r.detections.size() <= r.diagnostics.circles + r.diagnostics.segments);
    for (const shapes::CellDetection& d : r.detections) {
      CHECK(d.granule_pixel_count <= d.nucleus_pixel_count);
      CHECK(d.nucleus_pixel_count <= d.wbc_pixel_count);
    }
  }
}

TEST_CASE("membership bounds and standard-mode continuity") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> x(-7.0, 7.0);
  for (fuzzy::Shape shape : {fuzzy::Shape::ramp_up, fuzzy::Shape::ramp_down, fuzzy::Shape::triangle}) {
    for (int i = 0; i < 300; ++i) {
      const fuzzy::FuzzyTerm t = testing::random_term(rng, shape);
      if (t.c - t.a < 1e-3 || t.b - t.a < 1e-3 || t.c - t.b < 1e-3) continue;
      const double max_slope = 1.0 / std::min(t.b - t.a, t.c - t.b);
      for (int k = 0; k < 20; ++k) {
        const double v = x(rng);
        for (fuzzy::Mode m : {fuzzy::Mode::standard, fuzzy::Mode::paper_compat}) {
          const double d = fuzzy::membership(v, t, m);
          CHECK(d >= 0.0);
          CHECK(d <= 1.0);
        }
        const double h = 1e-7;
        const double jump = std::abs(fuzzy::membership(v + h, t, fuzzy::Mode::standard) -
                                     fuzzy::membership(v, t, fuzzy::Mode::standard));
        CHECK(jump <= max_slope * h * (1 + 1e-6) + 1e-12);
      }
      CHECK(fuzzy::membership(t.b, t, fuzzy::Mode::standard) == 1.0);
    }
  }
}

TEST_CASE("weighted average lies within the fired outputs") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::uniform_int_distribution<int> z(0, 2), n(1, 6);
  for (int i = 0; i < 1000; ++i) {
    std::vector<fuzzy::Firing> f;
    const int k = n(rng);
    const double same = z(rng);
    const bool uniform = i % 3 == 0;
    for (int j = 0; j < k; ++j) f.push_back({j, w(rng) + 1e-9, uniform ? same : static_cast<double>(z(rng))});
    const auto wa = fuzzy::weighted_average(f);
    REQUIRE(wa.has_value());
    double lo = 3, hi = -1;
    for (const auto& x : f) {
      lo = std::min(lo, x.output);
      hi = std::max(hi, x.output);
    }
    CHECK(*wa >= lo);
    CHECK(*wa <= hi);
    if (uniform) CHECK(*wa == same);
  }
}

TEST_CASE("rule strength is monotone in antecedent degrees") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> bump(0.0, 0.5);
  const fuzzy::FuzzyModel model = fuzzy::default_model();
  const auto strength_of = [&](const fuzzy::Degrees& d, int id) {
    for (const fuzzy::Firing& f : fuzzy::fire_rules(d, model.rules)) {
      if (f.rule_id == id) return f.strength;
    }
    return 0.0;
  };
  for (int i = 0; i < 500; ++i) {
    const fuzzy::Degrees d = testing::random_degrees(rng, model);
    fuzzy::Degrees raised = d;
    auto& v = raised[i % raised.size()];
    auto& t = v.terms[static_cast<std::size_t>(i) % v.terms.size()];
    t.degree = std::min(1.0, t.degree + bump(rng));
    for (const fuzzy::FuzzyRule& r : model.rules) CHECK(strength_of(raised, r.id) >= strength_of(d, r.id));
  }
}

TEST_CASE("classify assigns exactly one label") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> wa(0.0, 2.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = i < 5 ? std::vector<double>{0.0, 0.5, 1.0, 2.0, 0.49999999}[i] : wa(rng);
    const fuzzy::Label l = fuzzy::classify(v).label;
    const int hits = (l == fuzzy::Label::healthy) + (l == fuzzy::Label::all) + (l == fuzzy::Label::aml_m3);
    CHECK(hits == 1);
    CHECK(l == (v < 0.5 ? fuzzy::Label::healthy : v <= 1.0 ? fuzzy::Label::all : fuzzy::Label::aml_m3));
  }
}

TEST_CASE("calibration round trip") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> px(10, 1e5), dia(1, 20);
  for (int i = 0; i < 1000; ++i) {
    for (auto mode : {features::PiMode::standard, features::PiMode::paper_compat}) {
      const double n = px(rng), d = dia(rng);
      const features::CalibrationProfile c = features::calibrate(n, d, mode);
      CHECK(std::abs(features::wbc_diameter(features::wbc_area(n, c), mode) - d) < 1e-9);
    }
  }
}

TEST_CASE("accuracy identities") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> n(0, 50);
  for (int i = 0; i < 1000; ++i) {
    harness::Totals t{0, static_cast<std::size_t>(n(rng)), static_cast<std::size_t>(n(rng)), static_cast<std::size_t>(n(rng))};
    t.ti = t.td + t.tw + t.tu;
    if (t.ti == 0) continue;
    const double a = harness::accuracy(t);
    CHECK(a >= 0.0);
    CHECK(a <= 100.0);
    CHECK((a == 100.0) == (t.tw + t.tu == 0));
  }
}

TEST_CASE("canny is deterministic and constant images are empty") {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 10; ++i) {
    const GrayImage g = testing::random_gray(rng, 30, 30);
    CHECK(edges::canny(g, {}) == edges::canny(g, {}));
    const GrayImage flat(25, 19, static_cast<std::uint8_t>(rng() % 256));
    CHECK(edges::canny(flat, {}).count() == 0);
  }
}
