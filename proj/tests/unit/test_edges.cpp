#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "leuko/edges.hpp"

using namespace leuko;
using namespace leuko::edges;

namespace {

// Direct 2-D convolution with the outer-product kernel.
RealImage naive_smooth(const GrayImage& g, double sigma) {
  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> k;
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k.push_back(std::exp(-(i * i) / (2.0 * sigma * sigma)));
    sum += k.back();
  }
  for (double& v : k) v /= sum;
  RealImage out(g.width(), g.height(), 0.0);
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      double acc = 0.0;
      for (int j = -r; j <= r; ++j) {
        for (int i = -r; i <= r; ++i) acc += k[i + r] * k[j + r] * g.clamped(x + i, y + j);
      }
      out(x, y) = acc;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian kernel shape") {
  const std::vector<double> k = gaussian_kernel(1.4);
  CHECK(k.size() == 2 * 5 + 1);
  CHECK(std::accumulate(k.begin(), k.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 0; i < k.size() / 2; ++i) CHECK(k[i] == doctest::Approx(k[k.size() - 1 - i]));
  CHECK(k[5] > k[4]);
  CHECK(k[5] / k[4] == doctest::Approx(std::exp(1.0 / (2 * 1.4 * 1.4))));
  CHECK_THROWS_AS(gaussian_kernel(0.0), std::invalid_argument);
}

TEST_CASE("separable smoothing equals direct convolution") {
  std::mt19937_64 rng(3);
  const GrayImage g = testing::random_gray(rng, 23, 17);
  const RealImage fast = gaussian_smooth(g, 1.1);
  const RealImage slow = naive_smooth(g, 1.1);
  for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast.data()[i] == doctest::Approx(slow.data()[i]).epsilon(1e-9));
}

TEST_CASE("impulse response sums to the impulse height") {
  GrayImage g(31, 31, std::uint8_t{0});
  g(15, 15) = 255;
  const RealImage s = gaussian_smooth(g, 2.0);
  CHECK(std::accumulate(s.data().begin(), s.data().end(), 0.0) == doctest::Approx(255.0).epsilon(1e-9));
  const std::vector<double> k = gaussian_kernel(2.0);
  CHECK(s(15, 15) == doctest::Approx(255.0 * k[6] * k[6]));
}

TEST_CASE("sobel on a linear ramp") {
  RealImage img(9, 9, 0.0);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 9; ++x) img(x, y) = 3.0 * x + 2.0 * y;
  }
  const GradientField f = sobel_gradients(img);
  // Interior Sobel response is 8 times the slope.
  CHECK(f.magnitude(4, 4) == doctest::Approx(std::hypot(24.0, 16.0)));
  CHECK(f.angle(4, 4) == doctest::Approx(std::atan2(16.0, 24.0)));
  CHECK(f.direction(4, 4) == Direction::deg45);
}

TEST_CASE("direction bins") {
  const auto bin_of = [](double gx, double gy) {
    RealImage img(5, 5, 0.0);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 5; ++x) img(x, y) = gx * x + gy * y;
    }
    return sobel_gradients(img).direction(2, 2);
  };
  CHECK(bin_of(1, 0) == Direction::deg0);
  CHECK(bin_of(-1, 0) == Direction::deg0);
  CHECK(bin_of(0, 1) == Direction::deg90);
  CHECK(bin_of(1, 1) == Direction::deg45);
  CHECK(bin_of(-1, -1) == Direction::deg45);
  CHECK(bin_of(-1, 1) == Direction::deg135);
}

TEST_CASE("suppression thins a step edge to one pixel per row") {
  GrayImage g(20, 12, std::uint8_t{0});
  for (int y = 0; y < 12; ++y) {
    for (int x = 10; x < 20; ++x) g(x, y) = 200;
  }
  const RealImage nms = non_maximum_suppression(sobel_gradients(gaussian_smooth(g, 1.0)));
  for (int y = 1; y < 11; ++y) {
    int n = 0;
    for (int x = 0; x < 20; ++x) n += nms(x, y) > 0.0;
    CHECK(n == 1);
  }
  for (int x = 0; x < 20; ++x) {
    CHECK(nms(x, 0) == 0.0);
    CHECK(nms(x, 11) == 0.0);
  }
}

TEST_CASE("double threshold classes") {
  RealImage s(4, 1, 0.0);
  s(1, 0) = 10.0;
  s(2, 0) = 20.0;
  s(3, 0) = 60.0;
  const Grid<EdgeClass> c = double_threshold(s, 20.0, 60.0);
  CHECK(c(0, 0) == EdgeClass::none);
  CHECK(c(1, 0) == EdgeClass::none);
  CHECK(c(2, 0) == EdgeClass::weak);
  CHECK(c(3, 0) == EdgeClass::strong);
}

TEST_CASE("hysteresis keeps weak pixels linked to strong ones") {
  Grid<EdgeClass> c(8, 3, EdgeClass::none);
  c(0, 1) = EdgeClass::strong;
  c(1, 1) = EdgeClass::weak;
  c(2, 2) = EdgeClass::weak;  // diagonal link
  c(6, 1) = EdgeClass::weak;  // isolated
  const BinaryMask m = hysteresis(c);
  CHECK(m.count() == 3);
  CHECK(m.test(2, 2));
  CHECK_FALSE(m.test(6, 1));
}

TEST_CASE("canny finds a disc boundary as one closed ring") {
  const std::vector<GrayImage> fixtures = testing::structured_grays();
  const BinaryMask e = canny(fixtures[1], {});
  CHECK(e.count() > 50);
  for (int y = 0; y < e.height(); ++y) {
    for (int x = 0; x < e.width(); ++x) {
      if (!e.test(x, y)) continue;
      const double r = std::hypot(x - 24.0, y - 24.0);
      CHECK(r > 9.5);
      CHECK(r < 14.5);
    }
  }
}

TEST_CASE("canny parameter validation") {
  const GrayImage g(8, 8, std::uint8_t{0});
  CHECK_THROWS_AS(canny(g, {1.0, 50.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(canny(g, {0.0, 10.0, 20.0}), std::invalid_argument);
  CHECK_THROWS_AS(canny(g, {1.0, -1.0, 20.0}), std::invalid_argument);
}
