#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "leuko/error.hpp"
#include "leuko/shapes.hpp"

namespace leuko::shapes {

namespace {

// Conic coefficients A x^2 + B xy + C y^2 + D x + E y + F = 0 to geometric form.
EllipseParams conic_to_params(const Eigen::Matrix<double, 6, 1>& k) {
  const double A = k(0), B = k(1), C = k(2), D = k(3), E = k(4), F = k(5);
  const double det = 4.0 * A * C - B * B;
  if (!(det > 0.0)) throw FitError("conic is not an ellipse");

  const double x0 = (B * E - 2.0 * C * D) / det;
  const double y0 = (B * D - 2.0 * A * E) / det;
  const double f0 = A * x0 * x0 + B * x0 * y0 + C * y0 * y0 + D * x0 + E * y0 + F;

  Eigen::Matrix2d q;
  q << A, B / 2.0, B / 2.0, C;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q);
  const Eigen::Vector2d lambda = es.eigenvalues();  // ascending
  const double s0 = -f0 / lambda(0);
  const double s1 = -f0 / lambda(1);
  if (!(s0 > 0.0 && s1 > 0.0)) throw FitError("conic has imaginary axes");

  // Smaller eigenvalue belongs to the longer axis.
  EllipseParams e;
  e.cx = x0;
  e.cy = y0;
  e.a = std::sqrt(std::max(s0, s1));
  e.b = std::sqrt(std::min(s0, s1));
  const Eigen::Vector2d major = s0 >= s1 ? es.eigenvectors().col(0) : es.eigenvectors().col(1);
  double rot = std::atan2(major(1), major(0));
  if (rot > std::numbers::pi / 2) rot -= std::numbers::pi;
  if (rot <= -std::numbers::pi / 2) rot += std::numbers::pi;
  e.rotation = rot;
  return e;
}

}  // namespace

double ellipse_distance(const EllipseParams& e, Point2 p) noexcept {
  const double c = std::cos(e.rotation);
  const double s = std::sin(e.rotation);
  const double dx = p.x - e.cx;
  const double dy = p.y - e.cy;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  const double f = u * u / (e.a * e.a) + v * v / (e.b * e.b) - 1.0;
  const double gu = 2.0 * u / (e.a * e.a);
  const double gv = 2.0 * v / (e.b * e.b);
  const double g = std::hypot(gu, gv);
  if (g < 1e-12) return e.b;
  return std::abs(f) / g;
}

bool inside_ellipse(const EllipseParams& e, Point2 p) noexcept {
  const double c = std::cos(e.rotation);
  const double s = std::sin(e.rotation);
  const double dx = p.x - e.cx;
  const double dy = p.y - e.cy;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return u * u / (e.a * e.a) + v * v / (e.b * e.b) <= 1.0;
}

double arc_coverage_deg(const EllipseParams& e, std::span<const Pixel> points) {
  if (points.empty()) return 0.0;
  const double c = std::cos(e.rotation);
  const double s = std::sin(e.rotation);
  std::vector<double> phi;
  phi.reserve(points.size());
  for (const Pixel& p : points) {
    const double dx = p.x - e.cx;
    const double dy = p.y - e.cy;
    const double u = (c * dx + s * dy) / e.a;
    const double v = (-s * dx + c * dy) / e.b;
    phi.push_back(std::atan2(v, u));
  }
  std::sort(phi.begin(), phi.end());
  double gap = phi.front() + 2.0 * std::numbers::pi - phi.back();
  for (std::size_t i = 1; i < phi.size(); ++i) gap = std::max(gap, phi[i] - phi[i - 1]);
  return 360.0 - gap * 180.0 / std::numbers::pi;
}

EllipseFit fit_ellipse(std::span<const Point2> points) {
  const auto n = static_cast<Eigen::Index>(points.size());
  if (n < 5) throw FitError("ellipse fit needs at least 5 points, got " + std::to_string(points.size()));

  // Center and scale for conditioning.
  double mx = 0.0, my = 0.0;
  for (const Point2& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double spread = 0.0;
  for (const Point2& p : points) spread += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
  spread = std::sqrt(spread / (2.0 * static_cast<double>(n)));
  if (!(spread > 0.0)) throw FitError("ellipse fit points are coincident");

  Eigen::MatrixXd d1(n, 3), d2(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = (points[static_cast<std::size_t>(i)].x - mx) / spread;
    const double y = (points[static_cast<std::size_t>(i)].y - my) / spread;
    d1.row(i) << x * x, x * y, y * y;
    d2.row(i) << x, y, 1.0;
  }
  const Eigen::Matrix3d s1 = d1.transpose() * d1;
  const Eigen::Matrix3d s2 = d1.transpose() * d2;
  const Eigen::Matrix3d s3 = d2.transpose() * d2;

  Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
  lu.setThreshold(1e-10);
  if (lu.rank() < 3) throw FitError("ellipse fit points are collinear");
  const Eigen::Matrix3d t = -lu.solve(s2.transpose());
  const Eigen::Matrix3d m = s1 + s2 * t;

  // Premultiply by the inverse of the 3x3 ellipse constraint block.
  Eigen::Matrix3d reduced;
  reduced.row(0) = m.row(2) / 2.0;
  reduced.row(1) = -m.row(1);
  reduced.row(2) = m.row(0) / 2.0;

  Eigen::EigenSolver<Eigen::Matrix3d> es(reduced);
  if (es.info() != Eigen::Success) throw FitError("ellipse fit eigen-decomposition failed");
  int best = -1;
  double best_cond = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d v = es.eigenvectors().col(i).real();
    const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
    if (cond > best_cond) {
      best_cond = cond;
      best = i;
    }
  }
  if (best < 0) throw FitError("no elliptical solution for the points");

  const Eigen::Vector3d a1 = es.eigenvectors().col(best).real();
  const Eigen::Vector3d a2 = t * a1;
  Eigen::Matrix<double, 6, 1> conic;
  conic << a1, a2;

  EllipseParams e = conic_to_params(conic);
  e.cx = e.cx * spread + mx;
  e.cy = e.cy * spread + my;
  e.a *= spread;
  e.b *= spread;
  if (!(std::isfinite(e.a) && std::isfinite(e.b) && e.b > 0.0)) throw FitError("degenerate ellipse");

  double sq = 0.0;
  for (const Point2& p : points) {
    const double d = ellipse_distance(e, p);
    sq += d * d;
  }
  return {e, std::sqrt(sq / static_cast<double>(n))};
}

EllipseFit fit_ellipse(std::span<const Pixel> points) {
  std::vector<Point2> pts;
  pts.reserve(points.size());
  for (const Pixel& p : points) pts.push_back({static_cast<double>(p.x), static_cast<double>(p.y)});
  return fit_ellipse(std::span<const Point2>(pts));
}

}  // namespace leuko::shapes
