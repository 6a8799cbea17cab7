#include "instfuse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <vector>

namespace instfuse::geom {

namespace {

constexpr double kPi = std::numbers::pi;

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

Vec2 line_intersection(const Vec2& a1, const Vec2& a2, const Vec2& b1,
                       const Vec2& b2) {
  const double d1 = cross(b1, b2, a1);
  const double d2 = cross(b1, b2, a2);
  const double t = d1 / (d1 - d2);
  return {a1.x + t * (a2.x - a1.x), a1.y + t * (a2.y - a1.y)};
}

double shoelace(const std::vector<Vec2>& poly) {
  double s = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % n];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

std::tuple<double, double, double, double, double> box_key(const OrientedBoxBEV& b) {
  return {b.cx, b.cy, b.length, b.width, b.yaw};
}

}  // namespace

double normalize_angle(double yaw) {
  double n = std::fmod(yaw + kPi, 2.0 * kPi);
  if (n <= 0.0) n += 2.0 * kPi;
  return n - kPi;
}

Pose2D identity_pose() { return {}; }

Pose2D compose(const Pose2D& a, const Pose2D& b) {
  const double c = std::cos(a.yaw);
  const double s = std::sin(a.yaw);
  return {a.x + c * b.x - s * b.y, a.y + s * b.x + c * b.y,
          normalize_angle(a.yaw + b.yaw)};
}

Pose2D inverse(const Pose2D& p) {
  const double c = std::cos(p.yaw);
  const double s = std::sin(p.yaw);
  return {-(c * p.x + s * p.y), -(-s * p.x + c * p.y), normalize_angle(-p.yaw)};
}

Vec2 transform_point(const Pose2D& xi, const Vec2& p) {
  const double c = std::cos(xi.yaw);
  const double s = std::sin(xi.yaw);
  return {xi.x + c * p.x - s * p.y, xi.y + s * p.x + c * p.y};
}

OrientedBoxBEV transform_box(const Pose2D& xi, const OrientedBoxBEV& box) {
  const Vec2 c = transform_point(xi, {box.cx, box.cy});
  return {c.x, c.y, box.length, box.width, normalize_angle(box.yaw + xi.yaw)};
}

OrientedBox3D transform_box(const Pose2D& xi, const OrientedBox3D& box) {
  return {transform_box(xi, box.bev), box.cz, box.height};
}

std::array<Vec2, 4> box_corners(const OrientedBoxBEV& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.length;
  const double hw = 0.5 * box.width;
  const std::array<Vec2, 4> local = {
      Vec2{-hl, -hw}, Vec2{hl, -hw}, Vec2{hl, hw}, Vec2{-hl, hw}};
  std::array<Vec2, 4> world;
  for (std::size_t i = 0; i < 4; ++i) {
    world[i] = {box.cx + c * local[i].x - s * local[i].y,
                box.cy + s * local[i].x + c * local[i].y};
  }
  return world;
}

double box_area(const OrientedBoxBEV& box) { return box.length * box.width; }

double intersection_area(const OrientedBoxBEV& a, const OrientedBoxBEV& b) {
  const auto ca = box_corners(a);
  const auto cb = box_corners(b);

  // Clip a's footprint against each edge of b (both CCW).
  std::vector<Vec2> poly(ca.begin(), ca.end());
  std::vector<Vec2> next;
  for (std::size_t e = 0; e < 4 && !poly.empty(); ++e) {
    const Vec2& e1 = cb[e];
    const Vec2& e2 = cb[(e + 1) % 4];
    next.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& cur = poly[i];
      const Vec2& prev = poly[(i + n - 1) % n];
      const bool cur_in = cross(e1, e2, cur) >= 0.0;
      const bool prev_in = cross(e1, e2, prev) >= 0.0;
      if (cur_in) {
        if (!prev_in) next.push_back(line_intersection(prev, cur, e1, e2));
        next.push_back(cur);
      } else if (prev_in) {
        next.push_back(line_intersection(prev, cur, e1, e2));
      }
    }
    poly.swap(next);
  }
  if (poly.size() < 3) return 0.0;
  const double area = std::abs(shoelace(poly));
  return area < kZeroAreaGuard ? 0.0 : area;
}

double bev_iou(const OrientedBoxBEV& a, const OrientedBoxBEV& b) {
  // Canonical argument order keeps bev_iou(a, b) == bev_iou(b, a) bit-exact.
  const bool swap = box_key(b) < box_key(a);
  const OrientedBoxBEV& first = swap ? b : a;
  const OrientedBoxBEV& second = swap ? a : b;

  // Areas via the same shoelace route as the intersection, so identical
  // footprints yield exactly 1.0.
  const auto ca = box_corners(first);
  const auto cb = box_corners(second);
  const double area_a = std::abs(shoelace({ca.begin(), ca.end()}));
  const double area_b = std::abs(shoelace({cb.begin(), cb.end()}));
  if (area_a < kZeroAreaGuard || area_b < kZeroAreaGuard) return 0.0;

  const double inter = intersection_area(first, second);
  if (inter <= 0.0) return 0.0;
  const double uni = area_a + area_b - inter;
  const double iou = inter / uni;
  return std::clamp(iou, 0.0, 1.0);
}

double bev_iou(const OrientedBox3D& a, const OrientedBox3D& b) {
  return bev_iou(a.bev, b.bev);
}

double circumradius(const OrientedBoxBEV& box) {
  return 0.5 * std::hypot(box.length, box.width);
}

}  // namespace instfuse::geom
