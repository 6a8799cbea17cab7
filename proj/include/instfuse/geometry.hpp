#pragma once

#include <array>
#include <cstddef>

namespace instfuse::geom {

// Intersection areas below this are treated as zero overlap. Shared by the
// IoU routine, the scene generator and the sample placer so that "IoU == 0"
// means the same thing everywhere.
inline constexpr double kZeroAreaGuard = 1e-12;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Planar rigid pose; yaw normalized into (-pi, pi].
struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
};

// BEV rectangle: center, extents, heading.
struct OrientedBoxBEV {
  double cx = 0.0;
  double cy = 0.0;
  double length = 1.0;  // extent along heading
  double width = 1.0;   // extent across heading
  double yaw = 0.0;
};

// 3D box carried through the pipeline; transforms act on the BEV part only,
// z and height ride along as payload.
struct OrientedBox3D {
  OrientedBoxBEV bev;
  double cz = 0.0;
  double height = 1.0;
};

double normalize_angle(double yaw);

Pose2D identity_pose();
Pose2D compose(const Pose2D& a, const Pose2D& b);
Pose2D inverse(const Pose2D& p);

Vec2 transform_point(const Pose2D& xi, const Vec2& p);
OrientedBoxBEV transform_box(const Pose2D& xi, const OrientedBoxBEV& box);
OrientedBox3D transform_box(const Pose2D& xi, const OrientedBox3D& box);

// Corners in counter-clockwise order.
std::array<Vec2, 4> box_corners(const OrientedBoxBEV& box);

double box_area(const OrientedBoxBEV& box);

/// Exact area of the overlap of two oriented rectangles
/// (Sutherland-Hodgman clipping + shoelace). Values below kZeroAreaGuard
/// are snapped to zero.
double intersection_area(const OrientedBoxBEV& a, const OrientedBoxBEV& b);

/// Rotated IoU of the BEV footprints, in [0, 1]. Exactly symmetric in its
/// arguments (evaluation happens in a canonical argument order) and exactly
/// 1.0 for identical footprints. Boxes with area below kZeroAreaGuard give 0.
double bev_iou(const OrientedBoxBEV& a, const OrientedBoxBEV& b);
double bev_iou(const OrientedBox3D& a, const OrientedBox3D& b);

/// Radius of the box's circumcircle: half the BEV diagonal.
double circumradius(const OrientedBoxBEV& box);

}  // namespace instfuse::geom
