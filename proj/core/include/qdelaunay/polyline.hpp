#pragma once

#include <array>
#include <span>

namespace qdelaunay {

using PlanePoint = std::array<double, 2>;

/// True when the open segments [p1, p2] and [q1, q2] cross transversally
/// (strictly opposite orientations on both sides). Touching and collinear
/// overlaps do not count.
bool segments_cross(const PlanePoint& p1, const PlanePoint& p2, const PlanePoint& q1,
                    const PlanePoint& q2);

/// Any transversal crossing between consecutive-point segments of a and b.
bool polylines_cross(std::span<const PlanePoint> a, std::span<const PlanePoint> b);

/// Even-odd rule against a closed polyline (first point repeated or not).
bool point_in_polygon(const PlanePoint& point, std::span<const PlanePoint> polygon);

}  // namespace qdelaunay
