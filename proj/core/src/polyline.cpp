#include "qdelaunay/polyline.hpp"

#include <algorithm>
#include <vector>

namespace qdelaunay {

namespace {

double orient(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

struct Box {
  double x0, x1, y0, y1;
};

Box box_of(const PlanePoint& a, const PlanePoint& b) {
  return {std::min(a[0], b[0]), std::max(a[0], b[0]), std::min(a[1], b[1]), std::max(a[1], b[1])};
}

bool overlap(const Box& a, const Box& b) {
  return a.x0 <= b.x1 && b.x0 <= a.x1 && a.y0 <= b.y1 && b.y0 <= a.y1;
}

}  // namespace

bool segments_cross(const PlanePoint& p1, const PlanePoint& p2, const PlanePoint& q1,
                    const PlanePoint& q2) {
  const double d1 = orient(p1, p2, q1);
  const double d2 = orient(p1, p2, q2);
  const double d3 = orient(q1, q2, p1);
  const double d4 = orient(q1, q2, p2);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool polylines_cross(std::span<const PlanePoint> a, std::span<const PlanePoint> b) {
  if (a.size() < 2 || b.size() < 2) return false;
  std::vector<Box> boxes_b;
  boxes_b.reserve(b.size() - 1);
  for (std::size_t j = 0; j + 1 < b.size(); ++j) boxes_b.push_back(box_of(b[j], b[j + 1]));
  for (std::size_t i = 0; i + 1 < a.size(); ++i) {
    const Box ba = box_of(a[i], a[i + 1]);
    for (std::size_t j = 0; j + 1 < b.size(); ++j) {
      if (!overlap(ba, boxes_b[j])) continue;
      if (segments_cross(a[i], a[i + 1], b[j], b[j + 1])) return true;
    }
  }
  return false;
}

bool point_in_polygon(const PlanePoint& point, std::span<const PlanePoint> polygon) {
  bool inside = false;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& pi = polygon[i];
    const auto& pj = polygon[j];
    if ((pi[1] > point[1]) != (pj[1] > point[1])) {
      const double x = pj[0] + (point[1] - pj[1]) * (pi[0] - pj[0]) / (pi[1] - pj[1]);
      if (point[0] < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace qdelaunay
