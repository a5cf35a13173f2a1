#include "qdelaunay/phase_portrait.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <thread>

#include "qdelaunay/errors.hpp"
#include "qdelaunay/ode_integrator.hpp"

namespace qdelaunay {

namespace {

std::string curve_label(double a) {
  std::ostringstream os;
  os.precision(9);
  os << "delaunay a=" << a;
  return os.str();
}

PortraitCurve sphere_curve(const DimensionParams& params, const PortraitOptions& popt) {
  PortraitCurve c;
  c.label = "sphere";
  c.closed = false;
  const double span = sphere_span(params, popt.sphere_cutoff);
  const int m = std::max(popt.sphere_points, 3);
  c.points.reserve(std::size_t(m));
  for (int i = 0; i < m; ++i) {
    const double t = -span + 2.0 * span * i / (m - 1);
    const auto d = v_sph_derivatives(params, t);
    c.points.push_back({d[0], d[1]});
  }
  return c;
}

// Sphere loop closed through the origin.
std::vector<PlanePoint> sphere_polygon(const PortraitCurve& c) {
  std::vector<PlanePoint> poly = c.points;
  poly.push_back({0.0, 0.0});
  poly.push_back(poly.front());
  return poly;
}

}  // namespace

double sphere_span(const DimensionParams& params, double cutoff) {
  if (!(cutoff > 0.0 && cutoff < 1.0)) throw InvalidParameter("sphere cutoff must lie in (0, 1)");
  return std::acosh(std::pow(cutoff, -2.0 / (params.n - 4)));
}

PortraitSet build_portrait(const DimensionParams& params, std::span<const double> a_list,
                           const PortraitOptions& popt, const ShootingOptions& opt) {
  for (double a : a_list) {
    if (!(a > params.v_cyl && a < 1.0)) throw InvalidParameter("portrait a must lie in (v_cyl, 1)");
  }
  PortraitSet set;
  set.n = params.n;
  set.curves.resize(a_list.size());
  std::vector<std::exception_ptr> errors(a_list.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i = next++; i < a_list.size(); i = next++) {
      try {
        const DelaunayOrbit o = shoot(params, a_list[i], opt);
        PortraitCurve& c = set.curves[i];
        c.label = curve_label(a_list[i]);
        c.a = a_list[i];
        c.points = phase_polyline(o);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = popt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : popt.threads;
  threads = std::min<unsigned>(threads, unsigned(std::max<std::size_t>(1, a_list.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  if (popt.include_sphere) set.curves.push_back(sphere_curve(params, popt));
  set.markers.push_back({"cylinder", params.v_cyl, 0.0});
  if (popt.include_sphere) set.markers.push_back({"origin", 0.0, 0.0});
  return set;
}

double sphere_integration_deviation(const DimensionParams& params, double t_max) {
  const auto d0 = v_sph_derivatives(params, 0.0);
  const CylinderState s0{0.0, d0[0], d0[1], d0[2], d0[3]};
  IntegratorOptions io;
  io.rtol = 1e-12;
  io.atol = 1e-14;
  double worst = 0.0;
  for (double end : {t_max, -t_max}) {
    const Trajectory tr = integrate(params, s0, end, io, {});
    for (const CylinderState& s : tr.samples()) {
      const auto d = v_sph_derivatives(params, s.t);
      worst = std::max({worst, std::abs(s.v - d[0]), std::abs(s.v1 - d[1])});
    }
  }
  return worst;
}

PortraitChecks check_portrait(const DimensionParams& params, const PortraitSet& set) {
  PortraitChecks out;
  out.cylinder_marker_ok = std::any_of(set.markers.begin(), set.markers.end(), [&](const PortraitMarker& m) {
    return m.label == "cylinder" && m.v == params.v_cyl && m.v1 == 0.0;
  });
  std::vector<const PortraitCurve*> delaunay;
  const PortraitCurve* sphere = nullptr;
  for (const PortraitCurve& c : set.curves) {
    if (c.closed && !c.points.empty()) {
      const PlanePoint& f = c.points.front();
      const PlanePoint& l = c.points.back();
      out.worst_closure = std::max(out.worst_closure, std::hypot(f[0] - l[0], f[1] - l[1]));
    }
    if (c.a) delaunay.push_back(&c);
    if (c.label == "sphere") sphere = &c;
  }
  for (const PortraitCurve* c : delaunay) {
    // points[j] and points[N - j] are t and t_a - t
    const std::size_t m = c->points.size() - 1;
    for (std::size_t j = 1; j < m; ++j) {
      const PlanePoint& p = c->points[j];
      const PlanePoint& q = c->points[m - j];
      out.worst_asymmetry = std::max({out.worst_asymmetry, std::abs(p[0] - q[0]), std::abs(p[1] + q[1])});
    }
  }
  std::sort(delaunay.begin(), delaunay.end(), [](auto* x, auto* y) { return *x->a < *y->a; });
  for (std::size_t i = 1; i < delaunay.size(); ++i) {
    const auto& inner = delaunay[i - 1]->points;
    const auto& outer = delaunay[i]->points;
    if (*delaunay[i - 1]->a == *delaunay[i]->a) continue;
    if (polylines_cross(inner, outer)) out.nested = false;
    for (const PlanePoint& p : inner) {
      if (!point_in_polygon(p, outer)) {
        out.nested = false;
        break;
      }
    }
  }
  if (sphere != nullptr) {
    const std::vector<PlanePoint> poly = sphere_polygon(*sphere);
    for (const PortraitCurve* c : delaunay) {
      if (polylines_cross(c->points, poly)) out.inside_sphere = false;
      for (const PlanePoint& p : c->points) {
        if (!point_in_polygon(p, poly)) {
          out.inside_sphere = false;
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace qdelaunay
