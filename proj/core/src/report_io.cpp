#include "qdelaunay/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qdelaunay/cylinder_dynamics.hpp"
#include "qdelaunay/version.hpp"

namespace qdelaunay {

namespace {

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json check_json(const CheckResult& c) {
  return Json{{"module", c.module}, {"name", c.name},           {"passed", c.passed},
              {"value", number(c.value)}, {"threshold", number(c.threshold)}, {"detail", c.detail}};
}

}  // namespace

std::string format_number(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double round_significant(double x, int digits) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_number(x, digits));
}

std::string provenance_line(const Provenance& p) {
  return "# qdelaunay " + std::string(kVersion) + " command=" + p.command + " n=" + std::to_string(p.n) +
         " rtol=" + format_number(p.rtol) + " atol=" + format_number(p.atol) +
         " shoot_tol=" + format_number(p.shoot_tol);
}

Json provenance_json(const Provenance& p) {
  return Json{{"artifact", "qdelaunay"}, {"version", kVersion}, {"command", p.command}, {"n", p.n},
              {"rtol", p.rtol},          {"atol", p.atol},      {"shoot_tol", p.shoot_tol}};
}

Json to_json(const DimensionParams& P) {
  return Json{{"n", P.n},
              {"c2", P.c2},
              {"c0", P.c0},
              {"r", P.r},
              {"p", P.p},
              {"p_sharp", P.p_sharp},
              {"q_bar", P.q_bar},
              {"v_cyl", P.v_cyl},
              {"k_lin", P.k_lin},
              {"h_cyl", P.h_cyl},
              {"mu", P.mu},
              {"t_cyl", P.t_cyl},
              {"area_s", P.area_s},
              {"vol_s", P.vol_s},
              {"y_sph", P.y_sph}};
}

Json orbit_summary_json(const DimensionParams& P, const DelaunayOrbit& o) {
  const double y = invariant_value(P, o);
  return Json{{"a", o.a},
              {"b", o.b},
              {"T_a", o.t_a},
              {"T_a_over_t_cyl", o.t_a / P.t_cyl},
              {"eps_a", o.eps_a},
              {"H", o.h},
              {"I_a", o.i_a},
              {"Y", y},
              {"Y_over_Ysph", y / P.y_sph},
              {"defect", number(o.defect)},
              {"forward_defect", number(o.forward_defect)},
              {"g_residual", o.g_residual},
              {"max_drift", o.max_drift},
              {"sup_v", o.sup_v},
              {"root_candidates", o.root_candidates},
              {"newton_iterations", o.newton_iterations}};
}

Json orbit_samples_json(const DelaunayOrbit& o) {
  Json rows = Json::array();
  for (const CylinderState& s : o.samples) rows.push_back(Json::array({s.t, s.v, s.v1, s.v2, s.v3}));
  return Json{{"columns", Json::array({"t", "v", "v1", "v2", "v3"})}, {"rows", rows}};
}

Json to_json(const DimensionParams& P, const SweepReport& r) {
  Json points = Json::array();
  for (const SweepPoint& pt : r.points) {
    if (pt.orbit) {
      Json j = orbit_summary_json(P, *pt.orbit);
      j["status"] = "ok";
      points.push_back(j);
    } else {
      points.push_back(Json{{"a", pt.a},
                            {"status", pt.failure ? std::string(to_string(*pt.failure)) : "failed"},
                            {"message", pt.message}});
    }
  }
  return Json{{"points", points},
              {"failures", r.failures()},
              {"period_increasing", r.period_increasing},
              {"eps_decreasing", r.eps_decreasing},
              {"energy_in_range", r.energy_in_range},
              {"defects_within_tol", r.defects_within_tol},
              {"curves_nested", r.curves_nested}};
}

Json to_json(const ConvergenceReport& r) {
  Json rows = Json::array();
  for (const ConvergenceRow& row : r.rows) {
    if (row.ok) {
      rows.push_back(Json{{"k", row.k}, {"a", row.a}, {"T_a", row.t_a}, {"I_a", row.i_a}, {"Y", row.y},
                          {"Y_over_Ysph", row.ratio}});
    } else {
      rows.push_back(Json{{"k", row.k}, {"a", row.a}, {"error", row.error}});
    }
  }
  return Json{{"n", r.n},
              {"y_sph", r.y_sph},
              {"rows", rows},
              {"verdict",
               Json{{"increasing", r.increasing},
                    {"below_one", r.below_one},
                    {"final_ratio", r.final_ratio},
                    {"converging", r.converging()}}}};
}

Json to_json(const PortraitSet& set) {
  Json curves = Json::array();
  for (const PortraitCurve& c : set.curves) {
    Json pts = Json::array();
    for (const PlanePoint& p : c.points) {
      pts.push_back(Json::array({round_significant(p[0], 9), round_significant(p[1], 9)}));
    }
    curves.push_back(Json{{"label", c.label},
                          {"a", c.a ? Json(round_significant(*c.a, 9)) : Json(nullptr)},
                          {"closed", c.closed},
                          {"points", pts}});
  }
  Json markers = Json::array();
  for (const PortraitMarker& m : set.markers) {
    markers.push_back(Json{{"label", m.label}, {"v", round_significant(m.v, 9)}, {"v1", round_significant(m.v1, 9)}});
  }
  return Json{{"n", set.n}, {"curves", curves}, {"markers", markers}};
}

Json to_json(const SpectrumReport& r) {
  return Json{{"tag", r.tag},
              {"a", r.a ? Json(*r.a) : Json(nullptr)},
              {"copies", r.copies},
              {"circumference", r.circumference},
              {"grid", r.grid},
              {"eigenvalues", r.eigenvalues},
              {"negative_count", r.negative_count},
              {"near_zero", r.near_zero},
              {"largest_magnitude", r.largest_magnitude},
              {"translation_correlation", r.translation_correlation}};
}

Json to_json(const MetricCount& c) { return Json{{"k", c.k}, {"delaunay_periods", c.delaunay_periods}}; }

Json to_json(const SelfcheckReport& r) {
  Json checks = Json::array();
  Json failures = Json::array();
  for (const CheckResult& c : r.checks) {
    checks.push_back(check_json(c));
    if (!c.passed) failures.push_back(check_json(c));
  }
  const MuAdjudication& mu = r.mu;
  const ExponentAdjudication& ex = r.exponent;
  const EnergyExponentAdjudication& en = r.energy_exponent;
  return Json{{"n", r.n},
              {"passed", r.all_passed()},
              {"mu_adjudication",
               Json{{"mu_quartic", mu.mu_quartic},
                    {"mu_plus8", number(mu.mu_plus8)},
                    {"mu_minus8", number(mu.mu_minus8)},
                    {"quartic_residual_plus8", number(mu.quartic_residual_plus8)},
                    {"quartic_residual_minus8", number(mu.quartic_residual_minus8)},
                    {"t_cyl_extrapolated", mu.t_cyl_extrapolated},
                    {"rel_err_plus8", number(mu.rel_err_plus8)},
                    {"rel_err_minus8", number(mu.rel_err_minus8)},
                    {"matching", mu.matching}}},
              {"exponent_adjudication",
               Json{{"a", ex.a},
                    {"q_direct", ex.q_direct},
                    {"y_four_over_n", ex.y_four_over_n},
                    {"y_printed", ex.y_printed},
                    {"rel_err_four_over_n", ex.rel_err_four_over_n},
                    {"rel_err_printed", ex.rel_err_printed},
                    {"matching", ex.matching}}},
              {"energy_exponent_adjudication",
               Json{{"h_cyl", en.h_cyl},
                    {"closed_quarter", en.closed_quarter},
                    {"closed_eighth", en.closed_eighth},
                    {"rel_err_quarter", en.rel_err_quarter},
                    {"rel_err_eighth", en.rel_err_eighth},
                    {"matching", en.matching}}},
              {"checks", checks},
              {"failures", failures}};
}

namespace {

void state_rows(std::ostream& os, const DimensionParams& P, const std::vector<CylinderState>& states) {
  os << "t,v,v1,v2,v3,H\n";
  for (const CylinderState& s : states) {
    os << format_number(s.t) << ',' << format_number(s.v) << ',' << format_number(s.v1) << ','
       << format_number(s.v2) << ',' << format_number(s.v3) << ',' << format_number(hamiltonian(P, s)) << '\n';
  }
}

}  // namespace

void write_orbit_csv(std::ostream& os, const Provenance& p, const DimensionParams& P, const DelaunayOrbit& o) {
  os << provenance_line(p) << '\n';
  state_rows(os, P, o.samples);
}

void write_trajectory_csv(std::ostream& os, const Provenance& p, const DimensionParams& P, const Trajectory& tr) {
  os << provenance_line(p) << '\n';
  state_rows(os, P, tr.samples());
}

void write_orbit_steps_csv(std::ostream& os, const Provenance& p, const DimensionParams& P, const DelaunayOrbit& o) {
  os << provenance_line(p) << '\n';
  std::vector<CylinderState> states = o.from_max.samples();
  const auto& tail = o.from_min.samples();
  for (const CylinderState& s : tail) {
    if (states.empty() || s.t > states.back().t) states.push_back(s);
  }
  state_rows(os, P, states);
}

void write_sweep_csv(std::ostream& os, const Provenance& p, const DimensionParams& P, const SweepReport& r) {
  os << provenance_line(p) << "\na,b,T_a,eps_a,H,I_a,defect,Y,Y_over_Ysph,max_drift,sup_v,status\n";
  for (const SweepPoint& pt : r.points) {
    os << format_number(pt.a);
    if (pt.orbit) {
      const DelaunayOrbit& o = *pt.orbit;
      const double y = invariant_value(P, o);
      for (double x : {o.b, o.t_a, o.eps_a, o.h, o.i_a, o.defect, y, y / P.y_sph, o.max_drift, o.sup_v}) {
        os << ',' << format_number(x);
      }
      os << ",ok\n";
    } else {
      os << ",,,,,,,,,,," << (pt.failure ? to_string(*pt.failure) : "failed") << '\n';
    }
  }
}

void write_convergence_csv(std::ostream& os, const Provenance& p, const ConvergenceReport& r) {
  os << provenance_line(p) << "\na,T_a,I_a,Y,Y_over_Ysph\n";
  for (const ConvergenceRow& row : r.rows) {
    os << format_number(row.a);
    if (row.ok) {
      os << ',' << format_number(row.t_a) << ',' << format_number(row.i_a) << ',' << format_number(row.y) << ','
         << format_number(row.ratio) << '\n';
    } else {
      os << ",,,,\n";
    }
  }
}

void write_portrait_csv(std::ostream& os, const Provenance& p, const PortraitSet& set) {
  os << provenance_line(p) << "\ncurve_id,label,a,v,v1\n";
  for (std::size_t i = 0; i < set.curves.size(); ++i) {
    const PortraitCurve& c = set.curves[i];
    const std::string a = c.a ? format_number(*c.a, 9) : "";
    for (const PlanePoint& pt : c.points) {
      os << i << ',' << csv_escape(c.label) << ',' << a << ',' << format_number(pt[0], 9) << ','
         << format_number(pt[1], 9) << '\n';
    }
  }
  for (const PortraitMarker& m : set.markers) {
    os << "marker," << csv_escape(m.label) << ",," << format_number(m.v, 9) << ',' << format_number(m.v1, 9) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const Provenance& p, const SpectrumReport& r) {
  os << provenance_line(p) << "\nindex,eigenvalue\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) os << i << ',' << format_number(r.eigenvalues[i]) << '\n';
}

void write_json(std::ostream& os, const Json& doc) { os << doc.dump(2) << '\n'; }

}  // namespace qdelaunay
