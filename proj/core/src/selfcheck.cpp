#include "qdelaunay/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qdelaunay/convergence.hpp"
#include "qdelaunay/cylinder_dynamics.hpp"
#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/phase_portrait.hpp"
#include "qdelaunay/q_functionals.hpp"
#include "qdelaunay/stability.hpp"

namespace qdelaunay {

namespace {

std::string describe(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

class Collector {
 public:
  explicit Collector(std::vector<CheckResult>& out) : out_(out) {}

  void bound(const std::string& module, const std::string& name, double value, double threshold,
             std::string detail = {}) {
    out_.push_back({module, name, value <= threshold, value, threshold, std::move(detail)});
  }
  void flag(const std::string& module, const std::string& name, bool ok, std::string detail = {}) {
    out_.push_back({module, name, ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)});
  }
  // Runs body; a thrown library error becomes a failed check named after the group.
  void guarded(const std::string& module, const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      out_.push_back({module, name, false, 0.0, 0.0, std::string(to_string(e.kind())) + ": " + e.what()});
    }
  }

 private:
  std::vector<CheckResult>& out_;
};

std::vector<double> linear_grid(double lo, double hi, int count) {
  std::vector<double> g;
  for (int i = 0; i < count; ++i) g.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  return g;
}

double relative(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace

bool SelfcheckReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<CheckResult> SelfcheckReport::failures() const {
  std::vector<CheckResult> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [](const CheckResult& c) { return !c.passed; });
  return out;
}

double extrapolate_to_zero(const std::array<double, 3>& x, const std::array<double, 3>& y) {
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    double w = 1.0;
    for (int j = 0; j < 3; ++j) {
      if (j != i) w *= (0.0 - x[j]) / (x[i] - x[j]);
    }
    sum += w * y[i];
  }
  return sum;
}

MuAdjudication adjudicate_mu(const DimensionParams& params) {
  MuAdjudication out;
  const MuVariants v = mu_closed_forms(params.n);
  out.mu_quartic = params.mu;
  out.mu_plus8 = v.printed;
  out.mu_minus8 = v.linearized;
  out.quartic_residual_plus8 = mu_quartic_residual(params, v.printed);
  out.quartic_residual_minus8 = mu_quartic_residual(params, v.linearized);
  const std::array<double, 3> deltas{1e-2, 1e-3, 1e-4};
  std::array<double, 3> periods{};
  for (int i = 0; i < 3; ++i) periods[i] = shoot(params, params.v_cyl + deltas[i]).t_a;
  out.t_cyl_extrapolated = extrapolate_to_zero(deltas, periods);
  const double two_pi = 2.0 * std::numbers::pi;
  out.rel_err_plus8 = std::isfinite(v.printed) && v.printed > 0.0
                          ? relative(two_pi / v.printed, out.t_cyl_extrapolated)
                          : std::numeric_limits<double>::infinity();
  out.rel_err_minus8 = relative(two_pi / v.linearized, out.t_cyl_extrapolated);
  if (out.rel_err_minus8 <= 1e-3 && out.rel_err_minus8 < out.rel_err_plus8) {
    out.matching = "minus8";
  } else if (out.rel_err_plus8 <= 1e-3) {
    out.matching = "plus8";
  } else {
    out.matching = "none";
  }
  return out;
}

ExponentAdjudication adjudicate_exponent(const DimensionParams& params, double a) {
  ExponentAdjudication out;
  const DelaunayOrbit o = shoot(params, a);
  out.a = a;
  out.q_direct = q_energy_radial(params, RadialProfile::from_orbit(o));
  out.y_four_over_n = invariant_value(params, o);
  out.y_printed = printed_invariant_value(params, o.i_a);
  out.rel_err_four_over_n = relative(out.y_four_over_n, out.q_direct);
  out.rel_err_printed = relative(out.y_printed, out.q_direct);
  if (out.rel_err_four_over_n <= 1e-6) {
    out.matching = "4/n";
  } else if (out.rel_err_printed <= 1e-6) {
    out.matching = "printed";
  } else {
    out.matching = "none";
  }
  return out;
}

EnergyExponentAdjudication adjudicate_energy_exponent(const DimensionParams& params) {
  EnergyExponentAdjudication out;
  const double nd = params.n;
  const double base = nd * (nd - 4.0) / (nd * nd - 4.0);
  const double pre = -nd * (nd - 4.0) * (nd - 4.0) / 8.0;
  out.h_cyl = hamiltonian(params, CylinderState{0.0, params.v_cyl, 0.0, 0.0, 0.0});
  out.closed_quarter = pre * std::pow(base, (nd - 4.0) / 4.0);
  out.closed_eighth = pre * std::pow(base, (nd - 4.0) / 8.0);
  out.rel_err_quarter = relative(out.h_cyl, out.closed_quarter);
  out.rel_err_eighth = relative(out.h_cyl, out.closed_eighth);
  if (out.rel_err_quarter <= 1e-12) {
    out.matching = "(n-4)/4";
  } else if (out.rel_err_eighth <= 1e-12) {
    out.matching = "(n-4)/8";
  } else {
    out.matching = "none";
  }
  return out;
}

SelfcheckReport run_selfcheck(const DimensionParams& P, const SelfcheckOptions& opt) {
  SelfcheckReport rep;
  rep.n = P.n;
  Collector c(rep.checks);
  std::mt19937_64 rng(opt.seed);

  // dimension-params
  c.guarded("dimension-params", "closed-form solutions", [&] {
    std::vector<double> ts = linear_grid(-10.0, 10.0, 100);
    const double sph = ode_residual(P, [&](double t) { return v_sph_derivatives(P, t); }, ts);
    const double cyl = ode_residual(P, [&](double) { return std::array<double, 5>{P.v_cyl, 0, 0, 0, 0}; }, ts);
    c.bound("dimension-params", "ode residual of v_sph", sph, 1e-9);
    c.bound("dimension-params", "ode residual of v_cyl", cyl, 1e-9);
  });
  c.guarded("dimension-params", "sphere closure", [&] {
    const SphereClosure sc = sphere_closure_details(P, 1e-12);
    c.bound("dimension-params", "sphere closure vs vol_s", sc.rel_err_volume, 1e-10);
    c.bound("dimension-params", "sphere closure vs Gamma closed form", sc.rel_err_gamma, 1e-10);
  });
  c.bound("dimension-params", "mu is a root of the quartic", mu_quartic_residual(P, P.mu),
          1e-12 * (P.c2 * P.mu * P.mu + std::abs(P.c0 - P.k_lin)));

  // cylinder-dynamics
  rep.energy_exponent = adjudicate_energy_exponent(P);
  c.bound("cylinder-dynamics", "H(v_cyl) closed form", rep.energy_exponent.rel_err_quarter, 1e-12,
          "exponent matching: " + rep.energy_exponent.matching);
  c.guarded("cylinder-dynamics", "H(v_sph) = 0", [&] {
    double worst = 0.0;
    for (double t : linear_grid(-6.0, 6.0, 25)) {
      const auto d = v_sph_derivatives(P, t);
      const CylinderState s{t, d[0], d[1], d[2], d[3]};
      worst = std::max(worst, std::abs(hamiltonian(P, s)) / hamiltonian_scale(P, s));
    }
    c.bound("cylinder-dynamics", "H(v_sph) = 0", worst, 1e-12);
  });
  c.guarded("cylinder-dynamics", "energy conserved by the vector field", [&] {
    std::uniform_real_distribution<double> pos(0.05, 1.2), sym(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const CylinderState s{0.0, pos(rng), sym(rng), sym(rng), sym(rng)};
      worst = std::max(worst, std::abs(hamiltonian_rate(P, s, vector_field(P, s))) / hamiltonian_scale(P, s));
    }
    c.bound("cylinder-dynamics", "dH/dt along the vector field", worst, 1e-12);
  });

  // ode-integrator
  c.guarded("ode-integrator", "sphere trajectory", [&] {
    // perturbations grow like e^{n t / 2} along the loop
    const double span = 25.0 / P.n;
    c.bound("ode-integrator", "integrated v_sph matches closed form on |t| <= " + describe(span),
            sphere_integration_deviation(P, span), 1e-7);
  });

  // delaunay-solver, and everything built on the sweep orbits
  const double a_lo = P.v_cyl + 0.05 * (0.99 - P.v_cyl);
  const std::vector<double> grid = linear_grid(a_lo, 0.99, opt.sweep_points);
  const SweepReport sw = sweep(P, grid, {}, opt.threads);
  std::vector<const DelaunayOrbit*> orbits;
  for (const SweepPoint& pt : sw.points) {
    if (pt.orbit) orbits.push_back(&*pt.orbit);
  }
  {
    std::string failed;
    for (const SweepPoint& pt : sw.points) {
      if (!pt.orbit) failed += " a=" + describe(pt.a) + " (" + pt.message + ")";
    }
    c.bound("delaunay-solver", "sweep failures", double(sw.failures()), 0.0, failed);
  }
  c.flag("delaunay-solver", "period strictly increasing", sw.period_increasing);
  c.flag("delaunay-solver", "minimum strictly decreasing", sw.eps_decreasing);
  c.flag("delaunay-solver", "energy in (h_cyl, 0)", sw.energy_in_range);
  c.flag("delaunay-solver", "phase curves nested, non-crossing", sw.curves_nested);
  double worst_defect = 0.0, worst_sup = 0.0, worst_drift = 0.0;
  int multi_root = 0;
  for (const DelaunayOrbit* o : orbits) {
    worst_defect = std::max(worst_defect, o->defect);
    worst_sup = std::max(worst_sup, o->sup_v);
    worst_drift = std::max(worst_drift, o->max_drift / std::max(1.0, std::abs(o->h)));
    if (o->root_candidates != 1) ++multi_root;
  }
  c.bound("delaunay-solver", "periodicity defect", worst_defect, 1e-6);
  c.bound("delaunay-solver", "sup v", worst_sup, 1.0 + 1e-8);
  c.bound("ode-integrator", "energy drift / max(1, |h|)", worst_drift, 1e-8);
  c.bound("delaunay-solver", "orbits with other than one shooting root", double(multi_root), 0.0);
  c.guarded("delaunay-solver", "tolerance refinement", [&] {
    const double a = grid[grid.size() / 2];
    ShootingOptions fine;
    fine.tol = 1e-10;
    const double t1 = shoot(P, a).t_a;
    const double t2 = shoot(P, a, fine).t_a;
    c.bound("delaunay-solver", "t_a at tol vs tol/10", relative(t1, t2), 1e-7);
  });
  c.guarded("delaunay-solver", "compact convergence to v_sph", [&] {
    std::vector<double> dist;
    for (int k = 2; k <= 4; ++k) {
      const DelaunayOrbit o = shoot(P, 1.0 - std::pow(10.0, -k));
      double worst = 0.0;
      for (double t : linear_grid(-2.0, 2.0, 81)) worst = std::max(worst, std::abs(o.state_at(t).v - v_sph_profile(P, t)));
      dist.push_back(worst);
    }
    c.flag("delaunay-solver", "max |v_a - v_sph| on [-2, 2] decreases for a = 1 - 10^-k, k = 2..4",
           dist[1] < dist[0] && dist[2] < dist[1], describe(dist[0]) + " " + describe(dist[1]) + " " + describe(dist[2]));
  });
  c.guarded("delaunay-solver", "cylinder limit", [&] {
    rep.mu = adjudicate_mu(P);
    c.bound("delaunay-solver", "extrapolated period vs t_cyl", relative(P.t_cyl, rep.mu.t_cyl_extrapolated), 1e-3,
            "closed form matching: " + rep.mu.matching);
  });

  // q-functionals
  {
    double worst_two_path = 0.0, worst_grad = 0.0;
    bool below = true;
    for (const DelaunayOrbit* o : orbits) {
      c.guarded("q-functionals", "orbit functional a=" + describe(o->a), [&] {
        const RadialProfile u = RadialProfile::from_orbit(*o);
        const double y = invariant_value(P, *o);
        worst_two_path = std::max(worst_two_path, relative(q_energy_radial(P, u), y));
        if (!(y < P.y_sph)) below = false;
        for (int m = 1; m <= 3; ++m) {
          std::vector<double> w(u.size());
          for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::cos(2.0 * std::numbers::pi * m * double(j) / double(w.size()));
          worst_grad = std::max(worst_grad, std::abs(q_gradient_radial(P, u, w)));
        }
      });
    }
    c.bound("q-functionals", "two-path identity", worst_two_path, 1e-6);
    c.flag("q-functionals", "Y(a) < y_sph", below);
    c.bound("q-functionals", "gradient at orbits", worst_grad, 1e-5);
  }
  c.guarded("q-functionals", "finite-difference gradient", [&] {
    const GradientCheck g = gradient_fd_check(P, opt.seed);
    c.bound("q-functionals", "gradient vs central differences", g.worst_relative, 1e-5,
            std::to_string(g.checks) + " directions");
  });
  c.guarded("q-functionals", "homogeneity", [&] {
    std::vector<double> values = random_band_limited(rng, 256, 8, 0.1);
    for (double& x : values) x = P.v_cyl * (1.0 + x);
    const RadialProfile u = RadialProfile::from_values(values, 2.0 * P.t_cyl);
    const double q = q_energy_radial(P, u);
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 10.0}) worst = std::max(worst, relative(q_energy_radial(P, u.scaled(lambda)), q));
    c.bound("q-functionals", "scale invariance", worst, 1e-12);
  });
  c.guarded("q-functionals", "cylinder constant-Q identity", [&] {
    const double t = 3.0 * P.t_cyl;
    c.bound("q-functionals", "cylinder functional vs closed form",
            relative(q_energy_radial(P, RadialProfile::constant(P.v_cyl, t)), cylinder_invariant_value(P, t)), 1e-12);
  });
  rep.exponent = adjudicate_exponent(P, 0.99);
  c.flag("q-functionals", "invariant exponent adjudication", rep.exponent.matching == "4/n",
         "matching: " + rep.exponent.matching);
  {
    const std::array<double, 4> ratios{0.5, 1.5, 2.5, 3.0};
    const std::array<int, 4> expected{1, 2, 3, 3};
    bool ok = true;
    for (int i = 0; i < 4; ++i) ok = ok && count_constant_q_metrics(P, ratios[i] * P.t_cyl).k == expected[i];
    c.flag("q-functionals", "metric counts at T/t_cyl = 0.5, 1.5, 2.5, 3", ok);
    int prev = 0;
    bool steps_ok = true;
    for (int i = 1; i <= 600; ++i) {
      const double ratio = 0.01 * i;
      const int k = count_constant_q_metrics(P, ratio * P.t_cyl).k;
      const int want = std::max(1, int(std::ceil(ratio - 1e-9)));
      if (k != want || k < prev || k > prev + 1) steps_ok = false;
      prev = k;
    }
    c.flag("q-functionals", "metric count is a unit staircase in T", steps_ok);
  }
  c.guarded("q-functionals", "metric construction", [&] {
    // 2.25 t_cyl lies in the k = 3 band and stays within reach of a <= 1 - 1e-6 up to n = 12
    for (double ratio : {1.5, 2.25}) {
      const double t = ratio * P.t_cyl;
      double worst = 0.0;
      for (double period : count_constant_q_metrics(P, t).delaunay_periods) {
        worst = std::max(worst, relative(orbit_for_period(P, period).t_a, period));
      }
      c.bound("q-functionals", "orbit_for_period at T = " + describe(ratio) + " t_cyl", worst, 1e-8);
    }
  });

  // stability
  {
    std::uniform_real_distribution<double> ratio(0.1, 5.0);
    int mismatches = 0;
    for (int i = 0; i < 50; ++i) {
      double r = ratio(rng);
      if (std::abs(r - std::round(r)) < 1e-6) r += 2e-6;
      const double t = r * P.t_cyl;
      if (cylinder_negative_modes(P, t) != cylinder_negative_modes_closed_form(P, t)) ++mismatches;
    }
    c.bound("stability", "cylinder mode enumeration vs 2 floor(T/t_cyl) + 1", mismatches, 0.0);
  }
  c.guarded("stability", "cylinder spectrum", [&] {
    const double t = 1.5 * P.t_cyl;
    const SpectrumReport s128 = cylinder_spectrum(P, t, 128);
    const SpectrumReport s256 = cylinder_spectrum(P, t, 256);
    const int want = cylinder_negative_modes(P, t);
    c.flag("stability", "cylinder negative count (N = 128, 256) vs symbol",
           s128.negative_count == want && s256.negative_count == want);
    c.bound("stability", "lowest cylinder eigenvalue vs symbol", relative(s256.eigenvalues.front(), P.c0 - P.k_lin),
            1e-8);
  });
  {
    int bad = 0;
    for (const DelaunayOrbit* o : orbits) {
      for (int l = 1; l <= 3; ++l) bad += nodal_arcs(*o, l) != l;
    }
    c.bound("stability", "nodal arcs != l", bad, 0.0);
  }
  if (!orbits.empty()) {
    const DelaunayOrbit& mid = *orbits[orbits.size() / 2];
    c.guarded("stability", "delaunay spectra", [&] {
      for (int l = 1; l <= 3; ++l) {
        const SpectrumReport s = discretized_spectrum(P, mid, l);
        c.flag("stability", "negative count >= l, l = " + std::to_string(l), s.negative_count >= l,
               "count " + std::to_string(s.negative_count));
        c.bound("stability", "translation eigenvalue, l = " + std::to_string(l),
                std::abs(s.near_zero) / s.largest_magnitude, 1e-4);
      }
    });
    c.guarded("stability", "variational residual", [&] {
      c.bound("stability", "variational residual a=" + describe(mid.a), variational_residual(P, mid), 1e-7);
      c.bound("stability", "variational residual a=" + describe(orbits.back()->a),
              variational_residual(P, *orbits.back()), 1e-6);
    });
  }

  // phase-portrait
  c.guarded("phase-portrait", "portrait", [&] {
    const std::vector<double> as = linear_grid(a_lo + 0.1 * (0.99 - a_lo), 0.97, 3);
    PortraitOptions po;
    po.include_sphere = true;
    po.threads = opt.threads;
    const PortraitChecks pc = check_portrait(P, build_portrait(P, as, po));
    c.bound("phase-portrait", "closed curve closure", pc.worst_closure, 1e-6);
    c.bound("phase-portrait", "v' -> -v' symmetry", pc.worst_asymmetry, 1e-6);
    c.flag("phase-portrait", "cylinder marker at (v_cyl, 0)", pc.cylinder_marker_ok);
    c.flag("phase-portrait", "curves nested", pc.nested);
    c.flag("phase-portrait", "curves inside the spherical loop", pc.inside_sphere);
  });

  // cli-reporting
  c.guarded("cli-reporting", "convergence study", [&] {
    const ConvergenceReport cr = convergence_study(P, 3, {}, opt.threads);
    c.flag("cli-reporting", "Y/y_sph increasing and below 1 (k_max = 3)", cr.converging(),
           "final ratio " + describe(cr.final_ratio));
  });
  return rep;
}

}  // namespace qdelaunay
