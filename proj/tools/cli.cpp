#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "qdelaunay/convergence.hpp"
#include "qdelaunay/delaunay_solver.hpp"
#include "qdelaunay/dimension_params.hpp"
#include "qdelaunay/errors.hpp"
#include "qdelaunay/phase_portrait.hpp"
#include "qdelaunay/q_functionals.hpp"
#include "qdelaunay/report_io.hpp"
#include "qdelaunay/selfcheck.hpp"
#include "qdelaunay/stability.hpp"
#include "qdelaunay/version.hpp"

namespace qdelaunay::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised after the output is written when part of the work did not converge.
struct PartialFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  int n = 0;
  double tol = 1e-9;
  std::string out;
  std::string format;
  bool json_mirror = false;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, Common& c, bool with_tol) {
  sub->add_option("--n", c.n, "dimension (>= 5)")->required();
  if (with_tol) sub->add_option("--tol", c.tol, "shooting tolerance on v'''(t*)")->check(CLI::PositiveNumber);
  sub->add_option("--out", c.out, "primary output file (default: standard output)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--json", c.json_mirror, "also write a JSON mirror next to --out (alone: JSON output)");
  sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

ShootingOptions shooting(const Common& c) {
  ShootingOptions opt;
  opt.tol = c.tol;
  return opt;
}

Provenance provenance(const std::string& command, const Common& c) {
  const ShootingOptions opt = shooting(c);
  return Provenance{command, c.n, opt.integrator_rtol(), opt.integrator_atol(), opt.tol};
}

std::ofstream open_file(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path + " for writing");
  return f;
}

using CsvWriter = std::function<void(std::ostream&)>;

// Writes the primary document in the requested format, plus the JSON mirror.
void emit(const Common& c, const std::string& default_format, const CsvWriter& csv, const Json& doc,
          std::ostream& out) {
  std::string format = c.format.empty() ? default_format : c.format;
  if (c.json_mirror && c.out.empty()) format = "json";
  if (format == "csv" && !csv) throw UsageError("this subcommand only produces JSON");
  const auto write_primary = [&](std::ostream& os) {
    if (format == "csv") {
      csv(os);
    } else {
      write_json(os, doc);
    }
  };
  if (c.out.empty()) {
    write_primary(out);
  } else {
    std::ofstream f = open_file(c.out);
    write_primary(f);
  }
  if (c.json_mirror && !c.out.empty() && format == "csv") {
    std::filesystem::path mirror(c.out);
    mirror.replace_extension(".json");
    std::ofstream f = open_file(mirror.string());
    write_json(f, doc);
  }
}

Json with_provenance(const Provenance& p, Json body) {
  Json doc{{"provenance", provenance_json(p)}};
  for (auto& [k, v] : body.items()) doc[k] = v;
  return doc;
}

std::string fmt(double x) { return format_number(x); }

void check_a(const DimensionParams& P, double a) {
  if (!(a > P.v_cyl && a < 1.0)) throw UsageError("a = " + fmt(a) + " outside (v_cyl, 1) = (" + fmt(P.v_cyl) + ", 1)");
}

// ---- subcommands ----

int cmd_params(const Common& c, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  emit(c, "json", nullptr, with_provenance(provenance("params", c), to_json(P)), out);
  return kSuccess;
}

int cmd_solve(const Common& c, double a, const std::string& summary_path, bool steps, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  check_a(P, a);
  const DelaunayOrbit o = shoot(P, a, shooting(c));
  const Provenance prov = provenance("solve", c);
  const Json summary = orbit_summary_json(P, o);
  const Json doc = with_provenance(prov, Json{{"summary", summary}, {"samples", orbit_samples_json(o)}});
  const CsvWriter csv = [&](std::ostream& os) {
    if (steps) {
      write_orbit_steps_csv(os, prov, P, o);
    } else {
      write_orbit_csv(os, prov, P, o);
    }
  };
  emit(c, "csv", csv, doc, out);
  if (!summary_path.empty()) {
    std::ofstream f = open_file(summary_path);
    write_json(f, with_provenance(prov, summary));
  }
  return kSuccess;
}

int cmd_sweep(const Common& c, std::vector<double> grid, std::optional<double> a_min, std::optional<double> a_max,
              int count, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  if (grid.empty()) {
    if (!a_min || !a_max || count < 1) throw UsageError("sweep needs --a or --a-min, --a-max and --count");
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? *a_min : *a_min + (*a_max - *a_min) * i / (count - 1));
  }
  for (double a : grid) check_a(P, a);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw UsageError("sweep grid must be strictly increasing");
  }
  const SweepReport r = sweep(P, grid, shooting(c), c.threads);
  const Provenance prov = provenance("sweep", c);
  emit(c, "csv", [&](std::ostream& os) { write_sweep_csv(os, prov, P, r); }, with_provenance(prov, to_json(P, r)),
       out);
  if (r.failures() > 0) throw PartialFailure(std::to_string(r.failures()) + " sweep point(s) failed");
  return kSuccess;
}

int cmd_period(const Common& c, std::optional<double> period, std::optional<double> ratio, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  if (period.has_value() == ratio.has_value()) throw UsageError("period needs exactly one of --T and --T-ratio");
  const double t = period ? *period : *ratio * P.t_cyl;
  const MetricCount mc = count_constant_q_metrics(P, t);
  Json metrics = Json::array();
  std::ostringstream csv;
  const Provenance prov = provenance("period", c);
  csv << provenance_line(prov) << "\nl,period,a,T_a,eps_a,Y\n";
  int failed = 0;
  for (std::size_t i = 0; i < mc.delaunay_periods.size(); ++i) {
    const int l = int(i) + 1;
    const double target = mc.delaunay_periods[i];
    try {
      const DelaunayOrbit o = orbit_for_period(P, target, 1e-9, shooting(c));
      const double y = invariant_value(P, o);
      metrics.push_back(Json{{"l", l}, {"period", target}, {"a", o.a}, {"T_a", o.t_a}, {"eps_a", o.eps_a}, {"Y", y}});
      csv << l << ',' << fmt(target) << ',' << fmt(o.a) << ',' << fmt(o.t_a) << ',' << fmt(o.eps_a) << ',' << fmt(y)
          << '\n';
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidParameter) throw;
      ++failed;
      metrics.push_back(Json{{"l", l}, {"period", target}, {"error", e.what()}});
      csv << l << ',' << fmt(target) << ",,,,\n";
    }
  }
  const Json doc = with_provenance(
      prov, Json{{"T", t},
                 {"T_over_t_cyl", t / P.t_cyl},
                 {"k", mc.k},
                 {"cylinder", Json{{"Y", cylinder_invariant_value(P, t)}}},
                 {"delaunay", metrics}});
  const std::string table = csv.str();
  emit(c, "csv", [&](std::ostream& os) { os << table; }, doc, out);
  if (failed > 0) throw PartialFailure(std::to_string(failed) + " Delaunay metric(s) could not be constructed");
  return kSuccess;
}

int cmd_convergence(const Common& c, int k_max, std::ostream& out) {
  if (k_max < 1 || k_max > 4) throw UsageError("--kmax must lie in 1..4");
  const DimensionParams P = make_params(c.n);
  const ConvergenceReport r = convergence_study(P, k_max, shooting(c), c.threads);
  const Provenance prov = provenance("convergence", c);
  emit(c, "csv", [&](std::ostream& os) { write_convergence_csv(os, prov, r); }, with_provenance(prov, to_json(r)),
       out);
  const bool all_rows = std::all_of(r.rows.begin(), r.rows.end(), [](const ConvergenceRow& row) { return row.ok; });
  if (!all_rows) throw PartialFailure("some convergence rows failed");
  return kSuccess;
}

int cmd_portrait(const Common& c, const std::vector<double>& as, bool sphere, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  for (double a : as) check_a(P, a);
  PortraitOptions po;
  po.include_sphere = sphere;
  po.threads = c.threads;
  const PortraitSet set = build_portrait(P, as, po, shooting(c));
  const Provenance prov = provenance("phase-portrait", c);
  emit(c, "json", [&](std::ostream& os) { write_portrait_csv(os, prov, set); }, with_provenance(prov, to_json(set)),
       out);
  return kSuccess;
}

int cmd_spectrum(const Common& c, std::optional<double> a, std::optional<double> period, std::optional<double> ratio,
                 int l, std::size_t grid, std::ostream& out) {
  const DimensionParams P = make_params(c.n);
  SpectrumReport r;
  if (a) {
    if (period || ratio) throw UsageError("spectrum takes either --a or a cylinder circumference");
    check_a(P, *a);
    r = discretized_spectrum(P, shoot(P, *a, shooting(c)), l, grid);
  } else {
    if (period.has_value() == ratio.has_value()) throw UsageError("spectrum needs --a, --T or --T-ratio");
    r = cylinder_spectrum(P, period ? *period : *ratio * P.t_cyl, grid);
  }
  const Provenance prov = provenance("spectrum", c);
  emit(c, "json", [&](std::ostream& os) { write_spectrum_csv(os, prov, r); }, with_provenance(prov, to_json(r)), out);
  return kSuccess;
}

int cmd_selfcheck(const Common& c, std::ostream& out, std::ostream& err) {
  const DimensionParams P = make_params(c.n);
  SelfcheckOptions so;
  so.threads = c.threads;
  const SelfcheckReport r = run_selfcheck(P, so);
  emit(c, "json", nullptr, with_provenance(provenance("selfcheck", c), to_json(r)), out);
  for (const CheckResult& f : r.failures()) {
    err << "selfcheck failed: [" << f.module << "] " << f.name << ": value " << fmt(f.value) << ", bound "
        << fmt(f.threshold) << (f.detail.empty() ? "" : " (" + f.detail + ")") << '\n';
  }
  return r.all_passed() ? kSuccess : kSelfcheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Delaunay-type constant Q-curvature metrics on S^1 x S^{n-1}", "qdelaunay"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Common c;
  double a = 0.0;
  std::string summary_path;
  std::vector<double> a_list;
  std::optional<double> a_min, a_max, period, ratio, a_opt;
  int count = 0;
  int k_max = 0;
  bool sphere = false;
  bool steps = false;
  int l = 1;
  std::size_t grid = 256;

  auto* params = app.add_subcommand("params", "print the dimension constants");
  add_common(params, c, false);

  auto* solve = app.add_subcommand("solve", "one Delaunay orbit with maximum a");
  add_common(solve, c, true);
  solve->add_option("--a", a, "maximum of the profile, in (v_cyl, 1)")->required();
  solve->add_option("--summary", summary_path, "write the summary JSON here");
  solve->add_flag("--steps", steps, "CSV of the accepted steps over [0, T_a/2] instead of one sampled period");

  auto* sw = app.add_subcommand("sweep", "orbits over a grid of a");
  add_common(sw, c, true);
  sw->add_option("--a", a_list, "explicit grid")->delimiter(',');
  sw->add_option("--a-min", a_min);
  sw->add_option("--a-max", a_max);
  sw->add_option("--count", count);

  auto* per = app.add_subcommand("period", "constant-Q metrics on the circle of circumference T");
  add_common(per, c, true);
  per->add_option("--T", period, "circumference")->check(CLI::PositiveNumber);
  per->add_option("--T-ratio", ratio, "circumference in units of t_cyl")->check(CLI::PositiveNumber);

  auto* conv = app.add_subcommand("convergence", "Y(a_k)/y_sph for a_k = 1 - 10^-k");
  add_common(conv, c, true);
  conv->add_option("--kmax", k_max, "1..4")->required();

  auto* port = app.add_subcommand("phase-portrait", "(v, v') curves of Delaunay orbits");
  add_common(port, c, true);
  port->add_option("--a", a_list, "comma separated maxima")->delimiter(',');
  port->add_flag("--sphere", sphere, "include the spherical loop");

  auto* spec = app.add_subcommand("spectrum", "lowest eigenvalues of the linearized operator");
  add_common(spec, c, true);
  spec->add_option("--a", a_opt, "Delaunay orbit maximum");
  spec->add_option("--T", period, "cylinder circumference")->check(CLI::PositiveNumber);
  spec->add_option("--T-ratio", ratio, "cylinder circumference in units of t_cyl")->check(CLI::PositiveNumber);
  spec->add_option("--l", l, "number of periods")->check(CLI::PositiveNumber);
  spec->add_option("--grid", grid, "grid size, power of two >= 128");

  auto* self = app.add_subcommand("selfcheck", "run every invariant and adjudication");
  add_common(self, c, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kSuccess : kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    if (name == "params") return cmd_params(c, out);
    if (name == "solve") return cmd_solve(c, a, summary_path, steps, out);
    if (name == "sweep") return cmd_sweep(c, a_list, a_min, a_max, count, out);
    if (name == "period") return cmd_period(c, period, ratio, out);
    if (name == "convergence") return cmd_convergence(c, k_max, out);
    if (name == "phase-portrait") return cmd_portrait(c, a_list, sphere, out);
    if (name == "spectrum") return cmd_spectrum(c, a_opt, period, ratio, l, grid, out);
    if (name == "selfcheck") return cmd_selfcheck(c, out, err);
  } catch (const UsageError& e) {
    err << "qdelaunay " << name << ": " << e.what() << '\n';
    return kUsage;
  } catch (const PartialFailure& e) {
    err << "qdelaunay " << name << " (n=" << c.n << "): " << e.what() << '\n';
    return kNonConvergence;
  } catch (const Error& e) {
    err << "qdelaunay " << name << " (n=" << c.n << "): " << to_string(e.kind()) << ": " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidParameter ? kUsage : kNonConvergence;
  }
  return kUsage;
}

}  // namespace qdelaunay::cli
