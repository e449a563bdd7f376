// Command-line driver: convergence sweeps, long-time runs, steady solves and a
// quick self check. Every run writes its outputs and a run.meta under --out.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "sdflow/harness.hpp"

using namespace sdflow;
namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> case_id, scheme, h, dt, theta, T, out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->set_help_flag("--help", "print this help");  // -h is taken by --h
  cmd->add_option("--config", o.config_path, "key = value settings file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--case", o.case_id, "manufactured case: 1, 2 or 3");
  cmd->add_option("--scheme", o.scheme, "bdf2 or amb2");
  cmd->add_option("--h", o.h, "mesh sizes, comma separated (e.g. 1/16,1/32)");
  cmd->add_option("--dt", o.dt, "time step (longtime only)");
  cmd->add_option("--theta", o.theta, "dt = h^theta");
  cmd->add_option("--T", o.T, "final time");
  cmd->add_option("--out", o.out, "output directory");
}

RunConfig resolve(const Overrides& o) {
  Settings s = o.config_path.empty() ? Settings{} : read_settings(o.config_path);
  const std::pair<const char*, const std::optional<std::string>*> flags[] = {
      {"case", &o.case_id}, {"scheme", &o.scheme}, {"h", &o.h},  {"dt", &o.dt},
      {"theta", &o.theta},  {"T", &o.T},           {"output_dir", &o.out}};
  for (const auto& [key, value] : flags) {
    if (*value) s[key] = **value;
  }
  return resolve_config(s);
}

ManufacturedCase manufactured(const RunConfig& c) { return {c.case_id, c.scheme.params}; }

void write_meta(const RunConfig& c, const std::string& extra) {
  const fs::path dir(c.output_dir);
  fs::create_directories(dir);
  std::ofstream out(dir / "run.meta", std::ios::binary);
  out << describe(c) << extra;
  if (!out) throw std::runtime_error("cannot write " + (dir / "run.meta").string());
}

std::string rate_line(const char* name, const ConvergenceRate& r) {
  std::ostringstream s;
  s << name << " = " << format_number(r.r_phi) << ',' << format_number(r.r_u) << ','
    << format_number(r.r_p) << '\n';
  return s.str();
}

void print_report(const ConvergenceReport& rep) {
  std::printf("%8s %12s %12s %12s %12s\n", "h", "dt", "e_phi", "e_u", "e_p");
  for (const auto& l : rep.levels) {
    std::printf("  1/%-5d %12.4e %12.4e %12.4e %12.4e\n", l.n, l.dt, l.e_phi, l.e_u, l.e_p);
  }
  for (std::size_t k = 0; k < rep.rates.size(); ++k) {
    const auto& r = rep.rates[k];
    std::printf("  rate 1/%d->1/%d   phi %.3f  u %.3f  p %.3f\n", rep.levels[k].n,
                rep.levels[k + 1].n, r.r_phi, r.r_u, r.r_p);
  }
  std::printf("r_avg phi %.3f  u %.3f  p %.3f\n", rep.r_avg.r_phi, rep.r_avg.r_u,
              rep.r_avg.r_p);
}

// Errors of each level against h.
void plot_levels(const ConvergenceReport& rep, const fs::path& path) {
  PlotSeries phi{"e_phi", {}, {}}, u{"e_u", {}, {}}, p{"e_p", {}, {}};
  for (const auto& l : rep.levels) {
    for (auto* s : {&phi, &u, &p}) s->x.push_back(l.h);
    phi.y.push_back(l.e_phi);
    u.y.push_back(l.e_u);
    p.y.push_back(l.e_p);
  }
  emit_plot({phi, u, p}, path, "h");
}

std::string level_meta(const ConvergenceReport& rep) {
  std::ostringstream s;
  for (const auto& l : rep.levels) {
    s << "dt_snapped[1/" << l.n << "] = " << format_number(l.dt) << '\n';
  }
  s << rate_line("r_avg", rep.r_avg);
  return s.str();
}

int cmd_converge(const RunConfig& c) {
  if (c.dt_given) std::cerr << "note: converge derives dt from h^theta; dt is ignored\n";
  const ConvergenceReport rep =
      run_convergence(manufactured(c), c.scheme, c.subdivisions, c.theta, c.T);
  const fs::path dir(c.output_dir);
  emit_csv(rep, dir / "report.csv");
  plot_levels(rep, dir / "errors.svg");
  write_meta(c, level_meta(rep));
  print_report(rep);
  return 0;
}

int cmd_longtime(RunConfig c) {
  const int n = c.subdivisions.front();
  if (c.subdivisions.size() > 1) std::cerr << "note: longtime uses the first mesh size only\n";
  if (!c.dt_given) c.scheme.dt = snap_time_step(1.0 / n, c.theta, c.T);
  const fs::path dir(c.output_dir);
  try {
    const TransientResult r = run_longtime(manufactured(c), c.scheme, n, c.T, c.sample_every);
    emit_csv(r.series, dir / "series.csv");
    emit_plot(r.series, dir / "errors.svg");
    std::ostringstream extra;
    extra << "dt_snapped = " << format_number(c.scheme.dt) << '\n'
          << "steps = " << r.steps << '\n'
          << "max_div = " << format_number(r.max_div) << '\n';
    write_meta(c, extra.str());
    const auto& last = r.series.back();
    std::printf("h=1/%d dt=%.4e steps=%ld  final e_phi %.4e  e_u %.4e  e_p %.4e\n", n,
                c.scheme.dt, r.steps, last.e_phi, last.e_u, last.e_p);
  } catch (const StabilityError& e) {
    write_meta(c, "aborted_at_step = " + std::to_string(e.step()) + '\n');
    throw;
  }
  return 0;
}

int cmd_steady(const RunConfig& c) {
  const ManufacturedCase mc = manufactured(c);
  if (!mc.steady()) throw std::invalid_argument("steady needs a time-independent case (2)");
  ConvergenceReport rep;
  for (int n : c.subdivisions) {
    const auto start = std::chrono::steady_clock::now();
    const Problem problem = make_problem(build_coupled_mesh(n), mc.params,
                                         c.scheme.triangle_degree, c.scheme.edge_degree);
    const TimeLevel x = steady_solve(problem, mc);
    const TimeLevel exact = interpolate_exact(*problem.disc, mc, 0.0);
    ConvergenceLevel l;
    l.n = n;
    l.h = 1.0 / n;
    l.e_phi = relative_nodal_error(x.phi, exact.phi);
    l.e_u = relative_nodal_error(x.u, exact.u);
    l.e_p = relative_nodal_error(x.p, exact.p);
    l.max_div = (problem.ops->B * x.u).lpNorm<Eigen::Infinity>();
    l.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.levels.push_back(l);
  }
  rep.rates = pairwise_rates(rep.levels);
  rep.r_avg = average_rate(rep.rates);
  const fs::path dir(c.output_dir);
  emit_csv(rep, dir / "report.csv");
  plot_levels(rep, dir / "errors.svg");
  write_meta(c, rate_line("r_avg", rep.r_avg));
  print_report(rep);
  return 0;
}

// Cheap end-to-end check of the installed binary.
int cmd_selftest() {
  bool ok = true;
  auto expect = [&ok](bool cond, const char* what) {
    std::printf("%s %s\n", cond ? "ok  " : "FAIL", what);
    ok = ok && cond;
  };
  for (SchemeKind kind : {SchemeKind::BDF2, SchemeKind::AMB2}) {
    SchemeConfig cfg;
    cfg.scheme = kind;
    const ConvergenceReport rep =
        run_convergence({CaseId::Example1, cfg.params}, cfg, {4, 8}, 1.0, 0.5);
    const auto& r = rep.r_avg;
    const std::string label = std::string(to_string(kind)) + " example 1 rates above 1";
    expect(r.r_phi > 1.0 && r.r_u > 1.0 && r.r_p > 1.0, label.c_str());
    expect(rep.levels.back().max_div <= 1e-9, "discrete divergence at rounding level");
  }
  const SchemeCoefficients c = scheme_coefficients(SchemeKind::BDF2, 0.8);
  const double exact = std::exp(-1.0);
  const double ratio = std::abs(scalar_model(c, 1.0, 0.0, 0.025, 1.0) - exact) /
                       std::abs(scalar_model(c, 1.0, 0.0, 0.0125, 1.0) - exact);
  expect(ratio > 3.7, "scalar model second order");
  std::printf("selftest %s\n", ok ? "passed" : "failed");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled Stokes-Darcy IMEX solver driver"};
  app.require_subcommand(1);
  Overrides conv, longt, steady;
  auto* c1 = app.add_subcommand("converge", "refinement sweep with dt = h^theta");
  add_common(c1, conv);
  auto* c2 = app.add_subcommand("longtime", "long-horizon run with a sampled error series");
  add_common(c2, longt);
  auto* c3 = app.add_subcommand("steady", "steady coupled solve per mesh size");
  add_common(c3, steady);
  auto* c4 = app.add_subcommand("selftest", "quick consistency check");
  CLI11_PARSE(app, argc, argv);

  try {
    if (c1->parsed()) return cmd_converge(resolve(conv));
    if (c2->parsed()) return cmd_longtime(resolve(longt));
    if (c3->parsed()) return cmd_steady(resolve(steady));
    if (c4->parsed()) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
