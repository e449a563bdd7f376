#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sdflow/mms.hpp"
#include "sdflow/timestepper.hpp"

namespace sdflow {

struct ConvergenceLevel {
  int n = 0;
  double h = 0.0;
  double dt = 0.0;
  long steps = 0;
  double e_phi = 0.0;
  double e_u = 0.0;
  double e_p = 0.0;
  double max_div = 0.0;
  double seconds = 0.0;
};

struct ConvergenceRate {
  double r_phi = 0.0;
  double r_u = 0.0;
  double r_p = 0.0;
};

/// Rows ordered coarse to fine; rates[k] compares levels k and k+1 as
/// log2(e_{2h} / e_h).
struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  std::vector<ConvergenceRate> rates;
  ConvergenceRate r_avg;
};

/// dt = T / round(T / h^theta).
double snap_time_step(double h, double theta, double T);

std::vector<ConvergenceRate> pairwise_rates(const std::vector<ConvergenceLevel>& levels);
ConvergenceRate average_rate(const std::vector<ConvergenceRate>& rates);

/// One transient run per subdivision count (each twice the previous) with
/// dt snapped from h^theta. config.dt is ignored. Failures are rethrown as
/// std::runtime_error naming the level.
ConvergenceReport run_convergence(const ManufacturedCase& mc, const SchemeConfig& config,
                                  const std::vector<int>& subdivisions, double theta,
                                  double T);

/// Long-horizon run sampled every sample_every steps.
TransientResult run_longtime(const ManufacturedCase& mc, const SchemeConfig& config, int n,
                             double T, int sample_every);

// ---- output -------------------------------------------------------------------

/// Scientific notation with 17 significant digits (round-trips exactly).
std::string format_number(double value);

/// Header `kind,n,h,dt,steps,e_phi,e_u,e_p`; one `level` row per level and
/// one `rate` row per adjacent pair (rates in the error columns).
void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path);
/// Header `step,t,e_phi,e_u,e_p,g_energy,s_norm,h1_u,h1_phi,div_max,div_dalpha_max`.
void emit_csv(const std::vector<MonitorSample>& series, const std::filesystem::path& path);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone SVG line chart with a log-scale y axis. Throws
/// std::invalid_argument for an empty input.
void emit_plot(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const std::string& x_label = "t",
               const std::string& y_label = "relative error");
/// e_phi, e_u and e_p against t.
void emit_plot(const std::vector<MonitorSample>& series, const std::filesystem::path& path);

// ---- configuration --------------------------------------------------------------

/// Flat `key = value` settings; `#` starts a comment.
using Settings = std::map<std::string, std::string>;

Settings read_settings(const std::filesystem::path& path);
Settings parse_settings(const std::string& text);

/// Reals may be written as fractions, e.g. `1/64`.
double parse_real(const std::string& text);
/// Comma separated mesh sizes h (or fractions 1/n) to subdivision counts.
std::vector<int> parse_mesh_sizes(const std::string& text);

/// Everything a driver run needs, resolved from settings.
struct RunConfig {
  CaseId case_id = CaseId::Example1;
  SchemeConfig scheme;
  std::vector<int> subdivisions{16, 32, 64};
  double theta = 1.0;
  double T = 1.0;
  int sample_every = 1;
  std::string output_dir = "out";
  bool dt_given = false;
};

/// Throws std::invalid_argument on unknown keys or malformed values.
RunConfig resolve_config(const Settings& settings);
/// key = value echo of the resolved configuration.
std::string describe(const RunConfig& config);

}  // namespace sdflow
