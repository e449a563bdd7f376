#include "sdflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sdflow {

double snap_time_step(double h, double theta, double T) {
  if (!(h > 0.0) || !(T > 0.0)) throw std::invalid_argument("h and T must be positive");
  const double steps = std::max(1.0, std::round(T / std::pow(h, theta)));
  return T / steps;
}

std::vector<ConvergenceRate> pairwise_rates(const std::vector<ConvergenceLevel>& levels) {
  std::vector<ConvergenceRate> out;
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    const auto& c = levels[k];
    const auto& f = levels[k + 1];
    out.push_back({std::log2(c.e_phi / f.e_phi), std::log2(c.e_u / f.e_u),
                   std::log2(c.e_p / f.e_p)});
  }
  return out;
}

ConvergenceRate average_rate(const std::vector<ConvergenceRate>& rates) {
  ConvergenceRate avg;
  if (rates.empty()) return avg;
  for (const auto& r : rates) {
    avg.r_phi += r.r_phi;
    avg.r_u += r.r_u;
    avg.r_p += r.r_p;
  }
  const double n = static_cast<double>(rates.size());
  avg.r_phi /= n;
  avg.r_u /= n;
  avg.r_p /= n;
  return avg;
}

ConvergenceReport run_convergence(const ManufacturedCase& mc, const SchemeConfig& config,
                                  const std::vector<int>& subdivisions, double theta,
                                  double T) {
  if (subdivisions.empty()) throw std::invalid_argument("no refinement levels given");
  for (std::size_t k = 1; k < subdivisions.size(); ++k) {
    if (subdivisions[k] != 2 * subdivisions[k - 1]) {
      throw std::invalid_argument("mesh sizes must halve from one level to the next");
    }
  }
  ConvergenceReport report;
  for (int n : subdivisions) {
    SchemeConfig level_config = config;
    const double h = 1.0 / n;
    level_config.dt = snap_time_step(h, theta, T);
    const auto start = std::chrono::steady_clock::now();
    TransientResult run;
    try {
      const CoupledMesh mesh = build_coupled_mesh(n);
      MonitorOptions monitors;
      monitors.sample_every = static_cast<int>(std::lround(T / level_config.dt));
      run = run_transient(mc, mesh, level_config, T, monitors);
    } catch (const std::exception& e) {
      throw std::runtime_error("convergence level h=1/" + std::to_string(n) + ": " + e.what());
    }
    const MonitorSample& last = run.series.back();
    ConvergenceLevel level;
    level.n = n;
    level.h = h;
    level.dt = level_config.dt;
    level.steps = run.steps;
    level.e_phi = last.e_phi;
    level.e_u = last.e_u;
    level.e_p = last.e_p;
    level.max_div = run.max_div;
    level.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.levels.push_back(level);
  }
  report.rates = pairwise_rates(report.levels);
  report.r_avg = average_rate(report.rates);
  return report;
}

TransientResult run_longtime(const ManufacturedCase& mc, const SchemeConfig& config, int n,
                             double T, int sample_every) {
  MonitorOptions monitors;
  monitors.sample_every = sample_every;
  return run_transient(mc, build_coupled_mesh(n), config, T, monitors);
}

// ---- CSV ----------------------------------------------------------------------

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void emit_csv(const ConvergenceReport& report, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "kind,n,h,dt,steps,e_phi,e_u,e_p\n";
  for (const auto& l : report.levels) {
    out << "level," << l.n << ',' << format_number(l.h) << ',' << format_number(l.dt) << ','
        << l.steps << ',' << format_number(l.e_phi) << ',' << format_number(l.e_u) << ','
        << format_number(l.e_p) << '\n';
  }
  for (std::size_t k = 0; k < report.rates.size(); ++k) {
    const auto& fine = report.levels[k + 1];
    const auto& r = report.rates[k];
    out << "rate," << fine.n << ',' << format_number(fine.h) << ','
        << format_number(fine.dt) << ',' << fine.steps << ',' << format_number(r.r_phi)
        << ',' << format_number(r.r_u) << ',' << format_number(r.r_p) << '\n';
  }
  finish(out, path);
}

void emit_csv(const std::vector<MonitorSample>& series, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << "step,t,e_phi,e_u,e_p,g_energy,s_norm,h1_u,h1_phi,div_max,div_dalpha_max\n";
  for (const auto& s : series) {
    out << s.step;
    for (double v : {s.t, s.e_phi, s.e_u, s.e_p, s.g_energy, s.s_norm, s.h1_u, s.h1_phi,
                     s.div_max, s.div_dalpha_max}) {
      out << ',' << format_number(v);
    }
    out << '\n';
  }
  finish(out, path);
}

// ---- SVG ----------------------------------------------------------------------

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

void emit_plot(const std::vector<PlotSeries>& series, const std::filesystem::path& path,
               const std::string& x_label, const std::string& y_label) {
  bool any = false;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("plot series length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.y[i] > 0.0) || !std::isfinite(s.y[i]) || !std::isfinite(s.x[i])) continue;
      any = true;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!any) throw std::invalid_argument("nothing to plot: no positive finite values");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  double lo = std::floor(std::log10(ymin));
  double hi = std::ceil(std::log10(ymax));
  if (hi == lo) hi = lo + 1.0;

  constexpr double width = 800, height = 500;
  constexpr double left = 80, right = 160, top = 30, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (hi - std::log10(y)) / (hi - lo) * ph; };

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  static const char* dashes[] = {"", "6,3", "2,2", "8,3,2,3", "1,3"};

  std::ofstream out = open_output(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\""
      << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double d = lo; d <= hi + 0.5; d += 1.0) {
    const double y = top + (hi - d) / (hi - lo) * ph;
    out << "<line x1=\"" << left << "\" y1=\"" << fixed(y) << "\" x2=\"" << left + pw
        << "\" y2=\"" << fixed(y) << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double x = xmin + (xmax - xmin) * k / 5.0;
    char label[32];
    std::snprintf(label, sizeof label, "%g", x);
    out << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(top + ph + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(height - 15)
      << "\" font-size=\"14\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n"
      << "<text x=\"20\" y=\"" << fixed(top + ph / 2)
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << fixed(top + ph / 2) << ")\">" << xml_escape(y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 5];
    const std::string dash = dashes[k % 5];
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.y[i] > 0.0 && std::isfinite(s.y[i]) && std::isfinite(s.x[i])) {
        pts.emplace_back(px(s.x[i]), py(s.y[i]));
      }
    }
    if (pts.size() == 1) {
      out << "<circle cx=\"" << fixed(pts[0].first) << "\" cy=\"" << fixed(pts[0].second)
          << "\" r=\"4\" fill=\"" << color << "\"/>\n";
    } else if (pts.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
      if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
      out << " points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        out << (i ? " " : "") << fixed(pts[i].first) << ',' << fixed(pts[i].second);
      }
      out << "\"/>\n";
    }
    const double ly = top + 20 + 22.0 * static_cast<double>(k);
    out << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << left + pw + 42 << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (!dash.empty()) out << " stroke-dasharray=\"" << dash << "\"";
    out << "/>\n<text x=\"" << left + pw + 48 << "\" y=\"" << fixed(ly + 4)
        << "\" font-size=\"12\">" << xml_escape(s.name) << "</text>\n";
  }
  out << "</svg>\n";
  finish(out, path);
}

void emit_plot(const std::vector<MonitorSample>& series, const std::filesystem::path& path) {
  if (series.empty()) throw std::invalid_argument("cannot plot an empty series");
  PlotSeries phi{"e_phi", {}, {}}, u{"e_u", {}, {}}, p{"e_p", {}, {}};
  for (const auto& s : series) {
    if (s.step == 0 && series.size() > 1) continue;  // exact start, zero error
    for (auto* ps : {&phi, &u, &p}) ps->x.push_back(s.t);
    phi.y.push_back(s.e_phi);
    u.y.push_back(s.e_u);
    p.y.push_back(s.e_p);
  }
  emit_plot({phi, u, p}, path);
}

// ---- configuration --------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Settings parse_settings(const std::string& text) {
  Settings out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

Settings read_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_settings(buf.str());
}

double parse_real(const std::string& text) {
  const std::string s = trim(text);
  auto number = [&s](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != part.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
  };
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return number(trim(s.substr(0, slash))) / number(trim(s.substr(slash + 1)));
  }
  return number(s);
}

std::vector<int> parse_mesh_sizes(const std::string& text) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    const double h = parse_real(item);
    const double n = std::round(1.0 / h);
    if (!(h > 0.0) || n < 1 || std::abs(1.0 / h - n) > 1e-9 * n) {
      throw std::invalid_argument("mesh size '" + trim(item) + "' is not 1/n");
    }
    out.push_back(static_cast<int>(n));
  }
  if (out.empty()) throw std::invalid_argument("empty mesh size list");
  return out;
}

RunConfig resolve_config(const Settings& settings) {
  RunConfig c;
  auto& p = c.scheme.params;
  for (const auto& [key, value] : settings) {
    if (key == "case") {
      c.case_id = parse_case(value);
    } else if (key == "scheme") {
      c.scheme.scheme = parse_scheme(value);
    } else if (key == "alpha") {
      c.scheme.alpha = parse_real(value);
    } else if (key == "h") {
      c.subdivisions = parse_mesh_sizes(value);
    } else if (key == "dt") {
      c.scheme.dt = parse_real(value);
      c.dt_given = true;
    } else if (key == "theta") {
      c.theta = parse_real(value);
    } else if (key == "T") {
      c.T = parse_real(value);
    } else if (key == "gamma_f") {
      p.gamma_f = parse_real(value);
    } else if (key == "gamma_p") {
      p.gamma_p = parse_real(value);
    } else if (key == "nu") {
      p.nu = parse_real(value);
    } else if (key == "g") {
      p.g = parse_real(value);
    } else if (key == "S") {
      p.S = parse_real(value);
    } else if (key == "K") {
      std::vector<double> k;
      std::istringstream in(value);
      std::string item;
      while (std::getline(in, item, ',')) k.push_back(parse_real(item));
      if (k.size() == 1) {
        p.K = {k[0], 0.0, 0.0, k[0]};
      } else if (k.size() == 4) {
        p.K = {k[0], k[1], k[2], k[3]};
      } else {
        throw std::invalid_argument("K takes one value or four (row-major)");
      }
    } else if (key == "alpha_bj") {
      p.alpha_bj = parse_real(value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "sample_every") {
      c.sample_every = static_cast<int>(parse_real(value));
      if (c.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  return c;
}

std::string describe(const RunConfig& c) {
  std::ostringstream out;
  const auto& p = c.scheme.params;
  out << "case = " << to_string(c.case_id) << '\n'
      << "scheme = " << to_string(c.scheme.scheme) << '\n'
      << "alpha = " << format_number(c.scheme.alpha) << '\n'
      << "h = ";
  for (std::size_t k = 0; k < c.subdivisions.size(); ++k) {
    out << (k ? "," : "") << "1/" << c.subdivisions[k];
  }
  out << '\n'
      << "dt = " << format_number(c.scheme.dt) << '\n'
      << "theta = " << format_number(c.theta) << '\n'
      << "T = " << format_number(c.T) << '\n'
      << "gamma_f = " << format_number(p.gamma_f) << '\n'
      << "gamma_p = " << format_number(p.gamma_p) << '\n'
      << "nu = " << format_number(p.nu) << '\n'
      << "g = " << format_number(p.g) << '\n'
      << "S = " << format_number(p.S) << '\n'
      << "K = " << format_number(p.K[0]) << ',' << format_number(p.K[1]) << ','
      << format_number(p.K[2]) << ',' << format_number(p.K[3]) << '\n'
      << "alpha_bj = " << format_number(p.alpha_bj) << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "sample_every = " << c.sample_every << '\n';
  return out.str();
}

}  // namespace sdflow
