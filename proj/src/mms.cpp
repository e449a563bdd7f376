#include "sdflow/mms.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sdflow {

namespace {

constexpr double pi = std::numbers::pi;

// A(x) = 2 - pi sin(pi x), shared by Examples 1 and 3.
struct Profile {
  double v, d1, d2;
};

Profile profile_a(double x) {
  return {2.0 - pi * std::sin(pi * x), -pi * pi * std::cos(pi * x),
          pi * pi * pi * std::sin(pi * x)};
}

// ---- Example 1: separable with cos(t) in time -----------------------------

VelocityJet velocity_ex1(double x, double y, double t) {
  const double c = std::cos(t);
  const double s = -std::sin(t);
  const Profile a = profile_a(x);
  const double ym = y - 1.0;
  const double f1 = x * x * ym * ym + y;
  const double f2 = -2.0 / 3.0 * x * ym * ym * ym + a.v;

  VelocityJet j;
  j.value = {f1 * c, f2 * c};
  j.grad = {2.0 * x * ym * ym * c, (2.0 * x * x * ym + 1.0) * c,
            (-2.0 / 3.0 * ym * ym * ym + a.d1) * c, -2.0 * x * ym * ym * c};
  j.laplacian = {(2.0 * ym * ym + 2.0 * x * x) * c, (a.d2 - 4.0 * x * ym) * c};
  j.dt = {f1 * s, f2 * s};
  return j;
}

PressureJet pressure_ex1(double x, double y, double t) {
  const double c = std::cos(t);
  const Profile a = profile_a(x);
  const double sy = std::sin(0.5 * pi * y);
  PressureJet j;
  j.value = a.v * sy * c;
  j.grad = {a.d1 * sy * c, a.v * 0.5 * pi * std::cos(0.5 * pi * y) * c};
  return j;
}

HeadJet head_ex1(double x, double y, double t) {
  const double c = std::cos(t);
  const Profile a = profile_a(x);
  const Profile b{1.0 - y - std::cos(pi * y), -1.0 + pi * std::sin(pi * y),
                  pi * pi * std::cos(pi * y)};
  HeadJet j;
  j.value = a.v * b.v * c;
  j.grad = {a.d1 * b.v * c, a.v * b.d1 * c};
  j.hessian = {a.d2 * b.v * c, a.d1 * b.d1 * c, a.d1 * b.d1 * c, a.v * b.d2 * c};
  j.dt = -a.v * b.v * std::sin(t);
  return j;
}

// ---- Example 2: steady ----------------------------------------------------

VelocityJet velocity_ex2(double x, double y, double) {
  const double s2y = std::sin(2.0 * pi * y);
  const double c2y = std::cos(2.0 * pi * y);
  const double sy = std::sin(pi * y);
  const double w = 2.0 + sy * sy / (pi * pi);

  VelocityJet j;
  j.value = {s2y * std::cos(x) / pi, w * std::sin(x)};
  j.grad = {-s2y * std::sin(x) / pi, 2.0 * c2y * std::cos(x), w * std::cos(x),
            s2y * std::sin(x) / pi};
  j.laplacian = {-(1.0 / pi + 4.0 * pi) * s2y * std::cos(x),
                 (-w + 2.0 * c2y) * std::sin(x)};
  j.dt = {0.0, 0.0};
  return j;
}

PressureJet pressure_ex2(double, double, double) { return {}; }

HeadJet head_ex2(double x, double y, double) {
  const double em = std::exp(-y);
  const double ep = std::exp(y);
  HeadJet j;
  j.value = (em - ep) * std::sin(x);
  j.grad = {(em - ep) * std::cos(x), -(em + ep) * std::sin(x)};
  j.hessian = {-(em - ep) * std::sin(x), -(em + ep) * std::cos(x),
               -(em + ep) * std::cos(x), (em - ep) * std::sin(x)};
  j.dt = 0.0;
  return j;
}

// ---- Example 3: periodic factor 2 + cos(2 pi t) ---------------------------

VelocityJet velocity_ex3(double x, double y, double t) {
  const double tt = 2.0 + std::cos(2.0 * pi * t);
  const double dtt = -2.0 * pi * std::sin(2.0 * pi * t);
  const Profile a = profile_a(x);
  const double ey = std::exp(-y);
  const double f1 = x * x * y * y + ey;
  const double f2 = -2.0 / 3.0 * x * y * y * y + a.v;

  VelocityJet j;
  j.value = {f1 * tt, f2 * tt};
  j.grad = {2.0 * x * y * y * tt, (2.0 * x * x * y - ey) * tt,
            (-2.0 / 3.0 * y * y * y + a.d1) * tt, -2.0 * x * y * y * tt};
  j.laplacian = {(2.0 * y * y + 2.0 * x * x + ey) * tt, (a.d2 - 4.0 * x * y) * tt};
  j.dt = {f1 * dtt, f2 * dtt};
  return j;
}

PressureJet pressure_ex3(double x, double y, double t) {
  const double tt = 2.0 + std::cos(2.0 * pi * t);
  const Profile a = profile_a(x);
  const double c2 = std::cos(2.0 * pi * y);
  PressureJet j;
  j.value = -a.v * c2 * tt;
  j.grad = {-a.d1 * c2 * tt, 2.0 * pi * a.v * std::sin(2.0 * pi * y) * tt};
  return j;
}

HeadJet head_ex3(double x, double y, double t) {
  const double tt = 2.0 + std::cos(2.0 * pi * t);
  const double dtt = -2.0 * pi * std::sin(2.0 * pi * t);
  const Profile a = profile_a(x);
  const double arg = pi * (1.0 - y);
  const Profile b{-y + std::cos(arg), -1.0 + pi * std::sin(arg),
                  -pi * pi * std::cos(arg)};
  HeadJet j;
  j.value = a.v * b.v * tt;
  j.grad = {a.d1 * b.v * tt, a.v * b.d1 * tt};
  j.hessian = {a.d2 * b.v * tt, a.d1 * b.d1 * tt, a.d1 * b.d1 * tt, a.v * b.d2 * tt};
  j.dt = a.v * b.v * dtt;
  return j;
}

}  // namespace

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::Example1: return "example1";
    case CaseId::Example2: return "example2";
    case CaseId::Example3: return "example3";
  }
  return "unknown";
}

CaseId parse_case(std::string_view text) {
  std::string lower;
  for (char ch : text) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (lower == "1" || lower == "example1" || lower == "ex1") return CaseId::Example1;
  if (lower == "2" || lower == "example2" || lower == "ex2") return CaseId::Example2;
  if (lower == "3" || lower == "example3" || lower == "ex3") return CaseId::Example3;
  throw std::invalid_argument("unknown case '" + std::string(text) + "'");
}

VelocityJet velocity_jet(CaseId id, Point2 x, double t) {
  switch (id) {
    case CaseId::Example1: return velocity_ex1(x.x, x.y, t);
    case CaseId::Example2: return velocity_ex2(x.x, x.y, t);
    case CaseId::Example3: return velocity_ex3(x.x, x.y, t);
  }
  throw std::logic_error("bad case id");
}

PressureJet pressure_jet(CaseId id, Point2 x, double t) {
  switch (id) {
    case CaseId::Example1: return pressure_ex1(x.x, x.y, t);
    case CaseId::Example2: return pressure_ex2(x.x, x.y, t);
    case CaseId::Example3: return pressure_ex3(x.x, x.y, t);
  }
  throw std::logic_error("bad case id");
}

HeadJet head_jet(CaseId id, Point2 x, double t) {
  switch (id) {
    case CaseId::Example1: return head_ex1(x.x, x.y, t);
    case CaseId::Example2: return head_ex2(x.x, x.y, t);
    case CaseId::Example3: return head_ex3(x.x, x.y, t);
  }
  throw std::logic_error("bad case id");
}

ExactValues exact_eval(const ManufacturedCase& mc, Point2 x, double t) {
  return {velocity_jet(mc.id, x, t).value, pressure_jet(mc.id, x, t).value,
          head_jet(mc.id, x, t).value};
}

Point2 fluid_forcing(const ManufacturedCase& mc, Point2 x, double t,
                     bool include_time_derivative) {
  const VelocityJet u = velocity_jet(mc.id, x, t);
  const PressureJet p = pressure_jet(mc.id, x, t);
  const double nu = mc.params.nu;
  Point2 f{-nu * u.laplacian.x + p.grad.x, -nu * u.laplacian.y + p.grad.y};
  if (include_time_derivative) {
    f.x += u.dt.x;
    f.y += u.dt.y;
  }
  return f;
}

double porous_forcing(const ManufacturedCase& mc, Point2 x, double t,
                      bool include_time_derivative) {
  const HeadJet phi = head_jet(mc.id, x, t);
  const auto& K = mc.params.K;
  // div(K grad phi) for constant K.
  const double div = K[0] * phi.hessian[0] + K[1] * phi.hessian[2] +
                     K[2] * phi.hessian[1] + K[3] * phi.hessian[3];
  double f = -div;
  if (include_time_derivative) f += mc.params.S * phi.dt;
  return f;
}

InterfaceResiduals interface_residuals(const ManufacturedCase& mc, Point2 x, double t,
                                       Point2 n) {
  const VelocityJet u = velocity_jet(mc.id, x, t);
  const PressureJet p = pressure_jet(mc.id, x, t);
  const HeadJet phi = head_jet(mc.id, x, t);
  const auto& prm = mc.params;
  const Point2 tau{-n.y, n.x};

  const Point2 traction{prm.nu * (u.grad[0] * n.x + u.grad[1] * n.y) - p.value * n.x,
                        prm.nu * (u.grad[2] * n.x + u.grad[3] * n.y) - p.value * n.y};
  const Point2 k_grad{prm.K[0] * phi.grad.x + prm.K[1] * phi.grad.y,
                      prm.K[2] * phi.grad.x + prm.K[3] * phi.grad.y};
  auto dot = [](Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; };

  InterfaceResiduals r;
  r.mass = dot(u.value, n) + dot(k_grad, n);
  r.tangential = -dot(tau, traction) - prm.alpha_bj * dot(u.value, tau);
  r.normal_stress = -dot(n, traction) - prm.g * phi.value;
  return r;
}

}  // namespace sdflow
