#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "sdflow/mms.hpp"

using namespace sdflow;

namespace {

constexpr double kStep = 1e-4;  // first derivatives
constexpr double kStep2 = 1e-3; // second derivatives; 1e-4 loses ~1e-7 to rounding

using Scalar = std::function<double(double)>;

// Fourth-order central differences.
double d1(const Scalar& f, double x, double h = kStep) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}
double d2(const Scalar& f, double x, double h = kStep2) {
  return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
}

// Field accessors built only from the closed forms.
using Field = std::function<double(Point2, double)>;

Field ux(CaseId id) { return [id](Point2 x, double t) { return exact_eval({id, {}}, x, t).u.x; }; }
Field uy(CaseId id) { return [id](Point2 x, double t) { return exact_eval({id, {}}, x, t).u.y; }; }
Field pr(CaseId id) { return [id](Point2 x, double t) { return exact_eval({id, {}}, x, t).p; }; }
Field hd(CaseId id) { return [id](Point2 x, double t) { return exact_eval({id, {}}, x, t).phi; }; }

double dx(const Field& f, Point2 x, double t) {
  return d1([&](double s) { return f({s, x.y}, t); }, x.x);
}
double dy(const Field& f, Point2 x, double t) {
  return d1([&](double s) { return f({x.x, s}, t); }, x.y);
}
double dt(const Field& f, Point2 x, double t) {
  return d1([&](double s) { return f(x, s); }, t);
}
double dxx(const Field& f, Point2 x, double t) {
  return d2([&](double s) { return f({s, x.y}, t); }, x.x);
}
double dyy(const Field& f, Point2 x, double t) {
  return d2([&](double s) { return f({x.x, s}, t); }, x.y);
}
double dxy(const Field& f, Point2 x, double t) {
  return d1([&](double s) { return dy(f, {s, x.y}, t); }, x.x, kStep2);
}

void expect_close(double fd, double analytic, const char* what) {
  EXPECT_NEAR(fd, analytic, 1e-7 * std::max(1.0, std::abs(analytic))) << what;
}

Point2 fluid_fd_forcing(CaseId id, const PhysicalParams& prm, Point2 x, double t) {
  const double lap_x = dxx(ux(id), x, t) + dyy(ux(id), x, t);
  const double lap_y = dxx(uy(id), x, t) + dyy(uy(id), x, t);
  return {dt(ux(id), x, t) - prm.nu * lap_x + dx(pr(id), x, t),
          dt(uy(id), x, t) - prm.nu * lap_y + dy(pr(id), x, t)};
}

double porous_fd_forcing(CaseId id, const PhysicalParams& prm, Point2 x, double t) {
  const auto& K = prm.K;
  const double div = K[0] * dxx(hd(id), x, t) + (K[1] + K[2]) * dxy(hd(id), x, t) +
                     K[3] * dyy(hd(id), x, t);
  return prm.S * dt(hd(id), x, t) - div;
}

class JetOracle : public ::testing::TestWithParam<CaseId> {};

}  // namespace

TEST(Cases, ParseAndName) {
  EXPECT_EQ(parse_case("1"), CaseId::Example1);
  EXPECT_EQ(parse_case("example2"), CaseId::Example2);
  EXPECT_EQ(parse_case("Example3"), CaseId::Example3);
  EXPECT_EQ(parse_case(to_string(CaseId::Example3)), CaseId::Example3);
  EXPECT_THROW(parse_case("4"), std::invalid_argument);
  EXPECT_TRUE((ManufacturedCase{CaseId::Example2, {}}).steady());
  EXPECT_FALSE((ManufacturedCase{CaseId::Example1, {}}).steady());
}

TEST(ExactValues, Example1Samples) {
  const ManufacturedCase mc{CaseId::Example1, {}};
  const ExactValues corner = exact_eval(mc, {0.0, 1.0}, 0.0);
  EXPECT_DOUBLE_EQ(corner.u.x, 1.0);
  EXPECT_DOUBLE_EQ(corner.u.y, 2.0);
  EXPECT_NEAR(exact_eval(mc, {0.0, 0.0}, 0.0).phi, 0.0, 1e-15);
}

TEST(ExactValues, Example2IsSteady) {
  const ManufacturedCase mc{CaseId::Example2, {}};
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const Point2 x{u01(rng), 2.0 * u01(rng)};
    const double t = 5.0 * u01(rng);
    const ExactValues a = exact_eval(mc, x, t), b = exact_eval(mc, x, t + 1.0);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.phi, b.phi);
    EXPECT_EQ(a.p, 0.0);
  }
}

TEST_P(JetOracle, DerivativesMatchFiniteDifferences) {
  const CaseId id = GetParam();
  std::mt19937 rng(11 + static_cast<int>(id));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double t = 2.0 * u01(rng);
    const Point2 xf{u01(rng), 1.0 + u01(rng)};
    const VelocityJet v = velocity_jet(id, xf, t);
    expect_close(dx(ux(id), xf, t), v.grad[0], "du1/dx");
    expect_close(dy(ux(id), xf, t), v.grad[1], "du1/dy");
    expect_close(dx(uy(id), xf, t), v.grad[2], "du2/dx");
    expect_close(dy(uy(id), xf, t), v.grad[3], "du2/dy");
    expect_close(dxx(ux(id), xf, t) + dyy(ux(id), xf, t), v.laplacian.x, "lap u1");
    expect_close(dxx(uy(id), xf, t) + dyy(uy(id), xf, t), v.laplacian.y, "lap u2");
    expect_close(dt(ux(id), xf, t), v.dt.x, "du1/dt");
    expect_close(dt(uy(id), xf, t), v.dt.y, "du2/dt");
    const PressureJet p = pressure_jet(id, xf, t);
    expect_close(dx(pr(id), xf, t), p.grad.x, "dp/dx");
    expect_close(dy(pr(id), xf, t), p.grad.y, "dp/dy");

    const Point2 xp{u01(rng), u01(rng)};
    const HeadJet h = head_jet(id, xp, t);
    expect_close(dx(hd(id), xp, t), h.grad.x, "dphi/dx");
    expect_close(dy(hd(id), xp, t), h.grad.y, "dphi/dy");
    expect_close(dxx(hd(id), xp, t), h.hessian[0], "phi_xx");
    expect_close(dxy(hd(id), xp, t), h.hessian[1], "phi_xy");
    expect_close(dxy(hd(id), xp, t), h.hessian[2], "phi_yx");
    expect_close(dyy(hd(id), xp, t), h.hessian[3], "phi_yy");
    expect_close(dt(hd(id), xp, t), h.dt, "dphi/dt");
  }
}

TEST_P(JetOracle, ForcingMatchesFiniteDifferences) {
  const CaseId id = GetParam();
  PhysicalParams prm;
  prm.nu = 0.7;
  prm.S = 1.3;
  prm.K = {1.5, 0.25, 0.25, 0.8};
  const ManufacturedCase mc{id, prm};
  std::mt19937 rng(23 + static_cast<int>(id));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double t = 2.0 * u01(rng);
    const Point2 xf{u01(rng), 1.0 + u01(rng)};
    const Point2 f = fluid_forcing(mc, xf, t);
    const Point2 fd = fluid_fd_forcing(id, prm, xf, t);
    expect_close(fd.x, f.x, "f_fluid.x");
    expect_close(fd.y, f.y, "f_fluid.y");
    const Point2 xp{u01(rng), u01(rng)};
    expect_close(porous_fd_forcing(id, prm, xp, t), porous_forcing(mc, xp, t), "f_porous");
  }
}

TEST_P(JetOracle, VelocityIsDivergenceFree) {
  const CaseId id = GetParam();
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const VelocityJet v = velocity_jet(id, {u01(rng), 1.0 + u01(rng)}, 3.0 * u01(rng));
    EXPECT_NEAR(v.grad[0] + v.grad[3], 0.0, 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(AllCases, JetOracle,
                         ::testing::Values(CaseId::Example1, CaseId::Example2,
                                           CaseId::Example3));

TEST(Forcing, SpecExamples) {
  const ManufacturedCase ex2{CaseId::Example2, {}};
  const Point2 x{0.3, 1.6};
  EXPECT_EQ(fluid_forcing(ex2, x, 0.4, true), fluid_forcing(ex2, x, 0.4, false));

  const ManufacturedCase ex1{CaseId::Example1, {}};
  expect_close(porous_fd_forcing(CaseId::Example1, ex1.params, {0.5, 0.5}, 0.0),
               porous_forcing(ex1, {0.5, 0.5}, 0.0), "ex1 porous");

  const ManufacturedCase ex3{CaseId::Example3, {}};
  const Point2 f = fluid_forcing(ex3, {0.5, 1.5}, 0.25);
  const Point2 fd = fluid_fd_forcing(CaseId::Example3, ex3.params, {0.5, 1.5}, 0.25);
  expect_close(fd.x, f.x, "ex3 fluid x");
  expect_close(fd.y, f.y, "ex3 fluid y");
}

TEST(Interface, Example1SatisfiesConditionsExactly) {
  const ManufacturedCase mc{CaseId::Example1, {}};
  for (double x1 : {0.0, 0.13, 0.5, 0.77, 1.0}) {
    for (double t : {0.0, 0.4, 1.0}) {
      const auto r = interface_residuals(mc, {x1, 1.0}, t);
      EXPECT_NEAR(r.mass, 0.0, 1e-13);
      EXPECT_NEAR(r.tangential, 0.0, 1e-13);
      EXPECT_NEAR(r.normal_stress, 0.0, 1e-13);
    }
  }
}

TEST(Interface, MassDefectMatchesFiniteDifferences) {
  // n = (0,-1): u.n + (K grad phi).n = -u_y - phi_y for K = I.
  for (CaseId id : {CaseId::Example1, CaseId::Example2, CaseId::Example3}) {
    const ManufacturedCase mc{id, {}};
    const Point2 x{0.5, 1.0};
    const double fd = -uy(id)(x, 0.0) - dy(hd(id), x, 0.0);
    EXPECT_NEAR(interface_residuals(mc, x, 0.0).mass, fd, 1e-8);
  }
}

TEST(Interface, StressDefectsMatchFiniteDifferences) {
  // tau = (1,0), n = (0,-1); sigma n = nu (grad u) n - p n.
  PhysicalParams prm;
  prm.nu = 0.9;
  prm.alpha_bj = 1.7;
  prm.g = 2.0;
  for (CaseId id : {CaseId::Example2, CaseId::Example3}) {
    const ManufacturedCase mc{id, prm};
    const Point2 x{0.35, 1.0};
    const double t = 0.6;
    const double sn_x = -prm.nu * dy(ux(id), x, t);
    const double sn_y = -prm.nu * dy(uy(id), x, t) + pr(id)(x, t);
    const auto r = interface_residuals(mc, x, t);
    EXPECT_NEAR(r.tangential, -sn_x - prm.alpha_bj * ux(id)(x, t), 1e-8);
    EXPECT_NEAR(r.normal_stress, sn_y - prm.g * hd(id)(x, t), 1e-8);
  }
}

TEST(Interface, ResidualsAreContinuousAlongTheInterface) {
  constexpr double eps = 1e-9;
  for (CaseId id : {CaseId::Example1, CaseId::Example2, CaseId::Example3}) {
    const ManufacturedCase mc{id, {}};
    for (int k = 0; k <= 100; ++k) {
      const double x1 = k / 100.0;
      const auto l = interface_residuals(mc, {std::max(0.0, x1 - eps), 1.0}, 0.3);
      const auto r = interface_residuals(mc, {std::min(1.0, x1 + eps), 1.0}, 0.3);
      EXPECT_LE(std::abs(l.mass - r.mass), 1e-6);
      EXPECT_LE(std::abs(l.tangential - r.tangential), 1e-6);
      EXPECT_LE(std::abs(l.normal_stress - r.normal_stress), 1e-6);
    }
  }
}
