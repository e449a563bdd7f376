#include <gtest/gtest.h>

#include <random>

#include "sdflow/linsolve.hpp"
#include "sdflow/timestepper.hpp"

using namespace sdflow;

namespace {

SparseMatrix from_dense(const std::vector<std::vector<double>>& rows) {
  std::vector<Eigen::Triplet<double, int>> trip;
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    for (int j = 0; j < static_cast<int>(rows[i].size()); ++j) {
      if (rows[i][j] != 0.0) trip.emplace_back(i, j, rows[i][j]);
    }
  }
  SparseMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SparseMatrix laplacian_1d(int n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    rows[i][i] = 2.0;
    if (i > 0) rows[i][i - 1] = -1.0;
    if (i + 1 < n) rows[i][i + 1] = -1.0;
  }
  return from_dense(rows);
}

}  // namespace

TEST(Factorization, Identity) {
  SparseMatrix id(5, 5);
  id.setIdentity();
  const Vector b = (Vector(5) << 1, -2, 3, -4, 5).finished();
  for (auto sym : {MatrixSymmetry::General, MatrixSymmetry::SymmetricPositiveDefinite}) {
    EXPECT_EQ(Factorization::factorize(id, sym).solve(b), b);
  }
}

TEST(Factorization, SmallSpd) {
  const SparseMatrix a = from_dense({{2, 1}, {1, 2}});
  const Vector x = Factorization::factorize(a, MatrixSymmetry::SymmetricPositiveDefinite)
                       .solve(Vector::Constant(2, 3.0));
  EXPECT_NEAR(x[0], 1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
}

TEST(Factorization, SaddlePoint) {
  const SparseMatrix a = from_dense({{2, 0, 1}, {0, 2, 1}, {1, 1, 0}});
  const Vector x = Factorization::factorize(a).solve((Vector(3) << 3, 3, 2).finished());
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], 1.0, 1e-14);
}

TEST(Factorization, DirichletLaplacian) {
  // -x'' = 1 on (0,1), x(0) = x(1) = 0, h = 1/4: three interior nodes.
  const int n = 3;
  const double h = 0.25;
  const Vector rhs = Vector::Constant(n, h * h);
  const Vector x = Factorization::factorize(laplacian_1d(n), MatrixSymmetry::SymmetricPositiveDefinite)
                       .solve(rhs);
  for (int i = 0; i < n; ++i) {
    const double s = (i + 1) * h;
    EXPECT_NEAR(x[i], s * (1 - s) / 2, 1e-12);
  }
}

TEST(Factorization, ZeroRhsAndDeterminism) {
  const SparseMatrix a = laplacian_1d(50);
  const Factorization f = Factorization::factorize(a);
  EXPECT_EQ(f.solve(Vector::Zero(50)).lpNorm<Eigen::Infinity>(), 0.0);
  const Vector b = Vector::LinSpaced(50, -1.0, 2.0);
  const Vector x1 = f.solve(b), x2 = f.solve(b);
  EXPECT_EQ(x1, x2);
}

TEST(Factorization, ManySolvesKeepSmallResidual) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 200;
  std::vector<Eigen::Triplet<double, int>> trip;
  for (int i = 0; i < n; ++i) {
    trip.emplace_back(i, i, 4.0);
    trip.emplace_back(i, (i + 7) % n, u(rng));
    trip.emplace_back((i + 13) % n, i, u(rng));
  }
  SparseMatrix a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  const Factorization f = Factorization::factorize(a);
  for (int k = 0; k < 100; ++k) {
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = u(rng);
    const Vector x = f.solve(b);
    EXPECT_LE((a * x - b).norm() / b.norm(), 1e-10);
  }
}

TEST(Factorization, Errors) {
  SparseMatrix rect(2, 3);
  EXPECT_THROW(Factorization::factorize(rect), std::invalid_argument);

  const SparseMatrix singular = from_dense({{1, 1}, {1, 1}});
  EXPECT_THROW(Factorization::factorize(singular), SingularMatrixError);
  EXPECT_THROW(Factorization::factorize(singular, MatrixSymmetry::SymmetricPositiveDefinite),
               SingularMatrixError);

  const SparseMatrix indefinite = from_dense({{1, 0}, {0, -1}});
  EXPECT_THROW(Factorization::factorize(indefinite, MatrixSymmetry::SymmetricPositiveDefinite),
               SingularMatrixError);

  const Factorization f = Factorization::factorize(laplacian_1d(4));
  EXPECT_THROW(f.solve(Vector::Zero(3)), std::invalid_argument);
}

TEST(Factorization, CounterAdvancesOncePerFactorization) {
  const SparseMatrix a = laplacian_1d(10);
  const auto before = factorization_count();
  const Factorization f = Factorization::factorize(a);
  for (int k = 0; k < 5; ++k) f.solve(Vector::Ones(10));
  EXPECT_EQ(factorization_count(), before + 1);
}

TEST(ReducedSystemTest, EliminationMatchesFullSolve) {
  // Fix x0 = 1 and x3 = 2 in a 1D Laplacian; the interior solution is linear.
  const SparseMatrix a = laplacian_1d(4);
  const std::vector<char> fixed{1, 0, 0, 1};
  const ReducedSystem rs(a, fixed, MatrixSymmetry::SymmetricPositiveDefinite);
  Vector values = Vector::Zero(4);
  values[0] = 1.0;
  values[3] = 2.0;
  const Vector x = rs.solve(Vector::Zero(4), values);
  EXPECT_DOUBLE_EQ(x[0], 1.0);
  EXPECT_DOUBLE_EQ(x[3], 2.0);
  EXPECT_NEAR(x[1], 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(x[2], 5.0 / 3.0, 1e-14);
}
