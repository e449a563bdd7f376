#include "sdflow/linsolve.hpp"

#include <atomic>
#include <regex>
#include <variant>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#ifdef SDFLOW_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace sdflow {

namespace {

std::atomic<std::uint64_t> g_factorizations{0};

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
#ifdef SDFLOW_HAVE_UMFPACK
using LuSolver = Eigen::UmfPackLU<ColMatrix>;
#else
using LuSolver = Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>;
#endif
using LdltSolver = Eigen::SimplicialLDLT<ColMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

#ifndef SDFLOW_HAVE_UMFPACK
long trailing_index(const std::string& message) {
  std::smatch m;
  static const std::regex tail("([0-9]+)\\s*$");
  if (std::regex_search(message, m, tail)) return std::stol(m[1]);
  return -1;
}
#endif

}  // namespace

struct Factorization::Impl {
  ColMatrix matrix;  // UmfPackLU keeps a reference to it for solves
  std::variant<std::unique_ptr<LuSolver>, std::unique_ptr<LdltSolver>> solver;
};

Factorization::Factorization(std::unique_ptr<Impl> impl, int dimension,
                             MatrixSymmetry symmetry)
    : impl_(std::move(impl)), dimension_(dimension), symmetry_(symmetry) {}

Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;
Factorization::~Factorization() = default;

Factorization Factorization::factorize(const SparseMatrix& a, MatrixSymmetry symmetry) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("factorize: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", expected square");
  }
  auto impl = std::make_unique<Impl>();
  impl->matrix = a;
  impl->matrix.makeCompressed();
  const ColMatrix& col = impl->matrix;

  if (symmetry == MatrixSymmetry::SymmetricPositiveDefinite) {
    auto ldlt = std::make_unique<LdltSolver>();
    ldlt->compute(col);
    if (ldlt->info() != Eigen::Success) {
      throw SingularMatrixError("factorize: LDL^T failed (matrix not SPD or singular)", -1);
    }
    // A zero or negative pivot means the SPD tag was wrong.
    const auto& diag = ldlt->vectorD();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag[i] > 0.0)) {
        throw SingularMatrixError("factorize: non-positive pivot at permuted row " +
                                      std::to_string(i),
                                  static_cast<long>(i));
      }
    }
    impl->solver = std::move(ldlt);
  } else {
    auto lu = std::make_unique<LuSolver>();
#ifdef SDFLOW_HAVE_UMFPACK
    lu->umfpackControl()(UMFPACK_IRSTEP) = 0;
#endif
    lu->analyzePattern(col);
    lu->factorize(col);
#ifdef SDFLOW_HAVE_UMFPACK
    if (lu->info() != Eigen::Success) {
      throw SingularMatrixError("factorize: UMFPACK status " +
                                    std::to_string(lu->umfpackFactorizeReturncode()) +
                                    " (singular matrix)",
                                -1);
    }
#else
    if (lu->info() != Eigen::Success) {
      const std::string msg = lu->lastErrorMessage();
      throw SingularMatrixError("factorize: " + msg, trailing_index(msg));
    }
#endif
    impl->solver = std::move(lu);
  }
  ++g_factorizations;
  return Factorization(std::move(impl), static_cast<int>(a.rows()), symmetry);
}

Vector Factorization::solve(const Vector& rhs) const {
  if (rhs.size() != dimension_) {
    throw std::invalid_argument("solve: rhs has size " + std::to_string(rhs.size()) +
                                ", factorization has dimension " + std::to_string(dimension_));
  }
  return std::visit([&rhs](const auto& s) -> Vector { return s->solve(rhs); }, impl_->solver);
}

std::uint64_t factorization_count() { return g_factorizations.load(); }

}  // namespace sdflow
