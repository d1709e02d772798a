#include "thermoflow/linear_solve.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <sstream>

namespace thermoflow {

struct LinearSolver::Impl {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<int> outer;
  std::vector<int> inner;
  bool analyzed = false;

  bool same_pattern(const SparseMatrix& a) const {
    if (!analyzed || static_cast<std::size_t>(a.nonZeros()) != inner.size() ||
        static_cast<std::size_t>(a.outerSize() + 1) != outer.size()) {
      return false;
    }
    return std::equal(outer.begin(), outer.end(), a.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), a.innerIndexPtr());
  }

  void remember(const SparseMatrix& a) {
    outer.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1);
    inner.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    analyzed = true;
  }
};

LinearSolver::LinearSolver(LinearMethod method, double tol, int max_iters)
    : method_(method), tol_(tol), max_iters_(max_iters), impl_(std::make_unique<Impl>()) {}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

LinearReport LinearSolver::solve(const SparseMatrix& a_in, const Vector& b, Vector& x) {
  SparseMatrix a = a_in;
  a.makeCompressed();
  LinearReport report;
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    x.setZero(b.size());
    return report;
  }
  if (method_ == LinearMethod::direct) {
    if (!impl_->same_pattern(a)) {
      impl_->lu.analyzePattern(a);
      impl_->remember(a);
    }
    impl_->lu.factorize(a);
    if (impl_->lu.info() != Eigen::Success) {
      throw LinearSolveError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage(),
                             1.0);
    }
    x = impl_->lu.solve(b);
  } else {
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> it;
    it.preconditioner().setDroptol(1e-6);
    it.preconditioner().setFillfactor(20);
    it.setTolerance(tol_);
    it.setMaxIterations(max_iters_);
    it.compute(a);
    if (x.size() != b.size()) x.setZero(b.size());
    x = it.solveWithGuess(b, x);
    report.iterations = static_cast<int>(it.iterations());
  }
  report.relative_residual = (a * x - b).norm() / bnorm;
  if (!x.allFinite() || !(report.relative_residual <= tol_)) {
    std::ostringstream os;
    os.precision(6);
    os << "linear solve did not reach tolerance " << tol_ << " (relative residual "
       << report.relative_residual << ")";
    throw LinearSolveError(os.str(), report.relative_residual);
  }
  return report;
}

}  // namespace thermoflow
