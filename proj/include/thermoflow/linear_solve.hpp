#ifndef THERMOFLOW_LINEAR_SOLVE_HPP_
#define THERMOFLOW_LINEAR_SOLVE_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermoflow/grid.hpp"

namespace thermoflow {

enum class LinearMethod { direct, bicgstab };

struct LinearReport {
  int iterations = 0;         // 0 for the direct path
  double relative_residual = 0.0;
};

class LinearSolveError : public std::runtime_error {
 public:
  LinearSolveError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Solver for one family of systems that share a sparsity pattern (e.g. every
// momentum matrix of a run). The direct path reuses its symbolic analysis
// while the pattern is unchanged.
class LinearSolver {
 public:
  explicit LinearSolver(LinearMethod method = LinearMethod::direct, double tol = 1e-10,
                        int max_iters = 2000);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  // x holds the initial guess for the iterative path. Throws LinearSolveError
  // when ||A x - b|| / ||b|| > tol on exit.
  LinearReport solve(const SparseMatrix& a, const Vector& b, Vector& x);

  LinearMethod method() const { return method_; }
  double tolerance() const { return tol_; }

 private:
  struct Impl;
  LinearMethod method_;
  double tol_;
  int max_iters_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace thermoflow

#endif  // THERMOFLOW_LINEAR_SOLVE_HPP_
