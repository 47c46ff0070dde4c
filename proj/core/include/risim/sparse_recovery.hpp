#pragma once

#include <optional>
#include <vector>

#include "risim/types.hpp"

namespace risim {

struct RecoveryConfig {
  /// Fixed l1 weight. When unset, lambda = lambda_fraction * ||D^H y||_inf.
  std::optional<double> regularization_lambda;
  double lambda_fraction = 0.1;
  int max_iterations = 5000;
  /// Stop when the relative objective change falls below this.
  double convergence_tol = 1e-10;
  /// Known target count; the support is then the T largest moduli.
  std::optional<int> sparsity_T;
};

struct RecoveryResult {
  CVector r_hat;
  std::vector<int> support;  ///< Ascending grid indices.
  double residual_norm = 0.0;
  int iterations_used = 0;
  bool converged = false;
  double lambda = 0.0;
  double objective = 0.0;
  /// Objective after every accepted iteration (solve_l1 only).
  std::vector<double> objective_history;
  /// lambda == 0 with fewer measurements than unknowns.
  bool ill_posed = false;
};

/// Minimizes 0.5 ||y - D r||^2 + lambda ||r||_1 over complex r.
///
/// Accelerated proximal gradient with complex soft-thresholding. The
/// momentum is reset whenever a step would raise the objective, so the
/// recorded objective sequence never rises by more than 1e-12 of its value
/// (rounding noise). The step is 1/L with L from
/// 20 power iterations on D^H D; if even a plain step fails to descend, L is
/// doubled.
RecoveryResult solve_l1(const CMatrix& d, const CVector& y, const RecoveryConfig& config);

/// Global minimizer of ||y - D r||^2 over all supports of size T.
///
/// Ties go to the lexicographically smallest support. Throws TooLargeError
/// when C(K, T) exceeds max_supports.
RecoveryResult exhaustive_l0(const CMatrix& d, const CVector& y, int sparsity_T,
                             double max_supports = 1e6);

/// Indices of the T largest |r_hat| entries (ties to the smaller index),
/// returned ascending.
std::vector<int> extract_support(const CVector& r_hat, int sparsity_T);

struct DebiasResult {
  CVector r;
  bool rank_deficient = false;
};

/// Least squares restricted to `support`, zero elsewhere. A rank-deficient
/// restriction falls back to the minimum-norm solution and sets the flag.
DebiasResult debias_on_support(const CMatrix& d, const CVector& y,
                               const std::vector<int>& support);

/// Complex soft-thresholding s(z) = z * max(1 - tau / |z|, 0).
Complex soft_threshold(Complex z, double tau);

/// Largest eigenvalue of D^H D by power iteration.
double lipschitz_estimate(const CMatrix& d, int iterations = 20, double rel_tol = 1e-6);

}  // namespace risim
