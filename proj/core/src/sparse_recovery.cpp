#include "risim/sparse_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "risim/errors.hpp"
#include "risim/random.hpp"

namespace risim {

namespace {

// Per-step tolerance on the accepted objective sequence, relative to its value.
constexpr double kObjectiveSlack = 1e-12;

CMatrix restrict_columns(const CMatrix& d, const std::vector<int>& support) {
  CMatrix out(d.rows(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) out.col(i) = d.col(support[i]);
  return out;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Advances `idx` to the next k-combination of [0, n) in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return true;
}

}  // namespace

Complex soft_threshold(Complex z, double tau) {
  const double r = std::abs(z);
  if (r <= tau) return {0.0, 0.0};
  return z * (1.0 - tau / r);
}

double lipschitz_estimate(const CMatrix& d, int iterations, double rel_tol) {
  if (d.size() == 0) return 0.0;
  // Fixed pseudo-random start so the estimate is reproducible and not
  // orthogonal to the dominant eigenvector by construction.
  Rng rng(0x5eedULL);
  CVector v(d.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_normal(1.0);
  v.normalize();
  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    CVector w = d.adjoint() * (d * v);
    const double next = w.norm();
    if (next == 0.0) return 0.0;
    v = w / next;
    const bool done = std::abs(next - estimate) <= rel_tol * next;
    estimate = next;
    if (done) break;
  }
  return estimate;
}

RecoveryResult solve_l1(const CMatrix& d, const CVector& y, const RecoveryConfig& config) {
  if (d.rows() != y.size()) {
    throw InvalidArgument("measurement length " + std::to_string(y.size()) +
                          " does not match " + std::to_string(d.rows()) + " matrix rows");
  }
  if (!d.allFinite() || !y.allFinite()) throw InvalidArgument("non-finite recovery input");
  if (config.max_iterations < 1) throw InvalidArgument("max_iterations must be positive");
  if (!(config.convergence_tol > 0.0)) throw InvalidArgument("convergence_tol must be positive");

  RecoveryResult out;
  const CVector dhy = d.adjoint() * y;
  if (config.regularization_lambda) {
    out.lambda = *config.regularization_lambda;
  } else {
    out.lambda = config.lambda_fraction * (dhy.size() ? dhy.cwiseAbs().maxCoeff() : 0.0);
  }
  if (!(out.lambda >= 0.0) || !std::isfinite(out.lambda)) {
    throw InvalidArgument("regularization lambda must be nonnegative");
  }
  out.ill_posed = out.lambda == 0.0 && d.rows() < d.cols();

  const Eigen::Index k = d.cols();
  auto objective = [&](const CVector& r) {
    return 0.5 * (y - d * r).squaredNorm() + out.lambda * r.cwiseAbs().sum();
  };
  auto prox_step = [&](const CVector& z, double step) {
    CVector v = z - step * (d.adjoint() * (d * z) - dhy);
    const double tau = out.lambda * step;
    return CVector(v.unaryExpr([tau](const Complex& c) { return soft_threshold(c, tau); }));
  };

  double lipschitz = lipschitz_estimate(d);
  CVector x = CVector::Zero(k);
  double fx = objective(x);
  if (lipschitz == 0.0) {
    out.r_hat = x;
    out.converged = true;
  } else {
    CVector z = x;
    double t = 1.0;
    bool momentum = false;
    // Rises below this are rounding noise; treating them as failures would
    // stall the iterate long before it settles.
    auto rises = [&](double f_new) { return f_new > fx + kObjectiveSlack * std::abs(fx); };
    for (int it = 1; it <= config.max_iterations; ++it) {
      CVector candidate = prox_step(z, 1.0 / lipschitz);
      double fc = objective(candidate);
      if (rises(fc)) {
        if (momentum) {
          // Restart from the last accepted point without extrapolation.
          z = x;
          t = 1.0;
          momentum = false;
          candidate = prox_step(z, 1.0 / lipschitz);
          fc = objective(candidate);
        }
        // Underestimated L; tighten until the plain step descends.
        while (rises(fc) && lipschitz < 1e300) {
          lipschitz *= 2.0;
          candidate = prox_step(x, 1.0 / lipschitz);
          fc = objective(candidate);
        }
        if (rises(fc)) {
          // No descent even with a vanishing step: x is optimal to rounding.
          out.converged = true;
          out.iterations_used = it;
          break;
        }
      }
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      z = candidate + ((t - 1.0) / t_next) * (candidate - x);
      momentum = true;
      t = t_next;
      const double change = std::abs(fx - fc);
      const double scale = std::max(fx, 1e-300);
      x = std::move(candidate);
      fx = fc;
      out.objective_history.push_back(fx);
      out.iterations_used = it;
      if (change <= config.convergence_tol * scale) {
        out.converged = true;
        break;
      }
    }
    out.r_hat = x;
  }
  out.objective = fx;
  out.residual_norm = (y - d * out.r_hat).norm();
  if (config.sparsity_T) {
    out.support = extract_support(out.r_hat, *config.sparsity_T);
  } else {
    for (Eigen::Index i = 0; i < k; ++i) {
      if (out.r_hat(i) != Complex(0.0, 0.0)) out.support.push_back(static_cast<int>(i));
    }
  }
  return out;
}

RecoveryResult exhaustive_l0(const CMatrix& d, const CVector& y, int sparsity_T,
                             double max_supports) {
  const int k = static_cast<int>(d.cols());
  if (d.rows() != y.size()) throw InvalidArgument("measurement length does not match matrix rows");
  if (sparsity_T < 1 || sparsity_T > k) {
    throw InvalidArgument("sparsity must lie in [1, K]");
  }
  if (sparsity_T > d.rows()) throw InvalidArgument("sparsity exceeds the number of measurements");
  const double count = binomial(k, sparsity_T);
  if (count > max_supports) {
    throw TooLargeError("exhaustive search over C(" + std::to_string(k) + ", " +
                        std::to_string(sparsity_T) + ") supports exceeds the bound of " +
                        std::to_string(static_cast<long long>(max_supports)));
  }

  std::vector<int> idx(sparsity_T);
  std::iota(idx.begin(), idx.end(), 0);
  RecoveryResult out;
  out.r_hat = CVector::Zero(k);
  double best = std::numeric_limits<double>::infinity();
  CVector best_coeffs;
  // Residuals within this band count as ties and keep the earlier support.
  const double tie = 1e-12 * std::max(y.squaredNorm(), 1e-300);
  int visited = 0;
  do {
    const CMatrix sub = restrict_columns(d, idx);
    const CVector coeffs = sub.colPivHouseholderQr().solve(y);
    const double res = (y - sub * coeffs).squaredNorm();
    ++visited;
    if (res < best - tie) {
      best = res;
      best_coeffs = coeffs;
      out.support = idx;
    }
  } while (next_combination(idx, k));

  for (std::size_t i = 0; i < out.support.size(); ++i) out.r_hat(out.support[i]) = best_coeffs(i);
  out.residual_norm = std::sqrt(best);
  out.objective = best;
  out.iterations_used = visited;
  out.converged = true;
  return out;
}

std::vector<int> extract_support(const CVector& r_hat, int sparsity_T) {
  const int k = static_cast<int>(r_hat.size());
  if (sparsity_T < 1 || sparsity_T > k) {
    throw InvalidArgument("support size " + std::to_string(sparsity_T) + " outside [1, " +
                          std::to_string(k) + "]");
  }
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(r_hat(a)) > std::abs(r_hat(b));
  });
  order.resize(sparsity_T);
  std::sort(order.begin(), order.end());
  return order;
}

DebiasResult debias_on_support(const CMatrix& d, const CVector& y,
                               const std::vector<int>& support) {
  if (d.rows() != y.size()) throw InvalidArgument("measurement length does not match matrix rows");
  for (int s : support) {
    if (s < 0 || s >= d.cols()) throw InvalidArgument("support index out of range");
  }
  DebiasResult out;
  out.r = CVector::Zero(d.cols());
  if (support.empty()) return out;
  if (static_cast<Eigen::Index>(support.size()) > d.rows()) {
    throw InvalidArgument("support larger than the number of measurements");
  }
  const CMatrix sub = restrict_columns(d, support);
  Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(sub);
  out.rank_deficient = cod.rank() < static_cast<Eigen::Index>(support.size());
  const CVector coeffs = cod.solve(y);
  for (std::size_t i = 0; i < support.size(); ++i) out.r(support[i]) = coeffs(i);
  return out;
}

}  // namespace risim
