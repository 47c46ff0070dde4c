#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "risim/forward_model.hpp"
#include "risim/types.hpp"

namespace risim {

enum class PhaseSource { kDesigned, kDft, kRandom };

std::string_view to_string(PhaseSource source);
/// Accepts "designed", "dft" and "random"; throws InvalidArgument otherwise.
PhaseSource parse_phase_source(std::string_view text);

/// N x M RIS phase profiles, one row per pulse, unit-modulus entries.
struct PhaseMatrix {
  CMatrix entries;
  PhaseSource provenance = PhaseSource::kRandom;
  /// Objective after each design iteration (empty for baselines).
  std::vector<double> design_log;
  /// Objective at the initial point, set by design().
  std::optional<double> initial_objective;

  int num_pulses() const { return static_cast<int>(entries.rows()); }
  int num_elements() const { return static_cast<int>(entries.cols()); }
};

struct DesignConfig {
  double step_size = 0.01;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  /// Stop once |J_k - J_{k-1}| / max(J_{k-1}, 1e-30) drops below this; 0 disables.
  double objective_tolerance = 0.0;
  /// Scale each step by 1 / ||gradient||_F so that step_size is the Frobenius
  /// length of the move.
  bool normalize_gradient = false;
};

/// ||D^H D - I||_F^2 with D = Phi diag(q) Psi (unnormalized).
double objective(const CMatrix& phi, const Dictionary& dict);

/// D (D^H D - I) (diag(q) Psi)^H evaluated at phi.
///
/// This is half of the conjugate Wirtinger derivative dJ/dPhi*, so the
/// first-order change of J along a direction Delta is 4 Re<gradient, Delta>.
/// The factor is absorbed into the step size.
CMatrix gradient(const CMatrix& phi, const Dictionary& dict);

/// Entrywise z / |z|; exact zeros map to 1.
CMatrix project_unit_modulus(const CMatrix& m);

/// Projected gradient descent on the Gram objective starting from
/// random_phases(num_pulses, M, config.seed).
///
/// Throws DivergenceError when the objective becomes non-finite.
PhaseMatrix design(const Dictionary& dict, int num_pulses, const DesignConfig& config);
/// Same, from an explicit unit-modulus starting point.
PhaseMatrix design(const Dictionary& dict, const CMatrix& initial, const DesignConfig& config);

/// First N rows of the M-point DFT matrix, entries exp(-j 2 pi n m / M).
PhaseMatrix dft_phases(int num_pulses, int num_elements);

/// I.i.d. phases uniform on [0, 2 pi).
PhaseMatrix random_phases(int num_pulses, int num_elements, std::uint64_t seed);

/// max_{i != j} |d_i^H d_j| / (||d_i|| ||d_j||), in [0, 1].
double mutual_coherence(const CMatrix& d);

}  // namespace risim
