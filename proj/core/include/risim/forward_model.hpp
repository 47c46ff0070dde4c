#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "risim/geometry.hpp"
#include "risim/types.hpp"

namespace risim {

/// Scene-determined factors of the measurement matrix D = Phi * diag(q) * Psi.
struct Dictionary {
  CMatrix psi;       ///< M x K steering matrix, unit-modulus entries.
  CVector q_diag;    ///< P * q_m per RIS element.
  double omega = 0;  ///< Evaluation frequency in rad/s.

  int num_elements() const { return static_cast<int>(psi.rows()); }
  int num_targets() const { return static_cast<int>(psi.cols()); }

  /// diag(q) * Psi, the part of D that does not depend on the phases.
  CMatrix weighted() const { return q_diag.asDiagonal() * psi; }
};

struct ReflectivityVector {
  CVector values;
  std::string grid_ref;
};

struct MeasurementSet {
  CVector y;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string d_ref;
};

/// Entry m is exp(-j * omega * d_{m,k} / c).
CVector steering_vector(int target_index, const SceneGeometry& scene, double omega);

Dictionary build_dictionary(const SceneGeometry& scene, double omega,
                            const AntennaPattern& pattern = {});
/// Evaluates at omega = 2 pi f_c.
Dictionary build_dictionary(const SceneGeometry& scene,
                            const AntennaPattern& pattern = {});

CMatrix measurement_matrix(const CMatrix& phi, const Dictionary& dict);

/// y = D r + n with n ~ CN(0, sigma^2 I) drawn from Rng(seed).
MeasurementSet synthesize(const CMatrix& d, const ReflectivityVector& r,
                          double sigma, std::uint64_t seed);

/// Unit-norm columns and the original norms; throws DegenerateMatrix on a
/// zero column.
std::pair<CMatrix, RVector> column_normalize(const CMatrix& d);

CMatrix gram(const CMatrix& d_normalized);

}  // namespace risim
