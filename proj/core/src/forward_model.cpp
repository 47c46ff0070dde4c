#include "risim/forward_model.hpp"

#include <cmath>

#include "risim/errors.hpp"
#include "risim/random.hpp"

namespace risim {

CVector steering_vector(int target_index, const SceneGeometry& scene, double omega) {
  if (target_index < 0 || target_index >= scene.num_targets()) {
    throw InvalidArgument("target index " + std::to_string(target_index) +
                          " out of range [0, " + std::to_string(scene.num_targets()) + ")");
  }
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  const auto& target = scene.targets()[target_index];
  const double c = scene.constants().propagation_speed();
  CVector psi(scene.num_elements());
  for (int m = 0; m < scene.num_elements(); ++m) {
    const double d = path_distance(scene.ris_elements()[m], target, scene.rx());
    psi(m) = std::polar(1.0, -omega * d / c);
  }
  return psi;
}

Dictionary build_dictionary(const SceneGeometry& scene, double omega,
                            const AntennaPattern& pattern) {
  Dictionary dict;
  dict.omega = omega;
  dict.psi.resize(scene.num_elements(), scene.num_targets());
  for (int k = 0; k < scene.num_targets(); ++k) {
    dict.psi.col(k) = steering_vector(k, scene, omega);
  }
  dict.q_diag = scene.constants().pulse_spectrum() * attenuation_coefficients(scene, pattern);
  return dict;
}

Dictionary build_dictionary(const SceneGeometry& scene, const AntennaPattern& pattern) {
  return build_dictionary(scene, scene.constants().angular_frequency(), pattern);
}

CMatrix measurement_matrix(const CMatrix& phi, const Dictionary& dict) {
  if (phi.cols() != dict.psi.rows() || dict.q_diag.size() != dict.psi.rows()) {
    throw InvalidArgument("phase matrix has " + std::to_string(phi.cols()) +
                          " columns but the dictionary has " +
                          std::to_string(dict.psi.rows()) + " elements");
  }
  return phi * dict.weighted();
}

MeasurementSet synthesize(const CMatrix& d, const ReflectivityVector& r, double sigma,
                          std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("noise sigma must be a nonnegative finite value");
  }
  if (d.cols() != r.values.size()) {
    throw InvalidArgument("reflectivity length " + std::to_string(r.values.size()) +
                          " does not match the " + std::to_string(d.cols()) +
                          " columns of the measurement matrix");
  }
  MeasurementSet out;
  out.y = d * r.values;
  out.sigma = sigma;
  out.seed = seed;
  if (sigma > 0.0) {
    Rng rng(seed);
    const double variance = sigma * sigma;
    for (Eigen::Index i = 0; i < out.y.size(); ++i) out.y(i) += rng.complex_normal(variance);
  }
  return out;
}

std::pair<CMatrix, RVector> column_normalize(const CMatrix& d) {
  RVector norms = d.colwise().norm().transpose();
  CMatrix out = d;
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    if (!(norms(k) > 0.0)) {
      throw DegenerateMatrix("column " + std::to_string(k) + " has zero norm");
    }
    out.col(k) /= norms(k);
  }
  return {std::move(out), std::move(norms)};
}

CMatrix gram(const CMatrix& d_normalized) {
  return d_normalized.adjoint() * d_normalized;
}

}  // namespace risim
