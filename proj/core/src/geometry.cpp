#include "risim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "risim/errors.hpp"

namespace risim {

namespace {

bool finite(const Vec3& v) { return v.allFinite(); }

std::string describe(const Vec3& v) {
  std::ostringstream os;
  os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return os.str();
}

}  // namespace

RadioConstants::RadioConstants(double carrier_frequency_hz,
                               double propagation_speed_m_s,
                               double power_efficiency, Complex pulse_spectrum)
    : carrier_frequency_hz_(carrier_frequency_hz),
      propagation_speed_(propagation_speed_m_s),
      wavelength_(propagation_speed_m_s / carrier_frequency_hz),
      power_efficiency_(power_efficiency),
      pulse_spectrum_(pulse_spectrum) {
  if (!(carrier_frequency_hz > 0.0) || !std::isfinite(carrier_frequency_hz)) {
    throw InvalidArgument("carrier frequency must be positive and finite");
  }
  if (!(propagation_speed_m_s > 0.0) || !std::isfinite(propagation_speed_m_s)) {
    throw InvalidArgument("propagation speed must be positive and finite");
  }
  if (!(power_efficiency > 0.0) || power_efficiency > 1.0) {
    throw InvalidArgument("power efficiency must lie in (0, 1]");
  }
  if (!std::isfinite(pulse_spectrum.real()) ||
      !std::isfinite(pulse_spectrum.imag())) {
    throw InvalidArgument("pulse spectrum must be finite");
  }
}

double RadioConstants::angular_frequency() const {
  return 2.0 * std::numbers::pi * carrier_frequency_hz_;
}

AntennaPattern::AntennaPattern()
    : gain_([](double, double) { return 1.0; }) {}

AntennaPattern::AntennaPattern(Function gain) : gain_(std::move(gain)) {
  if (!gain_) throw InvalidArgument("antenna pattern function is empty");
}

double AntennaPattern::operator()(double azimuth, double elevation) const {
  const double g = gain_(azimuth, elevation);
  if (!(g >= 0.0) || !std::isfinite(g)) {
    throw InvalidArgument("antenna pattern returned a negative or non-finite gain");
  }
  return g;
}

SceneGeometry::SceneGeometry(Vec3 tx, Vec3 rx, std::vector<Vec3> ris_elements,
                             std::vector<Vec3> target_grid,
                             RadioConstants constants)
    : tx_(std::move(tx)),
      rx_(std::move(rx)),
      ris_(std::move(ris_elements)),
      targets_(std::move(target_grid)),
      constants_(constants) {
  if (ris_.empty()) throw InvalidArgument("scene needs at least one RIS element");
  if (targets_.empty()) throw InvalidArgument("scene needs at least one target grid point");
  if (!finite(tx_) || !finite(rx_)) {
    throw InvalidArgument("transmitter and receiver positions must be finite");
  }
  for (const auto& e : ris_) {
    if (!finite(e)) throw InvalidArgument("RIS element position is not finite");
    if (e == tx_) {
      throw DegenerateGeometry("RIS element " + describe(e) +
                               " coincides with the transmitter");
    }
  }
  for (const auto& t : targets_) {
    if (!finite(t)) throw InvalidArgument("target grid position is not finite");
    if (t == rx_) {
      throw DegenerateGeometry("target " + describe(t) + " coincides with the receiver");
    }
    for (const auto& e : ris_) {
      if (t == e) {
        throw DegenerateGeometry("target " + describe(t) +
                                 " coincides with a RIS element");
      }
    }
  }
}

std::vector<Vec3> build_ris_rectangular(int rows, int cols, double spacing_m,
                                        const Vec3& origin) {
  if (rows <= 0 || cols <= 0) {
    throw InvalidArgument("RIS rows and columns must be positive");
  }
  if (!(spacing_m > 0.0)) throw InvalidArgument("RIS spacing must be positive");
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(rows) * cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out.push_back(origin + Vec3(0.0, j * spacing_m, i * spacing_m));
    }
  }
  return out;
}

std::vector<Vec3> build_target_grid(int range_points, int crossrange_points,
                                    double spacing_m, const Vec3& origin) {
  if (range_points <= 0 || crossrange_points <= 0) {
    throw InvalidArgument("grid point counts must be positive");
  }
  if (!(spacing_m > 0.0)) throw InvalidArgument("grid spacing must be positive");
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(range_points) * crossrange_points);
  for (int i = 0; i < range_points; ++i) {
    for (int j = 0; j < crossrange_points; ++j) {
      out.push_back(origin + Vec3(i * spacing_m, j * spacing_m, 0.0));
    }
  }
  return out;
}

std::vector<Vec3> build_target_grid(const GridShape& shape) {
  return build_target_grid(shape.range_points, shape.crossrange_points,
                           shape.spacing_m, shape.origin);
}

SphericalCoord spherical_from_tx(const Vec3& point, const Vec3& tx) {
  const Vec3 delta = point - tx;
  const double r = delta.norm();
  if (!(r > 0.0)) {
    throw DegenerateGeometry("point coincides with the transmitter at " + describe(tx));
  }
  // Clamp guards asin against |dz/r| drifting past 1 by rounding.
  const double s = std::clamp(delta.z() / r, -1.0, 1.0);
  return {r, std::atan2(delta.y(), delta.x()), std::asin(s)};
}

Complex attenuation_coefficient(double range, double azimuth, double elevation,
                                const AntennaPattern& pattern,
                                const RadioConstants& constants) {
  if (!(range > 0.0)) {
    throw DegenerateGeometry("attenuation coefficient needs a positive range");
  }
  const double lambda = constants.wavelength();
  const double gain = pattern(azimuth, elevation);
  const double magnitude = lambda * std::sqrt(constants.power_efficiency() * gain) /
                           (4.0 * std::numbers::pi * range);
  return std::polar(magnitude, -2.0 * std::numbers::pi * range / lambda);
}

double path_distance(const Vec3& ris_pos, const Vec3& target_pos,
                     const Vec3& rx_pos) {
  return (ris_pos - target_pos).norm() + (target_pos - rx_pos).norm();
}

CVector attenuation_coefficients(const SceneGeometry& scene,
                                 const AntennaPattern& pattern) {
  CVector q(scene.num_elements());
  for (int m = 0; m < scene.num_elements(); ++m) {
    const auto sph = spherical_from_tx(scene.ris_elements()[m], scene.tx());
    q(m) = attenuation_coefficient(sph.range, sph.azimuth, sph.elevation, pattern,
                                   scene.constants());
  }
  return q;
}

}  // namespace risim
