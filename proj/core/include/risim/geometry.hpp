#pragma once

#include <functional>
#include <vector>

#include "risim/types.hpp"

namespace risim {

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// Carrier, medium and transmitter constants of the bistatic link.
///
/// The wavelength is always derived from the carrier and propagation speed;
/// the scalar pulse spectrum P multiplies every attenuation coefficient.
class RadioConstants {
 public:
  explicit RadioConstants(double carrier_frequency_hz,
                          double propagation_speed_m_s = kSpeedOfLight,
                          double power_efficiency = 1.0,
                          Complex pulse_spectrum = {1.0, 0.0});

  double carrier_frequency_hz() const { return carrier_frequency_hz_; }
  double propagation_speed() const { return propagation_speed_; }
  double wavelength() const { return wavelength_; }
  double power_efficiency() const { return power_efficiency_; }
  Complex pulse_spectrum() const { return pulse_spectrum_; }
  /// 2*pi*f_c, the single evaluation frequency of the model.
  double angular_frequency() const;

 private:
  double carrier_frequency_hz_;
  double propagation_speed_;
  double wavelength_;
  double power_efficiency_;
  Complex pulse_spectrum_;
};

/// Transmit antenna gain as a function of (azimuth, elevation) in radians.
class AntennaPattern {
 public:
  using Function = std::function<double(double azimuth, double elevation)>;

  /// Isotropic unit gain.
  AntennaPattern();
  explicit AntennaPattern(Function gain);

  /// Throws InvalidArgument if the wrapped function returns a negative or
  /// non-finite gain.
  double operator()(double azimuth, double elevation) const;

 private:
  Function gain_;
};

struct SphericalCoord {
  double range;
  double azimuth;
  double elevation;
};

/// Rectangular target grid in the z = origin.z plane. Range runs along x and
/// is the outer index; cross-range runs along y.
struct GridShape {
  int range_points = 0;
  int crossrange_points = 0;
  double spacing_m = 0.0;
  Vec3 origin = Vec3::Zero();

  int size() const { return range_points * crossrange_points; }
  int index(int range_idx, int crossrange_idx) const {
    return range_idx * crossrange_points + crossrange_idx;
  }
};

class SceneGeometry {
 public:
  /// Validates finiteness, non-empty element/target lists and the
  /// no-coincidence rules; throws DegenerateGeometry or InvalidArgument.
  SceneGeometry(Vec3 tx, Vec3 rx, std::vector<Vec3> ris_elements,
                std::vector<Vec3> target_grid, RadioConstants constants);

  const Vec3& tx() const { return tx_; }
  const Vec3& rx() const { return rx_; }
  const std::vector<Vec3>& ris_elements() const { return ris_; }
  const std::vector<Vec3>& targets() const { return targets_; }
  const RadioConstants& constants() const { return constants_; }

  int num_elements() const { return static_cast<int>(ris_.size()); }
  int num_targets() const { return static_cast<int>(targets_.size()); }

 private:
  Vec3 tx_;
  Vec3 rx_;
  std::vector<Vec3> ris_;
  std::vector<Vec3> targets_;
  RadioConstants constants_;
};

/// RIS elements on the YZ plane: origin + (0, j*spacing, i*spacing), i over
/// rows (outer), j over columns.
std::vector<Vec3> build_ris_rectangular(int rows, int cols, double spacing_m,
                                        const Vec3& origin);

std::vector<Vec3> build_target_grid(int range_points, int crossrange_points,
                                    double spacing_m, const Vec3& origin);
std::vector<Vec3> build_target_grid(const GridShape& shape);

/// Azimuth atan2(dy, dx), elevation asin(dz / r).
SphericalCoord spherical_from_tx(const Vec3& point, const Vec3& tx);

/// q = lambda * sqrt(eta * g) / (4 pi r) * exp(-j 2 pi r / lambda).
Complex attenuation_coefficient(double range, double azimuth, double elevation,
                                const AntennaPattern& pattern,
                                const RadioConstants& constants);

/// Two-hop length RIS element -> target -> receiver.
double path_distance(const Vec3& ris_pos, const Vec3& target_pos,
                     const Vec3& rx_pos);

/// q_m for every element of the scene (without the pulse spectrum factor).
CVector attenuation_coefficients(const SceneGeometry& scene,
                                 const AntennaPattern& pattern = {});

}  // namespace risim
