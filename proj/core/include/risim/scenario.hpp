#pragma once

#include <vector>

#include "risim/config.hpp"
#include "risim/geometry.hpp"
#include "risim/phase_design.hpp"
#include "risim/sparse_recovery.hpp"

namespace risim {

struct RisShape {
  int rows = 20;
  int cols = 20;
  int size() const { return rows * cols; }
};

/// Everything needed to build a SceneGeometry. Defaults are the bistatic
/// setup of the reference experiments: 10 GHz, 20x20 RIS at quarter
/// wavelength spacing, 10x10 target grid at 0.6 m.
struct SceneSpec {
  Vec3 tx{0.2, 0.1, 0.1};
  Vec3 rx{0.0, 0.7, 0.0};
  RisShape ris{};
  double ris_spacing_m = 0.25 * kSpeedOfLight / 1e10;
  Vec3 ris_origin = Vec3::Zero();
  GridShape grid{10, 10, 0.6, Vec3(3.8, 0.0, 0.0)};
  double carrier_hz = 1e10;
  double propagation_speed = kSpeedOfLight;
  double power_efficiency = 1.0;
  Complex pulse_spectrum{1.0, 0.0};

  RadioConstants constants() const;
  SceneGeometry build() const;
  /// Same scene with a different RIS array.
  SceneGeometry build(const RisShape& ris_shape) const;
};

enum class SnapMode { kExact, kNearest };

struct GridMapping {
  Vec3 requested;
  int index = -1;
  Vec3 node;
  double offset_m = 0.0;  ///< Distance from the requested point to the node.
};

/// Maps a point to its grid node. kExact accepts offsets up to 1e-9 m and
/// otherwise throws InvalidArgument naming the coordinate; kNearest rounds
/// to the closest node inside the grid.
GridMapping locate_on_grid(const GridShape& grid, const Vec3& point, SnapMode mode);

struct TargetSpec {
  int grid_index = 0;
  Complex amplitude{1.0, 0.0};
};

SceneSpec scene_from_config(const KeyValueConfig& cfg);

/// Resolves targets.positions / targets.indices / targets.shape to grid
/// targets. Position mappings are appended to `mappings` when given.
std::vector<TargetSpec> targets_from_config(const KeyValueConfig& cfg, const GridShape& grid,
                                            std::vector<GridMapping>* mappings = nullptr);

DesignConfig design_from_config(const KeyValueConfig& cfg);
RecoveryConfig recovery_from_config(const KeyValueConfig& cfg);

}  // namespace risim
