#include "risim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risim/errors.hpp"
#include "risim/experiments.hpp"

namespace risim {

RadioConstants SceneSpec::constants() const {
  return RadioConstants(carrier_hz, propagation_speed, power_efficiency, pulse_spectrum);
}

SceneGeometry SceneSpec::build() const { return build(ris); }

SceneGeometry SceneSpec::build(const RisShape& ris_shape) const {
  return SceneGeometry(tx, rx, build_ris_rectangular(ris_shape.rows, ris_shape.cols, ris_spacing_m, ris_origin),
                       build_target_grid(grid), constants());
}

GridMapping locate_on_grid(const GridShape& grid, const Vec3& point, SnapMode mode) {
  if (grid.range_points <= 0 || grid.crossrange_points <= 0 || !(grid.spacing_m > 0.0)) {
    throw InvalidArgument("grid shape is not valid");
  }
  const Vec3 rel = (point - grid.origin) / grid.spacing_m;
  const int i = std::clamp(static_cast<int>(std::lround(rel.x())), 0, grid.range_points - 1);
  const int j = std::clamp(static_cast<int>(std::lround(rel.y())), 0, grid.crossrange_points - 1);
  GridMapping out;
  out.requested = point;
  out.index = grid.index(i, j);
  out.node = grid.origin + Vec3(i * grid.spacing_m, j * grid.spacing_m, 0.0);
  out.offset_m = (out.node - point).norm();
  if (mode == SnapMode::kExact && out.offset_m > 1e-9) {
    std::ostringstream os;
    os << "target (" << point.x() << ", " << point.y() << ", " << point.z()
       << ") is not on the target grid (nearest node is " << out.offset_m << " m away)";
    throw InvalidArgument(os.str());
  }
  return out;
}

SceneSpec scene_from_config(const KeyValueConfig& cfg) {
  SceneSpec s;
  s.tx = cfg.get_vec3("scene.tx", s.tx);
  s.rx = cfg.get_vec3("scene.rx", s.rx);
  s.carrier_hz = cfg.get_double("radio.carrier_hz", s.carrier_hz);
  s.propagation_speed = cfg.get_double("radio.speed", s.propagation_speed);
  s.power_efficiency = cfg.get_double("radio.eta", s.power_efficiency);
  s.pulse_spectrum = cfg.get_complex("radio.pulse_spectrum", s.pulse_spectrum);
  const double lambda = s.constants().wavelength();

  s.ris.rows = static_cast<int>(cfg.get_int("ris.rows", s.ris.rows));
  s.ris.cols = static_cast<int>(cfg.get_int("ris.cols", s.ris.cols));
  if (cfg.has("ris.spacing") && cfg.has("ris.spacing_wavelengths")) {
    throw InvalidArgument("set only one of ris.spacing and ris.spacing_wavelengths");
  }
  s.ris_spacing_m = cfg.has("ris.spacing") ? cfg.get_double("ris.spacing", 0.0)
                                           : cfg.get_double("ris.spacing_wavelengths", 0.25) * lambda;
  s.ris_origin = cfg.get_vec3("ris.origin", s.ris_origin);

  s.grid.range_points = static_cast<int>(cfg.get_int("grid.range_points", s.grid.range_points));
  s.grid.crossrange_points =
      static_cast<int>(cfg.get_int("grid.crossrange_points", s.grid.crossrange_points));
  if (cfg.has("grid.spacing") && cfg.has("grid.spacing_wavelengths")) {
    throw InvalidArgument("set only one of grid.spacing and grid.spacing_wavelengths");
  }
  if (cfg.has("grid.spacing_wavelengths")) {
    s.grid.spacing_m = cfg.get_double("grid.spacing_wavelengths", 20.0) * lambda;
  } else {
    s.grid.spacing_m = cfg.get_double("grid.spacing", s.grid.spacing_m);
  }
  s.grid.origin = cfg.get_vec3("grid.origin", s.grid.origin);
  if (s.grid.range_points <= 0 || s.grid.crossrange_points <= 0 || !(s.grid.spacing_m > 0.0)) {
    throw InvalidArgument("grid dimensions and spacing must be positive");
  }
  return s;
}

std::vector<TargetSpec> targets_from_config(const KeyValueConfig& cfg, const GridShape& grid,
                                            std::vector<GridMapping>* mappings) {
  std::vector<int> indices;
  const int sources = cfg.has("targets.positions") + cfg.has("targets.indices") + cfg.has("targets.shape");
  if (sources > 1) {
    throw InvalidArgument("set only one of targets.positions, targets.indices and targets.shape");
  }
  if (cfg.has("targets.positions")) {
    const auto snap_text = cfg.get_string("targets.snap", "exact");
    if (snap_text != "exact" && snap_text != "nearest") {
      throw InvalidArgument("targets.snap must be 'exact' or 'nearest'");
    }
    const auto mode = snap_text == "nearest" ? SnapMode::kNearest : SnapMode::kExact;
    for (const auto& p : cfg.get_list("targets.positions", ';')) {
      const auto xyz = split_trimmed(p, ',');
      if (xyz.size() != 3) throw InvalidArgument("target position '" + p + "' needs x, y, z");
      const Vec3 point(std::stod(xyz[0]), std::stod(xyz[1]), std::stod(xyz[2]));
      const auto m = locate_on_grid(grid, point, mode);
      if (mappings) mappings->push_back(m);
      indices.push_back(m.index);
    }
  } else if (cfg.has("targets.indices")) {
    for (auto v : cfg.get_int_list("targets.indices")) indices.push_back(static_cast<int>(v));
  } else if (cfg.has("targets.shape")) {
    const auto shape = cfg.get_string("targets.shape", "");
    if (shape != "t") throw InvalidArgument("unknown targets.shape '" + shape + "' (expected t)");
    indices = make_t_shape(grid.range_points, grid.crossrange_points);
  }

  std::vector<Complex> amplitudes;
  for (const auto& a : cfg.get_list("targets.amplitudes", ';')) {
    const auto parts = split_trimmed(a, ',');
    if (parts.empty() || parts.size() > 2) throw InvalidArgument("target amplitude '" + a + "' needs re[, im]");
    amplitudes.emplace_back(std::stod(parts[0]), parts.size() == 2 ? std::stod(parts[1]) : 0.0);
  }
  if (!amplitudes.empty() && amplitudes.size() != indices.size()) {
    throw InvalidArgument("targets.amplitudes has " + std::to_string(amplitudes.size()) +
                          " entries for " + std::to_string(indices.size()) + " targets");
  }

  std::vector<TargetSpec> out;
  for (std::size_t t = 0; t < indices.size(); ++t) {
    if (indices[t] < 0 || indices[t] >= grid.size()) {
      throw InvalidArgument("target index " + std::to_string(indices[t]) + " is outside the grid");
    }
    out.push_back({indices[t], amplitudes.empty() ? Complex(1.0, 0.0) : amplitudes[t]});
  }
  return out;
}

DesignConfig design_from_config(const KeyValueConfig& cfg) {
  DesignConfig d;
  d.step_size = cfg.get_double("design.step_size", d.step_size);
  d.max_iter = static_cast<int>(cfg.get_int("design.max_iter", d.max_iter));
  d.seed = static_cast<std::uint64_t>(cfg.get_int("design.seed", static_cast<long long>(d.seed)));
  d.objective_tolerance = cfg.get_double("design.objective_tolerance", d.objective_tolerance);
  d.normalize_gradient = cfg.get_bool("design.normalize_gradient", d.normalize_gradient);
  return d;
}

RecoveryConfig recovery_from_config(const KeyValueConfig& cfg) {
  RecoveryConfig r;
  r.regularization_lambda = cfg.get_optional_double("recovery.lambda");
  r.lambda_fraction = cfg.get_double("recovery.lambda_fraction", r.lambda_fraction);
  r.max_iterations = static_cast<int>(cfg.get_int("recovery.max_iterations", r.max_iterations));
  r.convergence_tol = cfg.get_double("recovery.tolerance", r.convergence_tol);
  return r;
}

}  // namespace risim
