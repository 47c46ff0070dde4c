#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "risim/io.hpp"
#include "risim/phase_design.hpp"
#include "risim/scenario.hpp"
#include "risim/sparse_recovery.hpp"

namespace risim {

struct ExperimentConfig {
  SceneSpec scene;
  std::vector<PhaseSource> phase_sources{PhaseSource::kDesigned};
  std::vector<int> n_pulses_list;
  /// RIS arrays to sweep; empty means the scene's own array.
  std::vector<RisShape> ris_sizes;
  int num_realizations = 100;
  double sigma = 0.01;
  std::vector<TargetSpec> targets;
  std::uint64_t master_seed = 1;
  DesignConfig design;
  RecoveryConfig recovery;
  /// Worker threads for the realizations of one cell; 0 means hardware
  /// concurrency.
  int threads = 1;
  /// Keep the per-realization support errors in each SweepRow.
  bool record_raw = false;
};

struct SweepRow {
  int M = 0;
  int N = 0;
  PhaseSource phase_source = PhaseSource::kDesigned;
  double p_e = 0.0;
  /// Fraction of realizations whose whole support was correct.
  double success_rate = 0.0;
  double mutual_coherence = 0.0;
  int num_realizations = 0;
  double seconds = 0.0;
  std::vector<double> raw_errors;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  /// M ascending, then N, then the phase source name.
  void sort();
};

/// Fraction of the true indices missing from the estimate.
double support_error(const std::vector<int>& true_support, const std::vector<int>& est_support,
                     int sparsity_T);

/// Noise seed of realization i in cell (M, N, source):
/// split_seed(master, M, N, source, i) with the SplitMix64 folding of
/// random.hpp. Distinct cells and realizations never share a stream.
std::uint64_t realization_seed(std::uint64_t master_seed, int M, int N, PhaseSource source,
                               int realization);

/// Phase matrix of one sweep cell: designed from config.design, the DFT
/// rows, or random phases seeded from the master seed.
PhaseMatrix cell_phases(PhaseSource source, const Dictionary& dict, int num_pulses,
                        const ExperimentConfig& config);

/// Monte Carlo estimate of P_e over every (RIS size, N, phase source) cell.
SweepResult run_point_target_experiment(const ExperimentConfig& config);

struct ExtendedTargetResult {
  io::AmplitudeMap amplitude_map;
  std::vector<int> true_support;
  std::vector<int> estimated_support;
  double f1 = 0.0;
  RecoveryResult recovery;
  bool rank_deficient = false;
  PhaseMatrix phases;
};

/// One noiseless-or-noisy reconstruction of an extended target using the
/// first entry of n_pulses_list, the first phase source and the scene's RIS.
ExtendedTargetResult run_extended_target_experiment(const ExperimentConfig& config);

double support_f1(const std::vector<int>& true_support, const std::vector<int>& est_support);

/// Full top row plus the center column (index (cols - 1) / 2), ascending.
std::vector<int> make_t_shape(int rows, int cols);

/// CSV header M,N,phase_source,P_e,realizations,seconds; rows in sort order.
void export_sweep(const SweepResult& result, const std::filesystem::path& path);
SweepResult read_sweep(const std::filesystem::path& path);

/// Extended CSV with success rate and mutual coherence per cell.
void export_sweep_details(const SweepResult& result, const std::filesystem::path& path);
/// Per-realization support errors (rows recorded with record_raw).
void export_raw_realizations(const SweepResult& result, const std::filesystem::path& path);

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg,
                                        std::vector<GridMapping>* mappings = nullptr);

}  // namespace risim
