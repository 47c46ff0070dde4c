#include "risim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include "risim/errors.hpp"
#include "risim/forward_model.hpp"
#include "risim/random.hpp"

namespace risim {

namespace {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const auto hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void validate_targets(const std::vector<TargetSpec>& targets, int num_grid_points) {
  if (targets.empty()) throw InvalidArgument("experiment needs at least one target");
  std::set<int> seen;
  for (const auto& t : targets) {
    if (t.grid_index < 0 || t.grid_index >= num_grid_points) {
      throw InvalidArgument("target grid index " + std::to_string(t.grid_index) +
                            " is outside the grid");
    }
    if (!seen.insert(t.grid_index).second) {
      throw InvalidArgument("target grid index " + std::to_string(t.grid_index) + " repeated");
    }
  }
}

ReflectivityVector scene_reflectivity(const std::vector<TargetSpec>& targets, int k) {
  ReflectivityVector r;
  r.values = CVector::Zero(k);
  for (const auto& t : targets) r.values(t.grid_index) = t.amplitude;
  r.grid_ref = "grid";
  return r;
}

std::vector<int> sorted_support(const std::vector<TargetSpec>& targets) {
  std::vector<int> s;
  for (const auto& t : targets) s.push_back(t.grid_index);
  std::sort(s.begin(), s.end());
  return s;
}

// Label folded into the random-phase seed so it never collides with noise.
constexpr std::uint64_t kRandomPhaseLabel = 0x7068617365ULL;

}  // namespace

void SweepResult::sort() {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.M != b.M) return a.M < b.M;
    if (a.N != b.N) return a.N < b.N;
    return to_string(a.phase_source) < to_string(b.phase_source);
  });
}

double support_error(const std::vector<int>& true_support, const std::vector<int>& est_support,
                     int sparsity_T) {
  if (sparsity_T < 1 || static_cast<int>(true_support.size()) != sparsity_T) {
    throw InvalidArgument("true support has " + std::to_string(true_support.size()) +
                          " entries, expected T=" + std::to_string(sparsity_T));
  }
  const std::set<int> est(est_support.begin(), est_support.end());
  int missed = 0;
  for (int i : true_support) missed += est.count(i) == 0;
  return static_cast<double>(missed) / sparsity_T;
}

std::uint64_t realization_seed(std::uint64_t master_seed, int M, int N, PhaseSource source,
                               int realization) {
  return split_seed(master_seed, M, N, static_cast<int>(source), realization);
}

PhaseMatrix cell_phases(PhaseSource source, const Dictionary& dict, int num_pulses,
                        const ExperimentConfig& config) {
  switch (source) {
    case PhaseSource::kDesigned:
      return design(dict, num_pulses, config.design);
    case PhaseSource::kDft:
      return dft_phases(num_pulses, dict.num_elements());
    case PhaseSource::kRandom:
      return random_phases(num_pulses, dict.num_elements(),
                           split_seed(config.master_seed, dict.num_elements(), num_pulses,
                                      kRandomPhaseLabel));
  }
  throw InvalidArgument("unknown phase source");
}

SweepResult run_point_target_experiment(const ExperimentConfig& config) {
  if (config.n_pulses_list.empty()) throw InvalidArgument("n_pulses_list is empty");
  if (config.phase_sources.empty()) throw InvalidArgument("no phase sources requested");
  if (config.num_realizations < 1) throw InvalidArgument("num_realizations must be positive");
  for (int n : config.n_pulses_list) {
    if (n < 1) throw InvalidArgument("every N in n_pulses_list must be at least 1");
  }
  const int k = config.scene.grid.size();
  validate_targets(config.targets, k);
  const auto truth = sorted_support(config.targets);
  const int sparsity = static_cast<int>(truth.size());
  const auto reflectivity = scene_reflectivity(config.targets, k);

  RecoveryConfig recovery = config.recovery;
  recovery.sparsity_T = sparsity;

  std::vector<RisShape> shapes = config.ris_sizes;
  if (shapes.empty()) shapes.push_back(config.scene.ris);

  SweepResult result;
  for (const auto& shape : shapes) {
    const auto scene = config.scene.build(shape);
    const auto dict = build_dictionary(scene);
    for (int n : config.n_pulses_list) {
      for (auto source : config.phase_sources) {
        const auto start = std::chrono::steady_clock::now();
        const auto phases = cell_phases(source, dict, n, config);
        const CMatrix d = measurement_matrix(phases.entries, dict);

        // Integer miss counts per realization keep the aggregate independent
        // of thread scheduling.
        std::vector<int> misses(config.num_realizations, 0);
        std::atomic<int> next{0};
        auto worker = [&] {
          for (int i = next++; i < config.num_realizations; i = next++) {
            const auto y = synthesize(d, reflectivity, config.sigma,
                                      realization_seed(config.master_seed, shape.size(), n, source, i));
            const auto rec = solve_l1(d, y.y, recovery);
            misses[i] = static_cast<int>(std::lround(support_error(truth, rec.support, sparsity) * sparsity));
          }
        };
        const int threads = std::min(resolve_threads(config.threads), config.num_realizations);
        if (threads <= 1) {
          worker();
        } else {
          std::vector<std::jthread> pool;
          for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        }

        long long total_missed = 0;
        int exact = 0;
        for (int m : misses) {
          total_missed += m;
          exact += m == 0;
        }
        SweepRow row;
        row.M = shape.size();
        row.N = n;
        row.phase_source = source;
        row.num_realizations = config.num_realizations;
        row.p_e = static_cast<double>(total_missed) /
                  (static_cast<double>(sparsity) * config.num_realizations);
        row.success_rate = static_cast<double>(exact) / config.num_realizations;
        row.mutual_coherence = k >= 2 ? mutual_coherence(d) : 0.0;
        if (config.record_raw) {
          for (int m : misses) row.raw_errors.push_back(static_cast<double>(m) / sparsity);
        }
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.rows.push_back(std::move(row));
      }
    }
  }
  result.sort();
  return result;
}

double support_f1(const std::vector<int>& true_support, const std::vector<int>& est_support) {
  if (true_support.empty() && est_support.empty()) return 1.0;
  const std::set<int> est(est_support.begin(), est_support.end());
  int hits = 0;
  for (int i : true_support) hits += est.count(i) != 0;
  return 2.0 * hits / static_cast<double>(true_support.size() + est.size());
}

ExtendedTargetResult run_extended_target_experiment(const ExperimentConfig& config) {
  if (config.n_pulses_list.empty()) throw InvalidArgument("n_pulses_list is empty");
  if (config.phase_sources.empty()) throw InvalidArgument("no phase sources requested");
  const int k = config.scene.grid.size();
  validate_targets(config.targets, k);

  ExtendedTargetResult out;
  out.true_support = sorted_support(config.targets);
  const int sparsity = static_cast<int>(out.true_support.size());
  const int n = config.n_pulses_list.front();
  const auto source = config.phase_sources.front();

  const auto scene = config.scene.build();
  const auto dict = build_dictionary(scene);
  out.phases = cell_phases(source, dict, n, config);
  const CMatrix d = measurement_matrix(out.phases.entries, dict);
  const auto y = synthesize(d, scene_reflectivity(config.targets, k), config.sigma,
                            realization_seed(config.master_seed, scene.num_elements(), n, source, 0));

  RecoveryConfig recovery = config.recovery;
  recovery.sparsity_T = sparsity;
  out.recovery = solve_l1(d, y.y, recovery);
  out.estimated_support = out.recovery.support;
  const auto refit = debias_on_support(d, y.y, out.estimated_support);
  out.rank_deficient = refit.rank_deficient;
  out.f1 = support_f1(out.true_support, out.estimated_support);

  out.amplitude_map.rows = config.scene.grid.range_points;
  out.amplitude_map.cols = config.scene.grid.crossrange_points;
  out.amplitude_map.values.resize(k);
  for (int i = 0; i < k; ++i) out.amplitude_map.values[i] = std::abs(refit.r(i));
  return out;
}

std::vector<int> make_t_shape(int rows, int cols) {
  if (rows < 3 || cols < 3) throw InvalidArgument("T shape needs a grid of at least 3x3");
  std::set<int> px;
  for (int c = 0; c < cols; ++c) px.insert(c);
  const int center = (cols - 1) / 2;
  for (int r = 1; r < rows; ++r) px.insert(r * cols + center);
  return {px.begin(), px.end()};
}

void export_sweep(const SweepResult& result, const std::filesystem::path& path) {
  SweepResult sorted = result;
  sorted.sort();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "M,N,phase_source,P_e,realizations,seconds\n";
  for (const auto& r : sorted.rows) {
    out << r.M << "," << r.N << "," << to_string(r.phase_source) << "," << io::format_double(r.p_e)
        << "," << r.num_realizations << "," << io::format_double(r.seconds) << "\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SweepResult read_sweep(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "M,N,phase_source,P_e,realizations,seconds") {
    throw IoError("'" + path.string() + "' does not start with the sweep header");
  }
  SweepResult result;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_trimmed(line, ',');
    if (f.size() != 6) throw IoError("'" + path.string() + "': malformed sweep row '" + line + "'");
    SweepRow r;
    r.M = std::stoi(f[0]);
    r.N = std::stoi(f[1]);
    r.phase_source = parse_phase_source(f[2]);
    r.p_e = std::stod(f[3]);
    r.num_realizations = std::stoi(f[4]);
    r.seconds = std::stod(f[5]);
    result.rows.push_back(std::move(r));
  }
  return result;
}

void export_sweep_details(const SweepResult& result, const std::filesystem::path& path) {
  SweepResult sorted = result;
  sorted.sort();
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "M,N,phase_source,P_e,success_rate,mutual_coherence,realizations,seconds\n";
  for (const auto& r : sorted.rows) {
    out << r.M << "," << r.N << "," << to_string(r.phase_source) << "," << io::format_double(r.p_e)
        << "," << io::format_double(r.success_rate) << "," << io::format_double(r.mutual_coherence)
        << "," << r.num_realizations << "," << io::format_double(r.seconds) << "\n";
  }
}

void export_raw_realizations(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "M,N,phase_source,realization,support_error\n";
  for (const auto& r : result.rows) {
    for (std::size_t i = 0; i < r.raw_errors.size(); ++i) {
      out << r.M << "," << r.N << "," << to_string(r.phase_source) << "," << i << ","
          << io::format_double(r.raw_errors[i]) << "\n";
    }
  }
}

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg,
                                        std::vector<GridMapping>* mappings) {
  ExperimentConfig e;
  e.scene = scene_from_config(cfg);
  if (cfg.has("experiment.phase_sources")) {
    e.phase_sources.clear();
    for (const auto& s : cfg.get_list("experiment.phase_sources")) {
      e.phase_sources.push_back(parse_phase_source(s));
    }
  }
  if (cfg.has("experiment.n_pulses_list")) {
    for (auto n : cfg.get_int_list("experiment.n_pulses_list")) e.n_pulses_list.push_back(static_cast<int>(n));
  }
  for (const auto& s : cfg.get_list("experiment.ris_sizes")) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw InvalidArgument("RIS size '" + s + "' must look like 20x20");
    e.ris_sizes.push_back({std::stoi(s.substr(0, x)), std::stoi(s.substr(x + 1))});
  }
  e.num_realizations = static_cast<int>(cfg.get_int("experiment.num_realizations", e.num_realizations));
  e.sigma = cfg.get_double("noise.sigma", e.sigma);
  e.master_seed = static_cast<std::uint64_t>(cfg.get_int("experiment.master_seed", 1));
  e.record_raw = cfg.get_bool("experiment.record_raw", false);
  e.threads = static_cast<int>(cfg.get_int("run.threads", 1));
  e.design = design_from_config(cfg);
  e.recovery = recovery_from_config(cfg);
  e.targets = targets_from_config(cfg, e.scene.grid, mappings);
  return e;
}

}  // namespace risim
