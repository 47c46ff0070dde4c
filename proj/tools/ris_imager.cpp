#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "risim/errors.hpp"
#include "risim/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace risim;

namespace {

struct Options {
  std::string config_path;
  std::string output_dir = ".";
  std::vector<std::string> overrides;
  int threads = -1;
  int verbosity = 0;
  // simulate
  std::string phi_path;
  // recover
  std::string input_dir;
  // render
  std::string map_path;
  std::string image_path;
};

// FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

int resolve_threads(int flag) {
  int t = flag;
  if (t < 0) {
    if (const char* env = std::getenv("RIS_IMAGER_THREADS")) {
      try {
        t = std::stoi(env);
      } catch (const std::exception&) {
        throw InvalidArgument(std::string("RIS_IMAGER_THREADS is not an integer: ") + env);
      }
    }
  }
  if (t < 0) return 1;
  if (t == 0) return std::max(1u, std::thread::hardware_concurrency());
  return t;
}

KeyValueConfig load_config(const Options& opt) {
  if (opt.config_path.empty()) throw InvalidArgument("--config is required");
  if (!fs::exists(opt.config_path)) throw IoError("config not found: " + opt.config_path);
  auto cfg = KeyValueConfig::load(opt.config_path);
  cfg.apply_overrides(opt.overrides);
  return cfg;
}

fs::path prepare_output(const Options& opt) {
  const fs::path out(opt.output_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory " + out.string());
  return out;
}

// The resolved config alone reproduces the run; threads only change scheduling.
void write_manifest(const fs::path& out, const std::string& command, const Options& opt,
                    const KeyValueConfig& cfg, int threads, json extra = json::object()) {
  const std::string canonical = cfg.to_string();
  json m;
  m["tool"] = "ris_imager";
  m["version"] = RISIM_VERSION;
  m["command"] = command;
  m["config_path"] = opt.config_path;
  m["overrides"] = opt.overrides;
  m["config_hash"] = "fnv1a64:" + hex64(fnv1a(canonical));
  m["resolved_config"] = cfg.values();
  m["seeds"] = {{"master_seed", cfg.get_int("experiment.master_seed", 1)},
                {"design_seed", cfg.get_int("design.seed", 0)}};
  m["threads"] = threads;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  for (auto& [k, v] : extra.items()) m[k] = v;
  io::write_text(out / "manifest.json", m.dump(2) + "\n");
  io::write_text(out / "resolved.preset", canonical);
}

PhaseMatrix phases_from_config(const KeyValueConfig& cfg, const Dictionary& dict,
                               const ExperimentConfig& e) {
  const int n = static_cast<int>(cfg.get_int("design.num_pulses", 12));
  const auto source = parse_phase_source(cfg.get_string("design.phase_source", "designed"));
  return cell_phases(source, dict, n, e);
}

int cmd_design(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto out = prepare_output(opt);
  const auto e = experiment_from_config(cfg);
  const auto dict = build_dictionary(e.scene.build());
  const auto phi = phases_from_config(cfg, dict, e);
  const CMatrix d = measurement_matrix(phi.entries, dict);
  const double j = objective(phi.entries, dict);
  const double mu = mutual_coherence(d);

  io::write_matrix_binary(out / "phi.bin", phi.entries);
  io::write_matrix_csv(out / "phi.csv", phi.entries);
  io::write_design_log(out / "design_log.csv", phi.design_log);
  std::ostringstream summary;
  summary << "phase_source," << to_string(phi.provenance) << "\n"
          << "N," << phi.num_pulses() << "\n"
          << "M," << phi.num_elements() << "\n"
          << "iterations," << phi.design_log.size() << "\n"
          << "initial_J," << (phi.initial_objective ? io::format_double(*phi.initial_objective) : "")
          << "\n"
          << "final_J," << io::format_double(j) << "\n"
          << "mutual_coherence," << io::format_double(mu) << "\n";
  io::write_text(out / "design_summary.csv", summary.str());
  write_manifest(out, "design", opt, cfg, 1);

  std::cout << "J = " << j << "  mu = " << mu << "  iterations = " << phi.design_log.size()
            << "\n";
  return 0;
}

int cmd_simulate(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto out = prepare_output(opt);
  std::vector<GridMapping> mappings;
  const auto e = experiment_from_config(cfg, &mappings);
  if (e.targets.empty()) throw InvalidArgument("simulate needs targets");
  const auto dict = build_dictionary(e.scene.build());
  CMatrix phi;
  if (!opt.phi_path.empty()) {
    phi = io::read_matrix_binary(opt.phi_path);
    if (phi.cols() != dict.num_elements()) {
      throw InvalidArgument("phase matrix has " + std::to_string(phi.cols()) +
                            " columns, scene has " + std::to_string(dict.num_elements()) +
                            " RIS elements");
    }
  } else {
    phi = phases_from_config(cfg, dict, e).entries;
  }
  const CMatrix d = measurement_matrix(phi, dict);
  ReflectivityVector r{CVector::Zero(dict.num_targets()), "grid"};
  for (const auto& t : e.targets) r.values(t.grid_index) = t.amplitude;
  const auto y = synthesize(d, r, e.sigma, e.master_seed);

  io::write_matrix_binary(out / "phi.bin", phi);
  io::write_matrix_binary(out / "D.bin", d);
  io::write_vector_csv(out / "y.csv", y.y);
  io::write_vector_csv(out / "r_true.csv", r.values);
  json extra;
  extra["noise_seed"] = e.master_seed;
  for (const auto& m : mappings) {
    extra["target_mappings"].push_back({{"requested", {m.requested.x(), m.requested.y(), m.requested.z()}},
                                        {"index", m.index},
                                        {"offset_m", m.offset_m}});
  }
  write_manifest(out, "simulate", opt, cfg, 1, extra);
  if (opt.verbosity > 0) std::cout << "wrote " << d.rows() << " measurements\n";
  return 0;
}

int cmd_recover(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto out = prepare_output(opt);
  const fs::path in = opt.input_dir.empty() ? out : fs::path(opt.input_dir);
  const CMatrix d = io::read_matrix_binary(in / "D.bin");
  const CVector y = io::read_vector_csv(in / "y.csv");
  if (y.size() != d.rows()) throw InvalidArgument("y length does not match D");
  auto rc = recovery_from_config(cfg);
  const auto targets = targets_from_config(cfg, scene_from_config(cfg).grid);
  if (!targets.empty()) rc.sparsity_T = static_cast<int>(targets.size());
  const auto result = solve_l1(d, y, rc);

  io::write_recovery_csv(out / "recovery.csv", result);
  io::write_support_csv(out / "support.csv", result.support);
  io::write_recovery_summary(out / "recovery_summary.csv", result);
  write_manifest(out, "recover", opt, cfg, 1, {{"input_dir", in.string()}});
  std::cout << "support:";
  for (int k : result.support) std::cout << " " << k;
  std::cout << "\nresidual = " << result.residual_norm << "  iterations = " << result.iterations_used
            << (result.converged ? "" : "  (not converged)") << "\n";
  return 0;
}

int cmd_sweep(const Options& opt) {
  auto cfg = load_config(opt);
  const int threads = resolve_threads(opt.threads);
  const auto out = prepare_output(opt);
  auto e = experiment_from_config(cfg);
  e.threads = threads;
  const auto kind = cfg.get_string("experiment.kind", "point");

  if (kind == "extended") {
    const auto res = run_extended_target_experiment(e);
    io::write_amplitude_map(out / "amplitude_map.csv", res.amplitude_map);
    io::write_pgm(out / "amplitude_map.pgm", res.amplitude_map.rows, res.amplitude_map.cols,
                  io::to_gray(res.amplitude_map));
    io::write_support_csv(out / "support.csv", res.estimated_support);
    write_manifest(out, "sweep", opt, cfg, threads,
                   {{"kind", kind}, {"f1", res.f1}, {"rank_deficient", res.rank_deficient}});
    std::cout << "F1 = " << res.f1 << "\n";
    if (opt.verbosity > 0) std::cout << io::ascii_preview(res.amplitude_map);
    return 0;
  }
  if (kind != "point") throw InvalidArgument("experiment.kind must be point or extended, got " + kind);
  if (e.n_pulses_list.empty()) throw InvalidArgument("experiment.n_pulses_list is empty");

  const auto res = run_point_target_experiment(e);
  export_sweep(res, out / "sweep.csv");
  export_sweep_details(res, out / "sweep_details.csv");
  if (e.record_raw) export_raw_realizations(res, out / "realizations.csv");
  write_manifest(out, "sweep", opt, cfg, threads, {{"kind", kind}});
  for (const auto& r : res.rows) {
    std::cout << "M=" << r.M << " N=" << r.N << " " << to_string(r.phase_source)
              << " P_e=" << r.p_e << " success=" << r.success_rate << "\n";
  }
  return 0;
}

int cmd_render(const Options& opt) {
  if (opt.map_path.empty()) throw InvalidArgument("--map is required");
  const auto map = io::read_amplitude_map(opt.map_path);
  fs::path image = opt.image_path;
  if (image.empty()) image = prepare_output(opt) / "amplitude_map.pgm";
  io::write_pgm(image, map.rows, map.cols, io::to_gray(map));
  if (opt.verbosity > 0) std::cout << io::ascii_preview(map);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RIS-aided radar imaging simulator"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* c = sub->add_option("--config", opt.config_path, "preset file");
    if (needs_config) c->required();
    sub->add_option("--out", opt.output_dir, "output directory");
    sub->add_option("--overrides", opt.overrides, "key=value pairs applied after the preset");
    sub->add_flag("-v,--verbose", opt.verbosity, "more output");
  };

  auto* design = app.add_subcommand("design", "design RIS phase profiles");
  add_common(design, true);
  auto* simulate = app.add_subcommand("simulate", "synthesize measurements");
  add_common(simulate, true);
  simulate->add_option("--phi", opt.phi_path, "binary phase matrix to use instead of the preset's");
  auto* recover = app.add_subcommand("recover", "recover the scene from D.bin and y.csv");
  add_common(recover, true);
  recover->add_option("--input", opt.input_dir, "directory holding D.bin and y.csv (default --out)");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep or extended-target reconstruction");
  add_common(sweep, true);
  sweep->add_option("--threads", opt.threads, "worker threads, 0 = all cores");
  auto* render = app.add_subcommand("render", "amplitude map CSV to PGM");
  add_common(render, false);
  render->add_option("--map", opt.map_path, "amplitude map CSV")->required();
  render->add_option("--image", opt.image_path, "output PGM (default <out>/amplitude_map.pgm)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*design) return cmd_design(opt);
    if (*simulate) return cmd_simulate(opt);
    if (*recover) return cmd_recover(opt);
    if (*sweep) return cmd_sweep(opt);
    if (*render) return cmd_render(opt);
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
