#include "risim/phase_design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "risim/errors.hpp"
#include "risim/random.hpp"

namespace risim {

namespace {

void check_dims(const CMatrix& phi, const Dictionary& dict) {
  if (phi.cols() != dict.psi.rows() || dict.q_diag.size() != dict.psi.rows()) {
    throw InvalidArgument("phase matrix has " + std::to_string(phi.cols()) +
                          " columns, dictionary has " + std::to_string(dict.psi.rows()) +
                          " elements");
  }
}

// D^H D - I for D = phi * weighted.
CMatrix gram_residual(const CMatrix& d) {
  CMatrix e = d.adjoint() * d;
  e.diagonal().array() -= 1.0;
  return e;
}

}  // namespace

std::string_view to_string(PhaseSource source) {
  switch (source) {
    case PhaseSource::kDesigned:
      return "designed";
    case PhaseSource::kDft:
      return "dft";
    case PhaseSource::kRandom:
      return "random";
  }
  return "unknown";
}

PhaseSource parse_phase_source(std::string_view text) {
  if (text == "designed") return PhaseSource::kDesigned;
  if (text == "dft") return PhaseSource::kDft;
  if (text == "random") return PhaseSource::kRandom;
  throw InvalidArgument("unknown phase source '" + std::string(text) +
                        "' (expected designed, dft or random)");
}

double objective(const CMatrix& phi, const Dictionary& dict) {
  check_dims(phi, dict);
  return gram_residual(phi * dict.weighted()).squaredNorm();
}

CMatrix gradient(const CMatrix& phi, const Dictionary& dict) {
  check_dims(phi, dict);
  const CMatrix a = dict.weighted();
  const CMatrix d = phi * a;
  return (d * gram_residual(d)) * a.adjoint();
}

CMatrix project_unit_modulus(const CMatrix& m) {
  return m.unaryExpr([](const Complex& z) {
    const double r = std::abs(z);
    return r > 0.0 ? z / r : Complex(1.0, 0.0);
  });
}

PhaseMatrix design(const Dictionary& dict, int num_pulses, const DesignConfig& config) {
  if (num_pulses <= 0) throw InvalidArgument("number of pulses must be positive");
  return design(dict, random_phases(num_pulses, dict.num_elements(), config.seed).entries,
                config);
}

PhaseMatrix design(const Dictionary& dict, const CMatrix& initial, const DesignConfig& config) {
  if (config.max_iter < 1) throw InvalidArgument("max_iter must be at least 1");
  if (!(config.step_size > 0.0) || !std::isfinite(config.step_size)) {
    throw InvalidArgument("step size must be positive and finite");
  }
  if (!(config.objective_tolerance >= 0.0)) {
    throw InvalidArgument("objective tolerance must be nonnegative");
  }
  check_dims(initial, dict);

  const CMatrix a = dict.weighted();
  const CMatrix a_adj = a.adjoint();

  PhaseMatrix out;
  out.provenance = PhaseSource::kDesigned;
  out.entries = project_unit_modulus(initial);
  out.design_log.reserve(config.max_iter);

  CMatrix d = out.entries * a;
  CMatrix e = gram_residual(d);
  double previous = e.squaredNorm();
  out.initial_objective = previous;
  if (!std::isfinite(previous)) {
    throw DivergenceError(0, "objective is not finite at the initial point");
  }

  for (int it = 1; it <= config.max_iter; ++it) {
    CMatrix grad = (d * e) * a_adj;
    if (config.normalize_gradient) {
      const double norm = grad.norm();
      if (norm > 0.0) grad /= norm;
    }
    out.entries = project_unit_modulus(out.entries - config.step_size * grad);

    d.noalias() = out.entries * a;
    e = gram_residual(d);
    const double current = e.squaredNorm();
    if (!std::isfinite(current)) {
      throw DivergenceError(it, "objective became non-finite at iteration " +
                                    std::to_string(it) + "; try a smaller step size");
    }
    out.design_log.push_back(current);

    if (config.objective_tolerance > 0.0 &&
        std::abs(current - previous) / std::max(previous, 1e-30) <
            config.objective_tolerance) {
      break;
    }
    previous = current;
  }
  return out;
}

PhaseMatrix dft_phases(int num_pulses, int num_elements) {
  if (num_pulses <= 0 || num_elements <= 0) {
    throw InvalidArgument("DFT phase matrix dimensions must be positive");
  }
  if (num_pulses > num_elements) {
    throw InvalidArgument("DFT baseline needs N <= M (got N=" + std::to_string(num_pulses) +
                          ", M=" + std::to_string(num_elements) + ")");
  }
  PhaseMatrix out;
  out.provenance = PhaseSource::kDft;
  out.entries.resize(num_pulses, num_elements);
  for (int n = 0; n < num_pulses; ++n) {
    for (int m = 0; m < num_elements; ++m) {
      // Reduce n*m modulo M first so the angle stays in [0, 2 pi).
      const auto k = (static_cast<long long>(n) * m) % num_elements;
      out.entries(n, m) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                              num_elements);
    }
  }
  return out;
}

PhaseMatrix random_phases(int num_pulses, int num_elements, std::uint64_t seed) {
  if (num_pulses <= 0 || num_elements <= 0) {
    throw InvalidArgument("random phase matrix dimensions must be positive");
  }
  Rng rng(seed);
  PhaseMatrix out;
  out.provenance = PhaseSource::kRandom;
  out.entries.resize(num_pulses, num_elements);
  // Row-major fill so the stream order matches the documented layout.
  for (int n = 0; n < num_pulses; ++n) {
    for (int m = 0; m < num_elements; ++m) {
      out.entries(n, m) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    }
  }
  return out;
}

double mutual_coherence(const CMatrix& d) {
  if (d.cols() < 2) throw InvalidArgument("mutual coherence needs at least two columns");
  const CMatrix g = d.adjoint() * d;
  RVector sq(d.cols());
  for (Eigen::Index k = 0; k < d.cols(); ++k) {
    sq(k) = g(k, k).real();
    if (!(sq(k) > 0.0)) {
      throw DegenerateMatrix("column " + std::to_string(k) + " has zero norm");
    }
  }
  double mu = 0.0;
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      mu = std::max(mu, std::abs(g(i, j)) / std::sqrt(sq(i) * sq(j)));
    }
  }
  return std::min(mu, 1.0);
}

}  // namespace risim
