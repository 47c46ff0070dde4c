#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace risim {

/// Portable random source.
///
/// std::mt19937_64 has a bit-exact definition in the standard, but the
/// standard distributions do not, so the uniform and Gaussian transforms are
/// spelled out here. Streams are therefore identical across compilers and
/// standard libraries for the same seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller; both halves of each pair are used.
  double normal();

  /// Circular complex Gaussian with total variance `variance`.
  std::complex<double> complex_normal(double variance);

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Deterministic child seed from a parent seed and a sequence of labels.
/// Each label is folded in with mix64, so (a, b) and (b, a) differ.
template <typename... Labels>
std::uint64_t split_seed(std::uint64_t parent, Labels... labels) noexcept {
  std::uint64_t s = mix64(parent);
  ((s = mix64(s ^ (static_cast<std::uint64_t>(labels) + 0x9e3779b97f4a7c15ULL))), ...);
  return s;
}

}  // namespace risim
