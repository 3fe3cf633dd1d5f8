#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace growform {

/// Mixes a master seed with a stream index (splitmix64 finalizer) so that
/// per-individual streams are independent and reproducible.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic random stream. The engine is mt19937_64, whose output
/// sequence is fixed by the standard; the distributions are implemented
/// here because the standard library ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal();

  std::string serialize() const;
  void deserialize(const std::string &state);

  friend bool operator==(const Rng &, const Rng &) = default;

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace growform
