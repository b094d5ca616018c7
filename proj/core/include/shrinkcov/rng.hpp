#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shrinkcov {

/// SplitMix64 finalizer. Used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds a master seed and a list of stream coordinates (n-index, trial
/// index, ...) into one 64-bit seed. Order matters.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> coords) noexcept;

/// Seeded normal source with a fully specified output sequence.
///
/// std::mt19937_64 is bit-exact across standard libraries; the uniform and
/// normal transforms are done here rather than through <random>
/// distributions, whose algorithms are implementation-defined.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; values are produced in pairs.
  double normal() noexcept;

  std::uint64_t next_u64() noexcept { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace shrinkcov
