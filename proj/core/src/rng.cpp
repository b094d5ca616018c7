#include "shrinkcov/rng.hpp"

#include <cmath>
#include <numbers>

namespace shrinkcov {

std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> coords) noexcept {
  std::uint64_t h = mix64(master);
  for (std::uint64_t c : coords) {
    h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  }
  return h;
}

double NormalStream::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

}  // namespace shrinkcov
