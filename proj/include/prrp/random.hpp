#pragma once

#include <cstdint>
#include <random>

namespace prrp {

/// The single generator used across the library: std::mt19937_64, whose
/// output sequence is fixed by the C++ standard for a given seed.
///
/// uniform():  (x >> 11) * 2^-53, a double in [0, 1) from one 64-bit draw.
/// normal():   Box-Muller on (u1, u2) = (1 - uniform(), uniform()), giving
///             r cos(2 pi u2) then r sin(2 pi u2) with r = sqrt(-2 ln u1);
///             both outputs are used, in that order.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() noexcept { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double normal() noexcept;

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace prrp
