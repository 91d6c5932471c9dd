#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace prrp {

/// Flop counters kept during a factorization.
///
/// `charged_thirds` accumulates the idealized per-kernel model charges in
/// units of 1/3 flop, so that terms like (2/3) b^3 stay exact integers.
/// `executed` counts the arithmetic actually performed, including strong RRQR
/// refactorizations after interchanges.
struct FlopCount {
  std::int64_t charged_thirds = 0;
  double executed = 0.0;

  double charged() const noexcept { return static_cast<double>(charged_thirds) / 3.0; }
  /// Exact integer value when charged_thirds is a multiple of 3.
  bool charged_is_integer() const noexcept { return charged_thirds % 3 == 0; }
};

/// Model charges, in thirds of a flop.
namespace charge {
/// Strong RRQR of an h x p panel transpose (p >= h): 2 p h^2 - (2/3) h^3.
std::int64_t qr_panel(std::int64_t h, std::int64_t p) noexcept;
/// Trailing update with a k-column multiplier block: 2 k rows cols.
std::int64_t update(std::int64_t k, std::int64_t rows, std::int64_t cols) noexcept;
/// GEPP on a b x b diagonal block plus its U row of `cols` further columns:
/// (2/3) b^3 + cols b^2.
std::int64_t gepp_block(std::int64_t b, std::int64_t cols) noexcept;
}  // namespace charge

/// Statistics recorded while eliminating.
struct ElimStats {
  /// max |a_ij^(k)| over every sampled intermediate matrix, starting from the
  /// original entries.
  double intermediate_max = 0.0;
  double original_max = 0.0;
  /// Strong RRQR interchanges per panel (summed over tree nodes for the
  /// tournament and block variants).
  std::vector<std::size_t> swap_counts;
  /// Largest bounded multiplier |(R11^{-1} R12)_ij| used per panel.
  std::vector<double> multiplier_max;
  FlopCount flops;

  void sample(double v) noexcept {
    if (v > intermediate_max || v != v) intermediate_max = v;
  }
  std::size_t total_swaps() const noexcept {
    std::size_t s = 0;
    for (auto c : swap_counts) s += c;
    return s;
  }
};

}  // namespace prrp
