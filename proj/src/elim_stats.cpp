#include "prrp/elim_stats.hpp"

namespace prrp::charge {

std::int64_t qr_panel(std::int64_t h, std::int64_t p) noexcept { return 6 * p * h * h - 2 * h * h * h; }

std::int64_t update(std::int64_t k, std::int64_t rows, std::int64_t cols) noexcept {
  return 6 * k * rows * cols;
}

std::int64_t gepp_block(std::int64_t b, std::int64_t cols) noexcept {
  return 2 * b * b * b + 3 * cols * b * b;
}

}  // namespace prrp::charge
