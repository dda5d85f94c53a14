#include "pwave/rng.hpp"

#include <cmath>
#include <numbers>

namespace pwave {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
           std::uint32_t(p0)};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

std::uint64_t Stream::next_u64() {
  if (used_ == 2) {
    const auto out = philox4x32({std::uint32_t(block_), std::uint32_t(block_ >> 32), std::uint32_t(seed_.stream_id),
                                 std::uint32_t(seed_.stream_id >> 32)},
                                {std::uint32_t(seed_.master_seed), std::uint32_t(seed_.master_seed >> 32)});
    buf_[0] = (std::uint64_t(out[1]) << 32) | out[0];
    buf_[1] = (std::uint64_t(out[3]) << 32) | out[2];
    ++block_;
    used_ = 0;
  }
  return buf_[std::size_t(used_++)];
}

double Stream::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform_open0();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double th = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(th);
  have_spare_ = true;
  return r * std::cos(th);
}

}  // namespace pwave
