#pragma once

#include <array>
#include <cstdint>

namespace pwave {

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

// Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

// Sequential view of the counter-based stream keyed by (master_seed, stream_id).
// Draw k of a stream depends only on (seed, k).
class Stream {
 public:
  explicit Stream(SeedSpec seed) : seed_(seed) {}

  // Two 64-bit words per block.
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform on (0, 1].
  double uniform_open0() { return 1.0 - uniform(); }
  // Standard normal via Box-Muller; draws come in pairs.
  double normal();

 private:
  SeedSpec seed_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int used_ = 2;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace pwave
