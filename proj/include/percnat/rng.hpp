#pragma once

#include <array>
#include <cstdint>

namespace percnat {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes an experiment salt into a master seed so that experiments never
/// share key space.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt);
std::uint64_t salt_of(const char* name);

/// A reproducible random stream: the block at index i is a pure function of
/// (master_seed, stream_id, i).
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  std::array<std::uint32_t, 4> block(std::uint64_t index) const;
};

/// Sequential reader over an RngStream, for the few places that need plain
/// uniform draws.
class RngCursor {
 public:
  explicit RngCursor(RngStream s) : stream_(s) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();  // [0, 1)

 private:
  RngStream stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int used_ = 4;
};

}  // namespace percnat
