#include "percnat/rng.hpp"

namespace percnat {

namespace {
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;
constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c,
                                        std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) {
  return splitmix64(master_seed ^ splitmix64(salt));
}

std::uint64_t salt_of(const char* name) {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (; *name; ++name) h = (h ^ static_cast<unsigned char>(*name)) * 0x100000001b3ull;
  return h;
}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t index) const {
  const std::uint64_t key = splitmix64(master_seed);
  return philox4x32({static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                     static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)},
                    {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
}

std::uint32_t RngCursor::next_u32() {
  if (used_ == 4) {
    buf_ = stream_.block(block_++);
    used_ = 0;
  }
  return buf_[used_++];
}

std::uint64_t RngCursor::next_u64() {
  const std::uint64_t hi = next_u32();
  return (hi << 32) | next_u32();
}

double RngCursor::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

}  // namespace percnat
