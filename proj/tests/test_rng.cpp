#include "percnat/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace percnat;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST_CASE("philox4x32 known answers") {
  using W = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of seed, id and block") {
  const RngStream a{42, 7}, b{42, 7}, c{42, 8}, d{43, 7};
  CHECK(a.block(3) == b.block(3));
  CHECK(a.block(3) != a.block(4));
  CHECK(a.block(0) != c.block(0));
  CHECK(a.block(0) != d.block(0));
}

TEST_CASE("derived seeds separate experiments") {
  CHECK(salt_of("arm-scaling") != salt_of("box-count"));
  CHECK(derive_seed(1, salt_of("a")) != derive_seed(1, salt_of("b")));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(splitmix64(i));
  CHECK(seen.size() == 1000);
}

TEST_CASE("cursor uniforms lie in [0, 1) with mean near 1/2") {
  RngCursor r(RngStream{9, 1});
  const int n = 100000;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // Standard deviation of the mean is 1/sqrt(12 n).
  CHECK(std::abs(sum / n - 0.5) < 5 / std::sqrt(12.0 * n));
}
