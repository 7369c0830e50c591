#include <doctest.h>

#include <array>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "banditstat/rng.hpp"

using namespace banditstat;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Reference vectors from the Random123 test suite.
  auto zero = RngStream::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});

  auto ones = RngStream::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                    {0xffffffffu, 0xffffffffu});
  CHECK(ones == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});

  auto pi = RngStream::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
  CHECK(pi == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("derive_stream is reproducible") {
  RngStream a = derive_stream(42, 7, 1234);
  RngStream b = derive_stream(42, 7, 1234);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct addresses give distinct streams") {
  RngStream base = derive_stream(42, 0, 0);
  RngStream sim = derive_stream(42, 0, 1);
  RngStream cell = derive_stream(42, 1, 0);
  RngStream seed = derive_stream(43, 0, 0);
  std::array<std::uint64_t, 4> b{}, s{}, c{}, d{};
  for (auto& x : b) x = base.next_u64();
  for (auto& x : s) x = sim.next_u64();
  for (auto& x : c) x = cell.next_u64();
  for (auto& x : d) x = seed.next_u64();
  CHECK(b != s);
  CHECK(b != c);
  CHECK(b != d);
  CHECK(s != c);
}

TEST_CASE("uniforms live in [0,1) with mean 1/2") {
  RngStream stream = derive_stream(7, 0, 0);
  double sum = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    double u = stream.next_uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / 1e6 == doctest::Approx(0.5).epsilon(0.004));  // +-0.002 absolute
}

TEST_CASE("bernoulli_draw respects degenerate probabilities") {
  RngStream stream = derive_stream(9, 0, 0);
  for (int i = 0; i < 1000; ++i) CHECK(bernoulli_draw(0.0, stream) == 0);
  for (int i = 0; i < 1000; ++i) CHECK(bernoulli_draw(1.0, stream) == 1);
}

TEST_CASE("bernoulli_draw hits its rate") {
  RngStream stream = derive_stream(11, 0, 0);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += bernoulli_draw(0.5, stream);
  CHECK(hits / 100000.0 == doctest::Approx(0.5).epsilon(0.01));  // +-0.005 absolute
}

TEST_CASE("bernoulli_draw rejects out-of-range p") {
  RngStream stream = derive_stream(1, 0, 0);
  CHECK_THROWS_AS(bernoulli_draw(1.5, stream), std::domain_error);
  CHECK_THROWS_AS(bernoulli_draw(-0.1, stream), std::domain_error);
  CHECK_THROWS_AS(bernoulli_draw(std::numeric_limits<double>::quiet_NaN(), stream),
                  std::domain_error);
}
