#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace banditstat {

// Counter-based stream built on Philox4x32-10. Streams are addressed by
// (base_seed, cell_id, sim_index): the pair (cell_id, sim_index) occupies two
// counter words, so any two distinct addresses yield statistically
// independent sequences without coordination between workers.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t base_seed, std::uint64_t cell_id, std::uint64_t sim_index);

  std::uint64_t next_u64();

  // Uniform double in [0, 1), 53 random bits.
  double next_uniform();

  // UniformRandomBitGenerator interface.
  result_type operator()() { return next_u64(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // One 10-round Philox4x32 block. Exposed for known-answer tests.
  static std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                                 std::array<std::uint32_t, 2> key);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t sim_low_;
  std::uint32_t cell_low_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

RngStream derive_stream(std::uint64_t base_seed, std::uint64_t cell_id,
                        std::uint64_t sim_index);

// Single Bernoulli(p) draw, consuming exactly one uniform. Throws
// std::domain_error unless 0 <= p <= 1.
int bernoulli_draw(double p, RngStream& stream);

}  // namespace banditstat
