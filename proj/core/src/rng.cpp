#include "banditstat/rng.hpp"

#include <stdexcept>

namespace banditstat {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox_round(std::array<std::uint32_t, 4> x,
                                                 std::array<std::uint32_t, 2> k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, x[0], hi0, lo0);
  mulhilo(kPhiloxM1, x[2], hi1, lo1);
  return {hi1 ^ x[1] ^ k[0], lo1, hi0 ^ x[3] ^ k[1], lo0};
}

// splitmix64 finalizer; used to spread the seed across the Philox key.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> RngStream::philox4x32(std::array<std::uint32_t, 4> counter,
                                                   std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 9; ++round) {
    counter = philox_round(counter, key);
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return philox_round(counter, key);
}

RngStream::RngStream(std::uint64_t base_seed, std::uint64_t cell_id, std::uint64_t sim_index) {
  // The low halves of cell_id and sim_index sit directly in the counter; the
  // seed and the (rarely nonzero) high halves go through the key, so streams
  // with distinct addresses never share a counter/key pair.
  std::uint64_t k = mix64(base_seed ^ mix64((cell_id >> 32) | ((sim_index >> 32) << 32)));
  key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  sim_low_ = static_cast<std::uint32_t>(sim_index);
  cell_low_ = static_cast<std::uint32_t>(cell_id);
}

std::uint64_t RngStream::next_u64() {
  if (buffered_ == 0) {
    std::array<std::uint32_t, 4> ctr = {static_cast<std::uint32_t>(block_),
                                        static_cast<std::uint32_t>(block_ >> 32),
                                        sim_low_, cell_low_};
    std::array<std::uint32_t, 4> out = philox4x32(ctr, key_);
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    ++block_;
    buffered_ = 2;
  }
  return buffer_[2 - buffered_--];
}

double RngStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

RngStream derive_stream(std::uint64_t base_seed, std::uint64_t cell_id,
                        std::uint64_t sim_index) {
  return RngStream(base_seed, cell_id, sim_index);
}

int bernoulli_draw(double p, RngStream& stream) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error("bernoulli_draw: p must lie in [0, 1]");
  }
  return stream.next_uniform() < p ? 1 : 0;
}

}  // namespace banditstat
