#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace polylap {

/// Philox4x32-10 counter-based generator.
///
/// A stream is identified by (seed, stream id); the 64-bit block counter
/// walks through the stream.  Independent streams for parallel trials are
/// obtained by picking distinct stream ids, never by sharing state.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

  std::uint64_t block_counter() const { return counter_; }

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Raw Philox4x32-10 block function.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Mixes a base seed with a list of indices (splitmix64 finaliser chain).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> indices);

/// Stream tags that keep different random quantities of one trial apart.
namespace stream {
inline constexpr std::uint64_t kCloud = 0x636c6f7564ULL;
inline constexpr std::uint64_t kNoise = 0x6e6f697365ULL;
inline constexpr std::uint64_t kPower = 0x706f776572ULL;
inline constexpr std::uint64_t kProbe = 0x70726f6265ULL;
}  // namespace stream

}  // namespace polylap
