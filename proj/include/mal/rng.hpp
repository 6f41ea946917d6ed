#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mal {

/// Counter-based random stream (Philox4x32-10). A stream is fully determined
/// by (seed, stream_id); the n-th draw is a pure function of (seed, stream_id, n),
/// so streams can be generated on any worker in any order.
///
/// Satisfies UniformRandomBitGenerator, but prefer the member helpers: the
/// std distributions are not reproducible across standard libraries.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Unbiased integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int next_ = 2;
};

RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Purposes partition the stream-id space so independent consumers never collide.
enum class StreamPurpose : std::uint8_t {
  Generic = 0,
  AgreementTrials = 1,
  ReceptionDelay = 2,
  SendProcess = 3,
  TxAttributes = 4,
  Drops = 5,
  MinerDelay = 6,
  PairSampling = 7,
  CrossBlockTrials = 8,
  Samples = 9,
};

/// Packs (purpose, a, b) into a stream id: 8 bits purpose, 24 bits a, 32 bits b.
constexpr std::uint64_t substream(StreamPurpose purpose, std::uint64_t a, std::uint64_t b) {
  return (static_cast<std::uint64_t>(purpose) << 56) | ((a & 0xffffffu) << 32) | (b & 0xffffffffu);
}

}  // namespace mal
