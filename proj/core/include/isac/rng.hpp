#pragma once

#include <array>
#include <cstdint>

#include "isac/types.hpp"

namespace isac {

/// Named streams. Each (seed, stream, substream) triple is an independent sequence.
enum class Stream : std::uint32_t {
  channel = 1,
  symbols = 2,
  noise = 3,
  trial = 4,
  phase = 5,
};

/// Philox4x32-10 counter-based generator. The key holds (seed lo, seed hi ^ stream);
/// the counter holds (block lo, block hi, substream lo, substream hi).
class Philox {
 public:
  Philox(std::uint64_t seed, Stream stream, std::uint64_t substream = 0);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  /// Circularly symmetric complex normal with E|z|^2 = variance.
  cd complex_normal(double variance);

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_{};
  std::array<std::uint32_t, 4> ctr_{};
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace isac
