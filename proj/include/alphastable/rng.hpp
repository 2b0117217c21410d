#pragma once

#include <cstdint>
#include <random>

namespace alphastable {

/// A reproducible random stream identified by (seed, stream id).
///
/// Distinct (seed, id) pairs seed the engine through std::seed_seq with
/// different material; identical pairs replay the identical sequence.
/// Child streams for parallel lanes or algorithm phases come from
/// substream(), which never touches the parent's state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Stream (seed, mix(id, index)); a pure function of this stream's identity.
  RngStream substream(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  /// Standard exponential (rate 1).
  double exponential();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace alphastable
