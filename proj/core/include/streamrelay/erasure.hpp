#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "streamrelay/field.hpp"

namespace streamrelay {

/// Received (or transmitted) packets over a window of slots. Erased slots
/// carry the erasure mark and all-zero payload.
class PacketStream {
 public:
  PacketStream() = default;
  PacketStream(std::size_t width, std::size_t slots)
      : width_(width), data_(width * slots, 0), erased_(slots, 0) {}

  std::size_t width() const { return width_; }
  std::size_t slots() const { return erased_.size(); }

  std::span<Symbol> packet(std::size_t t) { return {data_.data() + t * width_, width_}; }
  std::span<const Symbol> packet(std::size_t t) const { return {data_.data() + t * width_, width_}; }

  bool erased(std::size_t t) const { return erased_[t] != 0; }
  void erase(std::size_t t);

  friend bool operator==(const PacketStream&, const PacketStream&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<Symbol> data_;
  std::vector<std::uint8_t> erased_;
};

/// Sorted slot indices erased on one link.
using ErasureSet = std::vector<int>;

/// Replaces the listed slots by the erasure mark. Slots outside the window
/// are ignored.
PacketStream apply_channel(PacketStream packets, std::span<const int> erasures);

/// Number of subsets of {0..horizon-1} with at most `max_erasures` elements,
/// saturating at UINT64_MAX.
std::uint64_t count_patterns(int horizon, int max_erasures);

/// Calls `fn` for every subset of at most `max_erasures` slots, in order of
/// size then lexicographically. Only patterns whose running index is
/// congruent to `worker` modulo `workers` are visited.
void for_each_pattern(int horizon, int max_erasures, const std::function<void(const ErasureSet&)>& fn,
                      unsigned worker = 0, unsigned workers = 1);

/// Every window of `length` consecutive slots fully inside the horizon.
std::vector<ErasureSet> burst_patterns(int horizon, int length);

/// `count` distinct slots drawn uniformly from the horizon.
ErasureSet random_pattern(int horizon, int count, std::mt19937_64& rng);

enum class VerifyMode { Exhaustive, Sampled };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  std::uint64_t seed = 1;
  std::uint64_t count = 10000;  ///< random patterns in sampled mode
};

/// Above this many patterns exhaustive verification falls back to sampling.
inline constexpr std::uint64_t kExhaustiveLimit = 10'000'000;

/// Worker threads to use: hardware concurrency capped by STREAMRELAY_THREADS.
unsigned worker_count();

/// Runs fn(worker) for worker in [0, workers) on separate threads.
void run_workers(unsigned workers, const std::function<void(unsigned)>& fn);

}  // namespace streamrelay
