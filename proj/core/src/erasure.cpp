#include "streamrelay/erasure.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

namespace streamrelay {

void PacketStream::erase(std::size_t t) {
  erased_[t] = 1;
  std::fill_n(data_.begin() + static_cast<std::ptrdiff_t>(t * width_), width_, Symbol{0});
}

PacketStream apply_channel(PacketStream packets, std::span<const int> erasures) {
  for (int t : erasures) {
    if (t >= 0 && static_cast<std::size_t>(t) < packets.slots()) packets.erase(static_cast<std::size_t>(t));
  }
  return packets;
}

std::uint64_t count_patterns(int horizon, int max_erasures) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(horizon, i)
  for (int i = 0; i <= max_erasures && i <= horizon; ++i) {
    if (i > 0) {
      const auto factor = static_cast<std::uint64_t>(horizon - i + 1);
      if (binom > kMax / factor) return kMax;
      binom = binom * factor / static_cast<std::uint64_t>(i);
    }
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

void for_each_pattern(int horizon, int max_erasures, const std::function<void(const ErasureSet&)>& fn,
                      unsigned worker, unsigned workers) {
  std::uint64_t index = 0;
  ErasureSet set;
  for (int size = 0; size <= max_erasures && size <= horizon; ++size) {
    set.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) set[static_cast<std::size_t>(i)] = i;
    while (true) {
      if (index++ % workers == worker) fn(set);
      int pos = size - 1;
      while (pos >= 0 && set[static_cast<std::size_t>(pos)] == horizon - size + pos) --pos;
      if (pos < 0) break;
      ++set[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < size; ++i) {
        set[static_cast<std::size_t>(i)] = set[static_cast<std::size_t>(i - 1)] + 1;
      }
    }
  }
}

std::vector<ErasureSet> burst_patterns(int horizon, int length) {
  std::vector<ErasureSet> out;
  if (length <= 0 || length > horizon) return out;
  for (int start = 0; start + length <= horizon; ++start) {
    ErasureSet s(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) s[static_cast<std::size_t>(i)] = start + i;
    out.push_back(std::move(s));
  }
  return out;
}

ErasureSet random_pattern(int horizon, int count, std::mt19937_64& rng) {
  count = std::clamp(count, 0, horizon);
  // Floyd's sampling: exactly `count` distinct slots.
  ErasureSet out;
  out.reserve(static_cast<std::size_t>(count));
  for (int j = horizon - count; j < horizon; ++j) {
    std::uniform_int_distribution<int> pick(0, j);
    const int v = pick(rng);
    if (std::find(out.begin(), out.end(), v) == out.end()) {
      out.push_back(v);
    } else {
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("STREAMRELAY_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

void run_workers(unsigned workers, const std::function<void(unsigned)>& fn) {
  if (workers <= 1) {
    fn(0);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          fn(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace streamrelay
