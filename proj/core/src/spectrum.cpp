#include "streamrelay/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <tuple>

#include "streamrelay/error.hpp"

namespace streamrelay {

std::int64_t GroupedSpectrum::total() const {
  std::int64_t t = 0;
  for (const auto& g : groups) t += g.count;
  return t;
}

int GroupedSpectrum::min_delay() const {
  int m = groups.empty() ? 0 : groups.front().delay;
  for (const auto& g : groups) m = std::min(m, g.delay);
  return m;
}

int GroupedSpectrum::max_delay() const {
  int m = groups.empty() ? 0 : groups.front().delay;
  for (const auto& g : groups) m = std::max(m, g.delay);
  return m;
}

DelaySpectrum GroupedSpectrum::expand() const {
  DelaySpectrum out;
  out.delays.reserve(static_cast<std::size_t>(total()));
  for (const auto& g : groups) out.delays.insert(out.delays.end(), static_cast<std::size_t>(g.count), g.delay);
  return out;
}

GroupedSpectrum GroupedSpectrum::reordered(GroupOrder o) const {
  GroupedSpectrum out = *this;
  if (o != order) std::reverse(out.groups.begin(), out.groups.end());
  out.order = o;
  return out;
}

GroupedSpectrum group(const DelaySpectrum& s, GroupOrder order) {
  std::vector<int> d = s.delays;
  if (order == GroupOrder::Descending) {
    std::sort(d.begin(), d.end(), std::greater<>());
  } else {
    std::sort(d.begin(), d.end());
  }
  GroupedSpectrum out;
  out.order = order;
  for (int v : d) {
    if (!out.groups.empty() && out.groups.back().delay == v) {
      ++out.groups.back().count;
    } else {
      out.groups.push_back({v, 1});
    }
  }
  return out;
}

GroupedSpectrum achievable_spectrum(std::int64_t n, std::int64_t k, int erasures) {
  if (n <= 0 || k < 0 || erasures < 0) {
    throw Error(ErrorCode::InvalidArgument, "achievable_spectrum needs n > 0, k >= 0, N >= 0");
  }
  GroupedSpectrum out;
  out.order = GroupOrder::Descending;
  if (erasures == 0) {
    if (k > n) throw Error(ErrorCode::Infeasible, "k exceeds n");
    if (k != n) throw Error(ErrorCode::IndivisibleParity, "N = 0 leaves no room for parity");
    if (k > 0) out.groups.push_back({0, k});
    return out;
  }
  if (k >= n) {
    throw Error(ErrorCode::Infeasible, "k = " + std::to_string(k) + " must be below n = " + std::to_string(n));
  }
  if ((n - k) % erasures != 0) {
    throw Error(ErrorCode::IndivisibleParity, "N = " + std::to_string(erasures) +
                                                  " does not divide n - k = " + std::to_string(n - k));
  }
  if (k == 0) return out;
  const std::int64_t per_level = (n - k) / erasures;
  const std::int64_t levels = (k + per_level - 1) / per_level;
  const int top = erasures + static_cast<int>(levels) - 1;
  out.groups.push_back({top, k - (levels - 1) * per_level});
  for (int d = top - 1; d >= erasures; --d) out.groups.push_back({d, per_level});
  return out;
}

namespace {

void check_descending(std::span<const RationalLevel> levels, int erasures) {
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].delay < erasures) {
      throw Error(ErrorCode::InvalidArgument, "constraint delay " + std::to_string(levels[i].delay) +
                                                  " is below the erasure budget");
    }
    if (i > 0 && levels[i].delay >= levels[i - 1].delay) {
      throw Error(ErrorCode::InvalidArgument, "constraint delays must be strictly descending");
    }
    if (levels[i].count < 0) throw Error(ErrorCode::InvalidArgument, "negative constraint count");
  }
}

std::vector<RationalLevel> to_rational(const SpectrumConstraint& c) {
  std::vector<RationalLevel> out;
  out.reserve(c.levels.size());
  for (const auto& l : c.levels) out.push_back({l.delay, Rational(l.count)});
  return out;
}

// The j-th inequality: k <= n - N (n - sum_{l<j} kcon[l]) / (T[j] + 1).
Rational level_bound(const Rational& n, int erasures, const Rational& prefix, int delay) {
  return n - Rational(erasures) * (n - prefix) / Rational(delay + 1);
}

}  // namespace

Rational max_feasible_rational(const Rational& n, int erasures, std::span<const RationalLevel> levels) {
  check_descending(levels, erasures);
  Rational prefix = 0;
  for (const auto& l : levels) prefix += l.count;
  Rational best = prefix;
  Rational before = 0;
  for (const auto& l : levels) {
    best = std::min(best, level_bound(n, erasures, before, l.delay));
    before += l.count;
  }
  return best < 0 ? Rational(0) : best;
}

std::int64_t max_feasible_k(std::int64_t n, int erasures, const SpectrumConstraint& constraint) {
  const auto levels = to_rational(constraint);
  return floor_to_int(max_feasible_rational(Rational(n), erasures, levels));
}

int first_violated_inequality(std::int64_t n, std::int64_t k, int erasures,
                              const SpectrumConstraint& constraint) {
  const auto levels = to_rational(constraint);
  check_descending(levels, erasures);
  const Rational rn(n);
  Rational before = 0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    if (Rational(k) > level_bound(rn, erasures, before, levels[j].delay)) return static_cast<int>(j);
    before += levels[j].count;
  }
  if (Rational(k) > before) return static_cast<int>(levels.size());
  return -1;
}

std::int64_t min_components_for_targets(std::span<const int> targets, int erasures) {
  if (targets.empty()) return 0;
  std::vector<int> sorted(targets.begin(), targets.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < erasures) return -1;
  if (erasures == 0) return 1;
  // Symbols with target <= N + L - 1 must fit into the L lowest delay levels,
  // each of which holds one symbol per component.
  std::int64_t need = 1;
  std::size_t idx = 0;
  const int top = sorted.back();
  for (int level = 1; erasures + level - 1 <= top; ++level) {
    const int threshold = erasures + level - 1;
    while (idx < sorted.size() && sorted[idx] <= threshold) ++idx;
    const auto cnt = static_cast<std::int64_t>(idx);
    need = std::max(need, (cnt + level - 1) / level);
  }
  return need;
}

DelaySpectrum take_top(const SpectrumConstraint& constraint, std::int64_t k) {
  DelaySpectrum out;
  std::int64_t left = k;
  for (const auto& l : constraint.levels) {
    const std::int64_t take = std::min(left, l.count);
    out.delays.insert(out.delays.end(), static_cast<std::size_t>(take), l.delay);
    left -= take;
    if (left == 0) break;
  }
  return out;
}

std::int64_t max_realizable_k(std::int64_t n, int erasures, const SpectrumConstraint& constraint) {
  std::int64_t total = 0;
  for (const auto& l : constraint.levels) {
    if (l.delay < erasures) throw Error(ErrorCode::InvalidArgument, "constraint delay below erasure budget");
    total += l.count;
  }
  auto fits = [&](std::int64_t k) {
    if (k == 0) return true;
    const auto targets = take_top(constraint, k);
    const auto c = min_components_for_targets(targets.delays, erasures);
    return c >= 0 && k + static_cast<std::int64_t>(erasures) * c <= n;
  };
  std::int64_t lo = 0;
  std::int64_t hi = total;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo + 1) / 2;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

DelaySpectrum permute_spectrum(const DelaySpectrum& s, std::span<const std::size_t> perm) {
  if (perm.size() != s.size()) throw Error(ErrorCode::InvalidPermutation, "permutation length mismatch");
  std::vector<bool> seen(perm.size(), false);
  DelaySpectrum out;
  out.delays.resize(s.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (perm[i] >= perm.size() || seen[perm[i]]) {
      throw Error(ErrorCode::InvalidPermutation, "not a bijection");
    }
    seen[perm[i]] = true;
    out.delays[perm[i]] = s.delays[i];
  }
  return out;
}

std::int64_t MatchingAssignment::count(int source_delay, int relay_delay, int source) const {
  return std::count_if(pairs.begin(), pairs.end(), [&](const MatchPair& p) {
    return p.source_delay == source_delay && p.relay_delay == relay_delay && p.source == source;
  });
}

MatchingAssignment match_spectra(const DelaySpectrum& src1, const DelaySpectrum& src2,
                                 const DelaySpectrum& relay, int deadline) {
  struct SourceSym {
    int delay;
    int source;
    std::size_t index;
  };
  std::vector<SourceSym> sources;
  sources.reserve(src1.size() + src2.size());
  for (std::size_t i = 0; i < src1.size(); ++i) sources.push_back({src1.delays[i], 1, i});
  for (std::size_t i = 0; i < src2.size(); ++i) sources.push_back({src2.delays[i], 2, i});
  std::sort(sources.begin(), sources.end(), [](const SourceSym& a, const SourceSym& b) {
    return std::tuple(-a.delay, a.source, a.index) < std::tuple(-b.delay, b.source, b.index);
  });

  std::vector<std::size_t> relay_order(relay.size());
  std::iota(relay_order.begin(), relay_order.end(), std::size_t{0});
  std::stable_sort(relay_order.begin(), relay_order.end(),
                   [&](std::size_t a, std::size_t b) { return relay.delays[a] < relay.delays[b]; });

  if (sources.size() > relay.size()) {
    throw Error(ErrorCode::Infeasible, std::to_string(sources.size()) + " source symbols but only " +
                                           std::to_string(relay.size()) + " relay symbols");
  }
  MatchingAssignment out;
  out.pairs.reserve(sources.size());
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto& s = sources[i];
    const std::size_t r = relay_order[i];
    const int d2 = relay.delays[r];
    if (s.delay + d2 > deadline) {
      throw Error(ErrorCode::Infeasible, "pair (" + std::to_string(s.delay) + ", " + std::to_string(d2) +
                                             ") exceeds deadline " + std::to_string(deadline));
    }
    out.pairs.push_back({s.source, s.index, s.delay, r, d2});
  }
  return out;
}

MatchingAssignment match_spectra(const GroupedSpectrum& src1, const GroupedSpectrum& src2,
                                 const GroupedSpectrum& relay, int deadline) {
  return match_spectra(src1.expand(), src2.expand(), relay.expand(), deadline);
}

}  // namespace streamrelay
