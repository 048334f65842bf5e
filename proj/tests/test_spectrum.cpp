#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "streamrelay/error.hpp"
#include "streamrelay/spectrum.hpp"
#include "support.hpp"

namespace streamrelay {
namespace {

using testing::Q;

GroupedSpectrum G(std::vector<DelayGroup> g) { return {GroupOrder::Descending, std::move(g)}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

TEST(AchievableSpectrum, KnownCodes) {
  EXPECT_EQ(achievable_spectrum(30, 24, 1), G({{4, 6}, {3, 6}, {2, 6}, {1, 6}}));
  EXPECT_EQ(achievable_spectrum(30, 15, 3), G({{5, 5}, {4, 5}, {3, 5}}));
  EXPECT_EQ(achievable_spectrum(2, 1, 1), G({{1, 1}}));
  EXPECT_EQ(achievable_spectrum(7, 5, 2), G({{6, 1}, {5, 1}, {4, 1}, {3, 1}, {2, 1}}));
  EXPECT_EQ(achievable_spectrum(10, 4, 2), G({{3, 1}, {2, 3}}));
}

TEST(AchievableSpectrum, ShapeProperties) {
  for (int n = 2; n <= 30; ++n) {
    for (int N = 1; N <= 4; ++N) {
      for (int k = 1; k < n; ++k) {
        if ((n - k) % N != 0) continue;
        const auto s = achievable_spectrum(n, k, N);
        const std::int64_t per = (n - k) / N;
        EXPECT_EQ(s.total(), k);
        EXPECT_EQ(s.min_delay(), N);
        for (std::size_t i = 0; i + 1 < s.groups.size(); ++i) {
          EXPECT_EQ(s.groups[i].delay, s.groups[i + 1].delay + 1);
          if (i > 0) EXPECT_EQ(s.groups[i].count, per);
        }
        EXPECT_LE(s.groups.front().count, per);
        EXPECT_GT(s.groups.front().count, 0);
        EXPECT_EQ(s.groups.back().count, std::min<std::int64_t>(per, k));
      }
    }
  }
}

TEST(AchievableSpectrum, Errors) {
  EXPECT_EQ(code_of([] { achievable_spectrum(30, 25, 2); }), ErrorCode::IndivisibleParity);
  EXPECT_EQ(code_of([] { achievable_spectrum(5, 5, 1); }), ErrorCode::Infeasible);
  EXPECT_EQ(code_of([] { achievable_spectrum(5, 4, 0); }), ErrorCode::IndivisibleParity);
  EXPECT_EQ(achievable_spectrum(5, 5, 0), G({{0, 5}}));
}

TEST(GroupedSpectrum, ExpandAndRegroupRoundTrip) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> d(0, 7);
  for (int trial = 0; trial < 100; ++trial) {
    DelaySpectrum s;
    for (int i = 0; i < 20; ++i) s.delays.push_back(d(rng));
    std::sort(s.delays.rbegin(), s.delays.rend());
    const auto g = group(s);
    EXPECT_EQ(g.expand(), s);
    EXPECT_EQ(g.total(), 20);
    const auto asc = g.reordered(GroupOrder::Ascending);
    EXPECT_EQ(asc.reordered(GroupOrder::Descending), g);
    EXPECT_EQ(asc.groups.front().delay, g.min_delay());
  }
}

// Test-side evaluation of the max-symbol inequalities: picking the k top
// symbols of the budget, every level j must satisfy
// k <= n - N (n - symbols above level j) / (delay_j + 1), and k <= total.
std::int64_t brute_max_k(std::int64_t n, int N, const SpectrumConstraint& c) {
  std::int64_t total = 0;
  for (const auto& l : c.levels) total += l.count;
  std::int64_t best = 0;
  for (std::int64_t k = 0; k <= total; ++k) {
    bool ok = true;
    std::int64_t above = 0;
    for (const auto& l : c.levels) {
      const Rational bound = Rational(n) - Rational(N) * Rational(n - above) / (l.delay + 1);
      if (Rational(k) > bound) ok = false;
      above += l.count;
    }
    if (ok) best = k;
  }
  return best;
}

TEST(MaxFeasibleK, LeftoverBudgetOfTheTableCode) {
  const SpectrumConstraint c{{{5, 1}, {4, 1}, {3, 1}, {2, 6}}};
  EXPECT_EQ(max_feasible_k(30, 2, c), 9);
  EXPECT_EQ(max_realizable_k(30, 2, c), 9);
  EXPECT_EQ(first_violated_inequality(30, 9, 2, c), -1);
  EXPECT_EQ(first_violated_inequality(30, 10, 2, c), 4);
}

TEST(MaxFeasibleK, MatchesBruteForceOnRandomBudgets) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int N = std::uniform_int_distribution<int>(1, 3)(rng);
    const std::int64_t n = std::uniform_int_distribution<int>(N + 1, 40)(rng);
    SpectrumConstraint c;
    int delay = N + std::uniform_int_distribution<int>(0, 5)(rng);
    while (delay >= N) {
      c.levels.push_back({delay, std::uniform_int_distribution<int>(0, 8)(rng)});
      delay -= std::uniform_int_distribution<int>(1, 2)(rng);
    }
    const auto k = max_feasible_k(n, N, c);
    EXPECT_EQ(k, brute_max_k(n, N, c));
    EXPECT_LE(max_realizable_k(n, N, c), k);
    std::vector<RationalLevel> rl;
    for (const auto& l : c.levels) rl.push_back({l.delay, Rational(l.count)});
    EXPECT_EQ(floor_to_int(max_feasible_rational(Rational(n), N, rl)), k);
  }
}

TEST(MinComponents, SmallCases) {
  const std::vector<int> uniform{5, 5, 5, 4, 4, 4, 3, 3, 3};
  EXPECT_EQ(min_components_for_targets(uniform, 2), 3);
  const std::vector<int> below{1, 3};
  EXPECT_EQ(min_components_for_targets(below, 2), -1);
  const std::vector<int> zero{0, 0, 0};
  EXPECT_EQ(min_components_for_targets(zero, 0), 1);
}

TEST(TakeTop, PicksLargestDelaysFirst) {
  const SpectrumConstraint c{{{5, 2}, {3, 3}, {2, 1}}};
  EXPECT_EQ(take_top(c, 4).delays, (std::vector<int>{5, 5, 3, 3}));
  EXPECT_EQ(take_top(c, 0).delays, std::vector<int>{});
}

TEST(PermuteSpectrum, MovesSymbolsAndRejectsBadPermutations) {
  const DelaySpectrum s{{4, 3, 2}};
  const std::vector<std::size_t> perm{2, 0, 1};
  EXPECT_EQ(permute_spectrum(s, perm).delays, (std::vector<int>{3, 2, 4}));
  const std::vector<std::size_t> dup{0, 0, 1};
  EXPECT_EQ(code_of([&] { permute_spectrum(s, dup); }), ErrorCode::InvalidPermutation);
  const std::vector<std::size_t> shortp{0, 1};
  EXPECT_EQ(code_of([&] { permute_spectrum(s, shortp); }), ErrorCode::InvalidPermutation);
}

TEST(Matching, TableCodeDelayPairs) {
  const auto src1 = achievable_spectrum(30, 15, 3);
  const auto src2 = G({{5, 1}, {4, 1}, {3, 1}, {2, 6}});
  const auto relay = achievable_spectrum(30, 24, 1).reordered(GroupOrder::Ascending);
  const auto m = match_spectra(src1, src2, relay, 6);
  ASSERT_EQ(m.pairs.size(), 24u);
  for (const auto& [d1, d2] : std::vector<std::pair<int, int>>{{5, 1}, {4, 2}, {3, 3}, {2, 4}}) {
    EXPECT_EQ(m.count(d1, d2, 1) + m.count(d1, d2, 2), 6) << d1 << "," << d2;
  }
  EXPECT_EQ(m.count(5, 1, 1), 5);
  EXPECT_EQ(m.count(2, 4, 2), 6);
  for (const auto& p : m.pairs) EXPECT_LE(p.source_delay + p.relay_delay, 6);
}

TEST(Matching, FewerRelaySymbolsIsInfeasible) {
  const DelaySpectrum a{{2, 2}}, b{{1}}, r{{1, 1}};
  EXPECT_EQ(code_of([&] { match_spectra(a, b, r, 5); }), ErrorCode::Infeasible);
}

bool brute_force_matchable(const std::vector<int>& src, std::vector<int> relay, int deadline) {
  std::sort(relay.begin(), relay.end());
  do {
    bool ok = true;
    for (std::size_t i = 0; i < src.size() && ok; ++i) ok = src[i] + relay[i] <= deadline;
    if (ok) return true;
  } while (std::next_permutation(relay.begin(), relay.end()));
  return false;
}

TEST(Matching, GreedySucceedsExactlyWhenSomePairingExists) {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> d(0, 6);
  for (int trial = 0; trial < 400; ++trial) {
    const int k1 = std::uniform_int_distribution<int>(0, 3)(rng);
    const int k2 = std::uniform_int_distribution<int>(0, 3)(rng);
    const int k3 = k1 + k2 + std::uniform_int_distribution<int>(0, 1)(rng);
    DelaySpectrum s1, s2, r;
    for (int i = 0; i < k1; ++i) s1.delays.push_back(d(rng));
    for (int i = 0; i < k2; ++i) s2.delays.push_back(d(rng));
    for (int i = 0; i < k3; ++i) r.delays.push_back(d(rng));
    const int deadline = std::uniform_int_distribution<int>(3, 9)(rng);
    std::vector<int> all = s1.delays;
    all.insert(all.end(), s2.delays.begin(), s2.delays.end());
    // Pad sources with delay 0 dummies so that every relay symbol is paired.
    while (all.size() < r.delays.size()) all.push_back(-100);
    const bool expected = brute_force_matchable(all, r.delays, deadline);
    bool got = true;
    try {
      const auto m = match_spectra(s1, s2, r, deadline);
      std::set<std::size_t> used;
      for (const auto& p : m.pairs) {
        EXPECT_LE(p.source_delay + p.relay_delay, deadline);
        EXPECT_TRUE(used.insert(p.relay_index).second);
        const auto& src = p.source == 1 ? s1 : s2;
        EXPECT_EQ(src.delays[p.source_index], p.source_delay);
        EXPECT_EQ(r.delays[p.relay_index], p.relay_delay);
      }
      EXPECT_EQ(m.pairs.size(), static_cast<std::size_t>(k1 + k2));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::Infeasible);
      got = false;
    }
    EXPECT_EQ(got, expected) << "trial " << trial;
  }
}

}  // namespace
}  // namespace streamrelay
