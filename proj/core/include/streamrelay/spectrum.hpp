#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "streamrelay/rational.hpp"

namespace streamrelay {

/// Per-symbol decoding deadlines, indexed by message symbol.
struct DelaySpectrum {
  std::vector<int> delays;

  std::size_t size() const { return delays.size(); }
  friend bool operator==(const DelaySpectrum&, const DelaySpectrum&) = default;
};

struct DelayGroup {
  int delay = 0;
  std::int64_t count = 0;
  friend bool operator==(const DelayGroup&, const DelayGroup&) = default;
};

enum class GroupOrder { Descending, Ascending };

/// Equally-delayed-symbols grouping: (delay, count) pairs with strictly
/// monotone delays. Sources list delays descending, the relay ascending.
struct GroupedSpectrum {
  GroupOrder order = GroupOrder::Descending;
  std::vector<DelayGroup> groups;

  std::int64_t total() const;
  int min_delay() const;
  int max_delay() const;
  /// Expands to one delay per symbol, in group order.
  DelaySpectrum expand() const;
  GroupedSpectrum reordered(GroupOrder o) const;

  friend bool operator==(const GroupedSpectrum&, const GroupedSpectrum&) = default;
};

/// Groups a per-symbol spectrum; zero-count groups are never emitted.
GroupedSpectrum group(const DelaySpectrum& s, GroupOrder order = GroupOrder::Descending);

/// Maximum symbol counts per delay, delays strictly descending.
struct SpectrumConstraint {
  std::vector<DelayGroup> levels;
};

/// Spectrum of the (n, k) concatenated diagonally-interleaved MDS code that
/// tolerates `erasures` arbitrary erasures: (n-k)/N symbols at each delay from
/// N upward and the remainder at the top delay. Descending order.
/// Throws IndivisibleParity if N does not divide n-k, Infeasible if k >= n.
GroupedSpectrum achievable_spectrum(std::int64_t n, std::int64_t k, int erasures);

/// Largest k allowed by the two max-symbol inequalities, evaluated exactly and
/// floored. Constraint delays must be descending and >= erasures.
std::int64_t max_feasible_k(std::int64_t n, int erasures, const SpectrumConstraint& constraint);

/// Exact (unfloored) bound behind max_feasible_k, for rational counts.
struct RationalLevel {
  int delay = 0;
  Rational count;
};
Rational max_feasible_rational(const Rational& n, int erasures, std::span<const RationalLevel> levels);

/// Index of the first inequality violated by picking `k` symbols from the
/// constraint (top delays first), or -1 when all hold. Index `levels.size()`
/// denotes the total-count inequality.
int first_violated_inequality(std::int64_t n, std::int64_t k, int erasures,
                              const SpectrumConstraint& constraint);

/// Number of concatenated diagonal components needed to give every symbol of
/// `targets` (one delay per symbol) a guaranteed delay no larger than its
/// target, using the fewest components. Returns -1 if some target is below N.
std::int64_t min_components_for_targets(std::span<const int> targets, int erasures);

/// Largest integer k whose top-delay selection from `constraint` is realizable
/// as a concatenation of diagonal components of total width <= n.
std::int64_t max_realizable_k(std::int64_t n, int erasures, const SpectrumConstraint& constraint);

/// Picks the `k` largest delays from the constraint budget.
DelaySpectrum take_top(const SpectrumConstraint& constraint, std::int64_t k);

/// perm[i] is the new position of symbol i. Throws InvalidPermutation.
DelaySpectrum permute_spectrum(const DelaySpectrum& s, std::span<const std::size_t> perm);

struct MatchPair {
  int source = 1;            ///< 1 or 2
  std::size_t source_index = 0;
  int source_delay = 0;
  std::size_t relay_index = 0;
  int relay_delay = 0;
  friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct MatchingAssignment {
  std::vector<MatchPair> pairs;

  /// Count of pairs per (source delay, relay delay, source).
  std::int64_t count(int source_delay, int relay_delay, int source) const;
};

/// Greedy pairing: source symbols by delay descending (source 1 before 2, then
/// lower index) against relay symbols by delay ascending (lower index first).
/// Throws Infeasible naming the first pair whose delays exceed the deadline,
/// or when there are fewer relay symbols than source symbols.
MatchingAssignment match_spectra(const DelaySpectrum& src1, const DelaySpectrum& src2,
                                 const DelaySpectrum& relay, int deadline);
MatchingAssignment match_spectra(const GroupedSpectrum& src1, const GroupedSpectrum& src2,
                                 const GroupedSpectrum& relay, int deadline);

}  // namespace streamrelay
