#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "streamrelay/erasure.hpp"
#include "streamrelay/p2p.hpp"
#include "streamrelay/rational.hpp"
#include "streamrelay/spectrum.hpp"

namespace streamrelay {

/// Erasure budgets of the three links and the end-to-end deadline.
struct NetworkParams {
  int budget1 = 0;  ///< source 1 -> relay
  int budget2 = 0;  ///< source 2 -> relay
  int budget3 = 0;  ///< relay -> destination
  int deadline = 1;

  /// Throws InvalidArgument unless budget1 >= budget2 >= 0, budget3 >= 0 and
  /// deadline >= 1.
  void validate() const;
  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Where relay message symbol j' comes from: symbol `source_index` of source
/// `source`, decoded `lag` slots earlier.
struct ScheduleEntry {
  int relay_index = 0;
  int source = 1;
  int source_index = 0;
  int lag = 0;
  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

struct MultiAccessCode {
  NetworkParams params;
  P2PStreamingCode src1;
  P2PStreamingCode src2;
  P2PStreamingCode relay;
  MatchingAssignment assignment;
  std::vector<ScheduleEntry> schedule;  ///< one entry per matched relay symbol, by relay index

  /// Slot width used for rates: the widest of the three links.
  int n() const;
  int k1() const { return src1.k(); }
  int k2() const { return src2.k(); }
  Rational rate1() const;
  Rational rate2() const;
  /// Smallest slack T - (d1 + d2) over matched pairs, using structural delays.
  int worst_margin() const;
  /// Default horizon: 3(T+1) plus the longest component span.
  int default_horizon() const;
};

/// Symbol-wise decode-and-forward composition. Pairs symbols with the greedy
/// matcher on declared delays; relay symbol j' with relay delay d2 carries its
/// source symbol from T - d2 slots earlier so that it reaches the destination
/// exactly at the deadline. Throws RelayCapacityExceeded, ParameterMismatch
/// or Infeasible.
MultiAccessCode compose_swdf(P2PStreamingCode src1, P2PStreamingCode src2, P2PStreamingCode relay,
                             const NetworkParams& params);

/// Same as compose_swdf but with an explicit assignment, which is checked:
/// indices in range, each symbol used once, stored delays equal to the
/// declared ones and d1 + d2 <= T.
MultiAccessCode compose_with_assignment(P2PStreamingCode src1, P2PStreamingCode src2, P2PStreamingCode relay,
                                        const NetworkParams& params, MatchingAssignment assignment);

struct ErasurePattern {
  ErasureSet link1;
  ErasureSet link2;
  ErasureSet link3;
  friend bool operator==(const ErasurePattern&, const ErasurePattern&) = default;
  friend auto operator<=>(const ErasurePattern&, const ErasurePattern&) = default;
};

struct NetworkFailure {
  ErasurePattern pattern;
  int user = 1;
  std::int64_t t = 0;
  int j = 0;
};

struct SimulationTrace {
  PacketStream sent1, sent2, sent3;
  /// Relay estimates per user, time and symbol (unset: not decodable).
  std::vector<std::vector<std::optional<Symbol>>> relay1, relay2;
  /// Destination estimates at time t + T (unset outside the checked window).
  std::vector<std::vector<std::optional<Symbol>>> dest1, dest2;
  std::vector<NetworkFailure> failures;
};

/// Runs the four-node network for `horizon` slots. Every source symbol whose
/// deadline lies inside the horizon is checked at the destination.
SimulationTrace simulate(const MultiAccessCode& code, const std::vector<Message>& messages1,
                         const std::vector<Message>& messages2, const ErasurePattern& pattern, int horizon);

struct NetworkReport {
  std::uint64_t patterns_checked = 0;
  std::uint64_t failure_count = 0;
  std::vector<NetworkFailure> failures;  ///< first few, sorted
  int worst_margin = 0;
  bool exhaustive = true;
  /// True when exhaustive mode split the check per link instead of
  /// simulating every combined pattern.
  bool factorized = false;

  bool ok() const { return failure_count == 0; }
};

/// Checks the code against every erasure pattern allowed by `budgets`
/// (exhaustive) or against all burst combinations plus seeded random
/// patterns (sampled). Budgets may differ from the design budgets.
NetworkReport verify_network(const MultiAccessCode& code, const NetworkParams& budgets, int horizon,
                             const VerifyOptions& opts = {});

/// Concatenates the links of `a` copies of code_a and `b` copies of code_b.
/// Throws ParameterMismatch if the parameters differ.
MultiAccessCode timeshare(const MultiAccessCode& code_a, const MultiAccessCode& code_b, int a, int b);

/// Concatenation of several point-to-point codes into one.
P2PStreamingCode concatenate(const std::vector<const P2PStreamingCode*>& codes, int erasures);

/// Capacity-achieving code for one user alone: source DIMDS with delays
/// N_i..T-N3 and relay DIMDS with delays N3..T-N_i. Throws DegenerateSplit
/// when T + 1 <= N_i + N3.
MultiAccessCode single_user_code(const NetworkParams& params, int user);

}  // namespace streamrelay
