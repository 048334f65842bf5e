#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "streamrelay/network.hpp"
#include "streamrelay/rational.hpp"

namespace streamrelay {

/// Single-link capacity (T+1-N)/(T+1), clamped at zero.
Rational capacity(int deadline, int erasures);

using RatePair = std::pair<Rational, Rational>;

struct UpperBound {
  Rational r1_max;   ///< C(T-N3, N1)
  Rational r2_max;   ///< C(T-N3, N2)
  Rational sum_max;  ///< C(T-N2, N3)
  /// Vertices counter-clockwise from the origin.
  std::vector<RatePair> polygon;

  bool contains(const Rational& r1, const Rational& r2) const;
};

UpperBound upper_bound(const NetworkParams& params);

enum class Regime { StrongSourceRelay, WeakSourceRelay, WeakRelayDestination, StrongRelayDestination };

std::string_view to_string(Regime r);

/// The four regime inequalities, evaluated exactly. The regime is the first
/// one that holds in the order strong-SR, weak-SR, weak-RD, strong-RD; if
/// none holds the tuple is reported as strong-RD with `fallback` set.
struct RegimeEvaluation {
  Regime regime = Regime::WeakRelayDestination;
  Rational single1;   ///< C(T-N3, N1)
  Rational single2;   ///< C(T-N3, N2)
  Rational sum;       ///< C(T-N2, N3)
  Rational weak_sum;  ///< C(T-N1, N3)
  bool strong_source_relay = false;
  bool weak_source_relay = false;
  bool weak_relay_destination = false;
  bool strong_relay_destination = false;
  bool fallback = false;
};

RegimeEvaluation evaluate_regime(const NetworkParams& params);
Regime classify_regime(const NetworkParams& params);

/// Code parameters that realize a rate point, when known.
struct RealizationHint {
  std::optional<std::int64_t> n, k1, k2;
  std::optional<Rational> relay_rate;
  std::optional<int> a, b;
  std::optional<int> split1, split2;  ///< message-wise first-hop delays
};

struct RatePoint {
  Rational r1;
  Rational r2;
  std::string scheme;
  RealizationHint hint;
};

/// Whether N1 >= N2 >= N3 and T is large enough for the fixed-bottleneck
/// closed form to be a valid achievability result.
bool fb_in_regime(const NetworkParams& params);

/// Closed-form fixed-bottleneck rate for user 2 given R1, clamped at zero.
/// Throws InvalidArgument if R1 is outside [0, C(T-N3, N1)].
Rational fb_swdf_r2(const NetworkParams& params, const Rational& r1);

/// User-2 rate the fixed-bottleneck scheme actually reaches at R1. Inside
/// the regime of fb_in_regime this is the closed form. Outside it, the relay
/// keeps rate C(T-N2, N3) with its uniform spectrum and user 2 gets what the
/// relaxed allocation leaves, capped by the closed form; nullopt when user 1
/// does not fit into the relay budget at all.
std::optional<Rational> fb_swdf_realized_r2(const NetworkParams& params, const Rational& r1);

/// User-2 rate when user 1 sits at its single-user capacity.
Rational lower_corner_r2(const NetworkParams& params);

/// (T+1-N3)(T+1-N2-N1) >= (T+1-N3-N1)(N2-N3).
bool sumrate_achievable(const NetworkParams& params);

/// Point where the fixed-bottleneck line meets the sum-rate bound. Throws
/// NotApplicable unless sumrate_achievable.
RatePoint intersection_point(const NetworkParams& params);

/// Highest known R1 with R2 = C(T-N3, N2); hint A = N2-N3, B = T+1-N1.
RatePoint upper_corner(const NetworkParams& params);

/// Concatenation of A single-user-1 and B single-user-2 symbol-wise codes.
RatePoint cswdf_rate(const NetworkParams& params, int a, int b);

/// Best R2 over A, B <= bound subject to an achieved R1 >= r1. Ties go to the
/// smallest A, then the smallest B. Throws Infeasible if no pair reaches r1.
RatePoint cswdf_best_r2(const NetworkParams& params, const Rational& r1, int bound = 60);

/// First-hop delay T~ for a message-wise user with budget `erasures`: the
/// smallest maximizer of min((T'+1-N)/(T'+1), (T-T'+1-N3)/(T-T'+1)) over
/// T' in [N, T-N3]. Throws DegenerateSplit when the range is empty.
int cmwdf_split(const NetworkParams& params, int erasures);
RatePoint cmwdf_rate(const NetworkParams& params, int a, int b);
RatePoint cmwdf_best_r2(const NetworkParams& params, const Rational& r1, int bound = 60);

struct ObResult {
  RatePoint point;
  Rational relay_rate;  ///< bottleneck rate of the best iterate
  int iterations = 0;
  Rational r2_initial;  ///< iterate 0, at the fixed bottleneck C(T-N2, N3)
};

/// Optimized-bottleneck search. Symbol counts are relaxed to rationals per
/// unit slot width; the bottleneck rate is bisected until the bracket is
/// at most epsilon wide. `scale_cap` bounds the integer slot width reported
/// in the realization hint.
ObResult ob_swdf(const NetworkParams& params, const Rational& r1, std::int64_t scale_cap = 100000,
                 const Rational& epsilon = make_rational(1, 100000));

/// User-2 rate for a fixed bottleneck rate and R1, in the same relaxation.
Rational ob_r2_at(const NetworkParams& params, const Rational& r1, const Rational& relay_rate);

struct RegimeReport {
  RegimeEvaluation evaluation;
  std::vector<RatePoint> corners;
  bool full_region = false;
  bool sumrate_reached = false;
};

RegimeReport regime_achievability(const NetworkParams& params);

struct SchemeCurve {
  std::string scheme;
  std::vector<RatePoint> points;  ///< sorted by R1
};

struct RateRegion {
  NetworkParams params;
  UpperBound bound;
  std::vector<SchemeCurve> curves;  ///< sorted by scheme name
  /// Upper concave envelope of each curve.
  std::vector<SchemeCurve> hulls;
};

/// Known scheme names: upper, fb, cs, cm, ob, ts.
std::vector<std::string> all_schemes();

struct RegionOptions {
  int grid = 101;
  Rational epsilon = make_rational(1, 100000);
  int search_bound = 60;
};

/// Sweeps R1 over `grid` evenly spaced points of [0, C(T-N3, N1)]. "ts" is
/// the upper concave envelope of every achieved point plus the exact corner
/// points. Throws InvalidArgument for unknown schemes or grid < 2.
RateRegion region(const NetworkParams& params, const std::vector<std::string>& schemes,
                  const RegionOptions& opts = {});

/// Upper concave envelope of a point set, including the projections onto the
/// axes (achievable regions are closed under decreasing either rate).
std::vector<RatePair> concave_envelope(std::vector<RatePair> points);

std::string region_csv(const RateRegion& r);
std::string region_json(const RateRegion& r);

}  // namespace streamrelay
