#include "streamrelay/analysis.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

Rational ratio(std::int64_t num, std::int64_t den) { return make_rational(num, den); }

Rational clamp0(const Rational& r) { return r < 0 ? Rational(0) : r; }

// One building block for the concatenated schemes: widths on the own source
// link and on the relay link, and the message symbols it carries.
struct Unit {
  std::int64_t n_src = 0;
  std::int64_t n_relay = 0;
  std::int64_t k = 0;
};

Unit symbolwise_unit(const NetworkParams& p, int erasures) {
  const int t1 = p.deadline + 1;
  return {t1 - p.budget3, t1 - erasures, t1 - erasures - p.budget3};
}

Unit messagewise_unit(const NetworkParams& p, int erasures, int split) {
  const std::int64_t first = split + 1;
  const std::int64_t second = p.deadline - split + 1;
  return {first * (second - p.budget3), second * (first - erasures), (second - p.budget3) * (first - erasures)};
}

RatePoint combine(const Unit& u1, const Unit& u2, int a, int b, const std::string& scheme) {
  if (a < 0 || b < 0) throw Error(ErrorCode::InvalidArgument, "copy counts must be nonnegative");
  if ((a > 0 && u1.k <= 0) || (b > 0 && u2.k <= 0)) {
    throw Error(ErrorCode::DegenerateSplit, "single-user code carries no symbols for these parameters");
  }
  const std::int64_t n = std::max({a * u1.n_src, b * u2.n_src, a * u1.n_relay + b * u2.n_relay});
  RatePoint pt;
  pt.scheme = scheme;
  pt.r1 = n == 0 ? Rational(0) : ratio(a * u1.k, n);
  pt.r2 = n == 0 ? Rational(0) : ratio(b * u2.k, n);
  pt.hint.n = n;
  pt.hint.k1 = a * u1.k;
  pt.hint.k2 = b * u2.k;
  pt.hint.a = a;
  pt.hint.b = b;
  return pt;
}

RatePoint best_combination(const Unit& u1, const Unit& u2, const Rational& r1, int bound, const std::string& scheme) {
  if (bound < 1) throw Error(ErrorCode::InvalidArgument, "search bound must be positive");
  const BigInt num = numerator_of(r1);
  const BigInt den = denominator_of(r1);
  const bool small = num >= 0 && num <= den && den < (BigInt(1) << 30);
  const std::int64_t inum = small ? num.convert_to<std::int64_t>() : 0;
  const std::int64_t iden = small ? den.convert_to<std::int64_t>() : 1;

  int best_a = -1, best_b = -1;
  std::int64_t best_k2 = 0, best_n = 1;
  const int max_a = u1.k > 0 ? bound : 0;
  const int max_b = u2.k > 0 ? bound : 0;
  for (int a = 0; a <= max_a; ++a) {
    for (int b = 0; b <= max_b; ++b) {
      if (a == 0 && b == 0) continue;
      const std::int64_t n = std::max({a * u1.n_src, b * u2.n_src, a * u1.n_relay + b * u2.n_relay});
      const std::int64_t k1 = a * u1.k;
      const bool meets = small ? k1 * iden >= inum * n : ratio(k1, n) >= r1;
      if (!meets) continue;
      const std::int64_t k2 = b * u2.k;
      if (best_a < 0 || k2 * best_n > best_k2 * n) {
        best_a = a;
        best_b = b;
        best_k2 = k2;
        best_n = n;
      }
    }
  }
  if (best_a < 0) {
    throw Error(ErrorCode::Infeasible, "no concatenation with A, B <= " + std::to_string(bound) + " reaches R1 = " +
                                           to_string(r1));
  }
  return combine(u1, u2, best_a, best_b, scheme);
}

// Relaxed (per unit width) spectrum of the concatenated diagonal code at the
// given rate: (1-R)/N symbols per delay from N upward, remainder on top.
// Descending delays.
std::optional<std::vector<RationalLevel>> relaxed_spectrum(const Rational& rate, int erasures) {
  std::vector<RationalLevel> out;
  if (rate <= 0) return out;
  if (erasures == 0) {
    out.push_back({0, rate});
    return out;
  }
  const Rational per_level = (1 - rate) / erasures;
  if (per_level <= 0) return std::nullopt;
  const std::int64_t levels = ceil_to_int(rate / per_level);
  const int top = erasures + static_cast<int>(levels) - 1;
  out.push_back({top, rate - Rational(levels - 1) * per_level});
  for (int d = top - 1; d >= erasures; --d) out.push_back({d, per_level});
  return out;
}

// Serves each demand (descending delay) from the smallest budget delay at or
// above it. Budget is indexed by delay. Returns false when it runs dry.
bool allocate(const std::vector<RationalLevel>& demands, std::vector<Rational>& budget) {
  for (const auto& d : demands) {
    Rational need = d.count;
    for (std::size_t delay = static_cast<std::size_t>(std::max(d.delay, 0)); delay < budget.size() && need > 0;
         ++delay) {
      const Rational take = std::min(need, budget[delay]);
      budget[delay] -= take;
      need -= take;
    }
    if (need > 0) return false;
  }
  return true;
}

std::optional<Rational> r2_given_user1(const NetworkParams& p, const std::vector<RationalLevel>& user1,
                                       std::vector<Rational> budget) {
  if (!allocate(user1, budget)) return std::nullopt;
  std::vector<RationalLevel> left;
  for (int delay = static_cast<int>(budget.size()) - 1; delay >= p.budget2; --delay) {
    if (budget[static_cast<std::size_t>(delay)] > 0) left.push_back({delay, budget[static_cast<std::size_t>(delay)]});
  }
  return max_feasible_rational(Rational(1), p.budget2, left);
}

BigInt lcm(const BigInt& a, const BigInt& b) { return a / boost::multiprecision::gcd(a, b) * b; }

}  // namespace

Rational capacity(int deadline, int erasures) {
  if (deadline < 0 || erasures < 0) throw Error(ErrorCode::InvalidArgument, "capacity needs T >= 0 and N >= 0");
  return clamp0(ratio(deadline + 1 - erasures, deadline + 1));
}

bool UpperBound::contains(const Rational& r1, const Rational& r2) const {
  return r1 >= 0 && r2 >= 0 && r1 <= r1_max && r2 <= r2_max && r1 + r2 <= sum_max;
}

UpperBound upper_bound(const NetworkParams& p) {
  p.validate();
  UpperBound u;
  u.r1_max = capacity(p.deadline - p.budget3, p.budget1);
  u.r2_max = capacity(p.deadline - p.budget3, p.budget2);
  u.sum_max = capacity(p.deadline - p.budget2, p.budget3);
  const Rational x = std::min(u.r1_max, u.sum_max);
  const Rational y = std::min(u.r2_max, u.sum_max);
  const std::vector<RatePair> raw{{0, 0}, {x, 0}, {x, std::min(y, u.sum_max - x)}, {std::min(x, u.sum_max - y), y}, {0, y}};
  for (const auto& v : raw) {
    if (u.polygon.empty() || u.polygon.back() != v) u.polygon.push_back(v);
  }
  while (u.polygon.size() > 1 && u.polygon.back() == u.polygon.front()) u.polygon.pop_back();
  return u;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::StrongSourceRelay: return "strong-source-relay";
    case Regime::WeakSourceRelay: return "weak-source-relay";
    case Regime::WeakRelayDestination: return "weak-relay-destination";
    case Regime::StrongRelayDestination: return "strong-relay-destination";
  }
  return "unknown";
}

RegimeEvaluation evaluate_regime(const NetworkParams& p) {
  p.validate();
  RegimeEvaluation e;
  e.single1 = capacity(p.deadline - p.budget3, p.budget1);
  e.single2 = capacity(p.deadline - p.budget3, p.budget2);
  e.sum = capacity(p.deadline - p.budget2, p.budget3);
  e.weak_sum = capacity(p.deadline - p.budget1, p.budget3);
  const Rational both = e.single1 + e.single2;
  e.strong_source_relay = e.weak_sum >= both;
  e.weak_source_relay = e.sum >= both && both > e.weak_sum;
  e.weak_relay_destination = both >= e.sum && e.sum >= e.single2;
  e.strong_relay_destination = e.single1 <= e.sum && e.sum <= e.single2;
  if (e.strong_source_relay) {
    e.regime = Regime::StrongSourceRelay;
  } else if (e.weak_source_relay) {
    e.regime = Regime::WeakSourceRelay;
  } else if (e.weak_relay_destination) {
    e.regime = Regime::WeakRelayDestination;
  } else {
    e.regime = Regime::StrongRelayDestination;
    e.fallback = !e.strong_relay_destination;
  }
  return e;
}

Regime classify_regime(const NetworkParams& p) { return evaluate_regime(p).regime; }

bool fb_in_regime(const NetworkParams& p) {
  p.validate();
  if (p.budget2 < p.budget3) return false;
  // T must reach the larger root of T'^2 - (N1 + 2 N2 - 2) T' + ... ; in
  // integers: with L = 2T - N1 - 2N2 + 2 and D = N1^2 - 4 N3 (N2 - N3),
  // require L >= 0 and L^2 >= D.
  const std::int64_t lhs = 2LL * p.deadline - p.budget1 - 2LL * p.budget2 + 2;
  const std::int64_t disc = 1LL * p.budget1 * p.budget1 - 4LL * p.budget3 * (p.budget2 - p.budget3);
  return lhs >= 0 && (disc < 0 || lhs * lhs >= disc);
}

Rational fb_swdf_r2(const NetworkParams& p, const Rational& r1) {
  p.validate();
  const Rational single1 = capacity(p.deadline - p.budget3, p.budget1);
  if (r1 < 0 || r1 > single1) {
    throw Error(ErrorCode::InvalidArgument, "R1 = " + to_string(r1) + " outside [0, " + to_string(single1) + "]");
  }
  Rational r2 = std::min(capacity(p.deadline - p.budget3, p.budget2), capacity(p.deadline - p.budget2, p.budget3) - r1);
  const int t1 = p.deadline + 1;
  if (p.budget1 > 0 && t1 - p.budget2 > 0) {
    const Rational line =
        1 - ratio(p.budget2, p.budget1) * (1 + r1 - ratio(t1 - p.budget1 - p.budget3, t1 - p.budget2));
    r2 = std::min(r2, line);
  }
  return clamp0(r2);
}

Rational lower_corner_r2(const NetworkParams& p) {
  p.validate();
  const int t1 = p.deadline + 1;
  const Rational sum_gap = capacity(p.deadline - p.budget2, p.budget3) - capacity(p.deadline - p.budget3, p.budget1);
  if (p.budget1 == 0 || t1 - p.budget2 <= 0 || t1 - p.budget3 <= 0) return clamp0(sum_gap);
  const Rational inner = 1 - ratio(1LL * (t1 - p.budget3 - p.budget1) * (p.budget2 - p.budget3),
                                   1LL * (t1 - p.budget2) * (t1 - p.budget3));
  const Rational line = 1 - Rational(p.budget2) * inner / p.budget1;
  return clamp0(std::min(line, sum_gap));
}

bool sumrate_achievable(const NetworkParams& p) {
  p.validate();
  const std::int64_t t1 = p.deadline + 1;
  return (t1 - p.budget3) * (t1 - p.budget2 - p.budget1) >= (t1 - p.budget3 - p.budget1) * (p.budget2 - p.budget3);
}

RatePoint intersection_point(const NetworkParams& p) {
  const int t1 = p.deadline + 1;
  if (!sumrate_achievable(p) || t1 - p.budget2 <= 0 || p.budget2 < p.budget3) {
    throw Error(ErrorCode::NotApplicable, "the sum rate is not reached for these parameters");
  }
  RatePoint pt;
  pt.scheme = "intersection";
  pt.r1 = ratio(p.budget2 - p.budget3, t1 - p.budget2);
  pt.r2 = clamp0(ratio(t1 - 2 * p.budget2, t1 - p.budget2));
  pt.hint.relay_rate = capacity(p.deadline - p.budget2, p.budget3);
  return pt;
}

RatePoint upper_corner(const NetworkParams& p) {
  p.validate();
  const int t1 = p.deadline + 1;
  const int a = p.budget2 - p.budget3;
  const int b = t1 - p.budget1;
  if (a < 0 || b <= 0 || t1 - p.budget3 <= 0) {
    throw Error(ErrorCode::NotApplicable, "upper corner needs N2 >= N3 and T + 1 > N1");
  }
  RatePoint pt;
  pt.scheme = "upper-corner";
  // A copies of the user-1 code fit beside B user-2 copies only while A <= B;
  // past that both users already sit at their single-user capacity.
  const bool both_full = a > b;
  pt.r1 = both_full ? capacity(p.deadline - p.budget3, p.budget1)
                    : clamp0(ratio(1LL * (t1 - p.budget3 - p.budget1) * a, 1LL * b * (t1 - p.budget3)));
  pt.r2 = capacity(p.deadline - p.budget3, p.budget2);
  pt.hint.a = both_full ? 1 : a;
  pt.hint.b = both_full ? 1 : b;
  return pt;
}

RatePoint cswdf_rate(const NetworkParams& p, int a, int b) {
  p.validate();
  return combine(symbolwise_unit(p, p.budget1), symbolwise_unit(p, p.budget2), a, b, "cs");
}

RatePoint cswdf_best_r2(const NetworkParams& p, const Rational& r1, int bound) {
  p.validate();
  return best_combination(symbolwise_unit(p, p.budget1), symbolwise_unit(p, p.budget2), r1, bound, "cs");
}

int cmwdf_split(const NetworkParams& p, int erasures) {
  p.validate();
  const int lo = erasures;
  const int hi = p.deadline - p.budget3;
  if (lo > hi) {
    throw Error(ErrorCode::DegenerateSplit, "no first-hop delay in [" + std::to_string(lo) + ", " +
                                                std::to_string(hi) + "]");
  }
  int best = lo;
  Rational best_value = -1;
  for (int t = lo; t <= hi; ++t) {
    const Rational first = ratio(t + 1 - erasures, t + 1);
    const Rational second = ratio(p.deadline - t + 1 - p.budget3, p.deadline - t + 1);
    const Rational v = std::min(first, second);
    if (v > best_value) {
      best_value = v;
      best = t;
    }
  }
  return best;
}

namespace {

Unit cm_unit(const NetworkParams& p, int erasures) {
  try {
    return messagewise_unit(p, erasures, cmwdf_split(p, erasures));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateSplit) throw;
    return {};
  }
}

void add_splits(const NetworkParams& p, RatePoint& pt) {
  if (pt.hint.a.value_or(0) > 0) pt.hint.split1 = cmwdf_split(p, p.budget1);
  if (pt.hint.b.value_or(0) > 0) pt.hint.split2 = cmwdf_split(p, p.budget2);
}

}  // namespace

RatePoint cmwdf_rate(const NetworkParams& p, int a, int b) {
  p.validate();
  const Unit u1 = a > 0 ? messagewise_unit(p, p.budget1, cmwdf_split(p, p.budget1)) : Unit{};
  const Unit u2 = b > 0 ? messagewise_unit(p, p.budget2, cmwdf_split(p, p.budget2)) : Unit{};
  RatePoint pt = combine(u1, u2, a, b, "cm");
  add_splits(p, pt);
  return pt;
}

RatePoint cmwdf_best_r2(const NetworkParams& p, const Rational& r1, int bound) {
  p.validate();
  RatePoint pt = best_combination(cm_unit(p, p.budget1), cm_unit(p, p.budget2), r1, bound, "cm");
  add_splits(p, pt);
  return pt;
}

namespace {

std::optional<Rational> r2_for_relay_rate(const NetworkParams& p, const Rational& r1, const Rational& relay_rate) {
  const auto relay = relaxed_spectrum(relay_rate, p.budget3);
  if (!relay) return std::nullopt;
  // Budget for the first hop, indexed by delay T - d2.
  std::vector<Rational> budget(static_cast<std::size_t>(p.deadline + 1), Rational(0));
  for (const auto& l : *relay) {
    const int d = p.deadline - l.delay;
    if (d >= 0) budget[static_cast<std::size_t>(d)] += l.count;
  }
  std::optional<Rational> best;
  auto consider = [&](const std::vector<RationalLevel>& user1) {
    const auto r2 = r2_given_user1(p, user1, budget);
    if (r2 && (!best || *r2 > *best)) best = r2;
  };
  if (const auto lemma = relaxed_spectrum(r1, p.budget1)) consider(*lemma);
  const int levels = p.deadline - p.budget3 - p.budget1 + 1;
  if (levels >= 1 && r1 > 0) {
    std::vector<RationalLevel> uniform;
    for (int d = p.deadline - p.budget3; d >= p.budget1; --d) uniform.push_back({d, r1 / levels});
    if (r1 <= max_feasible_rational(Rational(1), p.budget1, uniform)) consider(uniform);
  }
  return best;
}

}  // namespace

Rational ob_r2_at(const NetworkParams& p, const Rational& r1, const Rational& relay_rate) {
  p.validate();
  return r2_for_relay_rate(p, r1, relay_rate).value_or(Rational(0));
}

std::optional<Rational> fb_swdf_realized_r2(const NetworkParams& p, const Rational& r1) {
  p.validate();
  const Rational single1 = capacity(p.deadline - p.budget3, p.budget1);
  if (r1 < 0 || r1 > single1) {
    throw Error(ErrorCode::InvalidArgument, "R1 = " + to_string(r1) + " outside [0, " + to_string(single1) + "]");
  }
  if (fb_in_regime(p)) return fb_swdf_r2(p, r1);
  const auto r2 = r2_for_relay_rate(p, r1, capacity(p.deadline - p.budget2, p.budget3));
  if (!r2) return std::nullopt;
  return std::min(*r2, fb_swdf_r2(p, r1));
}

ObResult ob_swdf(const NetworkParams& p, const Rational& r1, std::int64_t scale_cap, const Rational& epsilon) {
  p.validate();
  if (epsilon <= 0) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const Rational single1 = capacity(p.deadline - p.budget3, p.budget1);
  if (r1 < 0 || r1 > single1) {
    throw Error(ErrorCode::InvalidArgument, "R1 = " + to_string(r1) + " outside [0, " + to_string(single1) + "]");
  }
  const Rational sum = capacity(p.deadline - p.budget2, p.budget3);
  ObResult res;
  res.relay_rate = sum;
  res.r2_initial = ob_r2_at(p, r1, sum);
  Rational best = res.r2_initial;
  if (r1 + res.r2_initial != sum) {
    Rational lo = r1 + res.r2_initial;
    Rational hi = sum;
    while (hi - lo > epsilon) {
      const Rational mid = (lo + hi) / 2;
      const Rational r2 = ob_r2_at(p, r1, mid);
      ++res.iterations;
      if (r2 > best) {
        best = r2;
        res.relay_rate = mid;
      }
      if (r1 + r2 == mid) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }
  res.point.scheme = "ob";
  res.point.r1 = r1;
  res.point.r2 = best;
  res.point.hint.relay_rate = res.relay_rate;
  const BigInt n = lcm(lcm(denominator_of(r1), denominator_of(best)), denominator_of(res.relay_rate));
  if (n <= scale_cap) {
    const auto in = n.convert_to<std::int64_t>();
    res.point.hint.n = in;
    res.point.hint.k1 = floor_to_int(r1 * in);
    res.point.hint.k2 = floor_to_int(best * in);
  }
  return res;
}

RegimeReport regime_achievability(const NetworkParams& p) {
  RegimeReport rep;
  rep.evaluation = evaluate_regime(p);
  rep.sumrate_reached = sumrate_achievable(p);
  const auto& e = rep.evaluation;
  auto point = [](Rational r1, Rational r2, const char* name) {
    RatePoint pt;
    pt.r1 = std::move(r1);
    pt.r2 = std::move(r2);
    pt.scheme = name;
    return pt;
  };
  switch (e.regime) {
    case Regime::StrongSourceRelay:
      rep.corners.push_back(cswdf_rate(p, 1, 1));
      rep.full_region = true;
      break;
    case Regime::WeakSourceRelay:
      rep.full_region = p.deadline <= p.budget1 + p.budget2 - p.budget3 - 1;
      rep.corners.push_back(point(e.single1, 0, "single-user-1"));
      rep.corners.push_back(point(0, e.single2, "single-user-2"));
      if (rep.full_region) rep.corners.push_back(cswdf_rate(p, 1, 1));
      break;
    case Regime::WeakRelayDestination:
      if (fb_in_regime(p)) {
        rep.corners.push_back(point(e.single1, lower_corner_r2(p), "lower-corner"));
        if (rep.sumrate_reached) rep.corners.push_back(intersection_point(p));
      }
      rep.corners.push_back(upper_corner(p));
      break;
    case Regime::StrongRelayDestination:
      rep.corners.push_back(point(0, e.sum, "single-user-2"));
      rep.corners.push_back(point(e.single1, clamp0(e.sum - e.single1), "lower-corner"));
      rep.full_region = !e.fallback;
      break;
  }
  return rep;
}

}  // namespace streamrelay
