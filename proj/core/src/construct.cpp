#include "streamrelay/construct.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "streamrelay/analysis.hpp"
#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

std::optional<std::int64_t> scaled(const Rational& r, int n) {
  const Rational v = r * n;
  if (denominator_of(v) != 1) return std::nullopt;
  return numerator_of(v).convert_to<std::int64_t>();
}

// User-1 target delays at width n: uniform over N1..T-N3 when it divides
// evenly, otherwise the concatenated-diagonal spectrum.
std::optional<DelaySpectrum> user1_targets(const NetworkParams& p, std::int64_t n, std::int64_t k1) {
  DelaySpectrum out;
  if (k1 == 0) return out;
  const int levels = p.deadline - p.budget3 - p.budget1 + 1;
  if (levels >= 1 && k1 % levels == 0) {
    for (int d = p.deadline - p.budget3; d >= p.budget1; --d) {
      out.delays.insert(out.delays.end(), static_cast<std::size_t>(k1 / levels), d);
    }
    return out;
  }
  if (k1 >= n || (p.budget1 > 0 && (n - k1) % p.budget1 != 0) || (p.budget1 == 0 && k1 != n)) return std::nullopt;
  return achievable_spectrum(n, k1, p.budget1).expand();
}

std::optional<MultiAccessCode> build_at(const NetworkParams& p, const Rational& r1, int n) {
  const Rational sum = capacity(p.deadline - p.budget2, p.budget3);
  const auto kbn = scaled(sum, n);
  const auto k1 = scaled(r1, n);
  if (!kbn || !k1 || *kbn == 0) return std::nullopt;
  if (p.budget3 > 0 && (n - *kbn) % p.budget3 != 0) return std::nullopt;
  if (p.budget3 == 0 && *kbn != n) return std::nullopt;
  try {
    P2PStreamingCode relay = build_spectrum_code(n, *kbn, p.budget3);
    // Relay symbol with delay d2 leaves T - d2 slots for the first hop.
    std::vector<std::int64_t> budget(static_cast<std::size_t>(p.deadline + 1), 0);
    for (int d2 : relay.declared_delays()) {
      if (d2 <= p.deadline) ++budget[static_cast<std::size_t>(p.deadline - d2)];
    }
    const auto targets1 = user1_targets(p, n, *k1);
    if (!targets1) return std::nullopt;
    std::vector<int> sorted = targets1->delays;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (int d : sorted) {
      std::size_t slot = static_cast<std::size_t>(std::max(d, 0));
      while (slot < budget.size() && budget[slot] == 0) ++slot;
      if (slot >= budget.size()) return std::nullopt;
      --budget[slot];
    }
    SpectrumConstraint left;
    for (int d = p.deadline; d >= p.budget2; --d) {
      if (budget[static_cast<std::size_t>(d)] > 0) left.levels.push_back({d, budget[static_cast<std::size_t>(d)]});
    }
    const std::int64_t k2 = max_realizable_k(n, p.budget2, left);
    P2PStreamingCode src1 = build_constrained_code(n, p.budget1, *targets1);
    P2PStreamingCode src2 = build_constrained_code(n, p.budget2, take_top(left, k2));
    return compose_swdf(std::move(src1), std::move(src2), std::move(relay), p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Infeasible || e.code() == ErrorCode::IndivisibleParity) return std::nullopt;
    throw;
  }
}

}  // namespace

FbConstruction construct_fb(const NetworkParams& params, const Rational& r1, int max_n) {
  params.validate();
  const Rational single1 = capacity(params.deadline - params.budget3, params.budget1);
  if (r1 < 0 || r1 > single1) {
    throw Error(ErrorCode::Infeasible, "R1 = " + to_string(r1) + " exceeds the single-user capacity " +
                                           to_string(single1));
  }
  FbConstruction out;
  out.target_r2 = fb_swdf_r2(params, r1);
  std::optional<MultiAccessCode> best;
  for (int n = 1; n <= max_n; ++n) {
    auto code = build_at(params, r1, n);
    if (!code) continue;
    if (code->rate2() >= out.target_r2) {
      out.code = std::move(*code);
      out.reached_target = true;
      return out;
    }
    if (!best || code->rate2() > best->rate2()) best = std::move(code);
  }
  if (!best) {
    throw Error(ErrorCode::Infeasible, "no slot width up to " + std::to_string(max_n) + " realizes R1 = " +
                                           to_string(r1) + " with relay rate " +
                                           to_string(capacity(params.deadline - params.budget2, params.budget3)));
  }
  out.code = std::move(*best);
  return out;
}

MultiAccessCode construct_cswdf(const NetworkParams& params, int a, int b) {
  params.validate();
  if (a < 0 || b < 0 || a + b == 0) throw Error(ErrorCode::InvalidArgument, "need A, B >= 0 with A + B > 0");
  std::optional<MultiAccessCode> one, two;
  if (a > 0) one = single_user_code(params, 1);
  if (b > 0) two = single_user_code(params, 2);
  const MultiAccessCode& first = one ? *one : *two;
  const MultiAccessCode& second = two ? *two : *one;
  return timeshare(first, second, a, b);
}

}  // namespace streamrelay
