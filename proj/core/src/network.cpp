#include "streamrelay/network.hpp"

#include <algorithm>
#include <limits>
#include <mutex>
#include <random>
#include <string>
#include <tuple>

#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

constexpr std::size_t kStoredFailures = 32;
// Below this many combined patterns exhaustive mode simulates every
// combination instead of checking each link on its own.
constexpr std::uint64_t kJointLimit = 50'000;
constexpr std::uint64_t kBurstProductLimit = 200'000;

std::vector<ScheduleEntry> schedule_from(const MatchingAssignment& assignment, int deadline) {
  std::vector<ScheduleEntry> out;
  out.reserve(assignment.pairs.size());
  for (const auto& p : assignment.pairs) {
    out.push_back({static_cast<int>(p.relay_index), p.source, static_cast<int>(p.source_index),
                   deadline - p.relay_delay});
  }
  std::sort(out.begin(), out.end(),
            [](const ScheduleEntry& a, const ScheduleEntry& b) { return a.relay_index < b.relay_index; });
  return out;
}

MultiAccessCode assemble(P2PStreamingCode src1, P2PStreamingCode src2, P2PStreamingCode relay,
                         const NetworkParams& params, MatchingAssignment assignment) {
  MultiAccessCode code;
  code.params = params;
  code.src1 = std::move(src1);
  code.src2 = std::move(src2);
  code.relay = std::move(relay);
  code.assignment = std::move(assignment);
  code.schedule = schedule_from(code.assignment, params.deadline);
  return code;
}

void check_budgets(const P2PStreamingCode& src1, const P2PStreamingCode& src2, const P2PStreamingCode& relay,
                   const NetworkParams& params) {
  if (src1.erasures() != params.budget1 || src2.erasures() != params.budget2 ||
      relay.erasures() != params.budget3) {
    throw Error(ErrorCode::ParameterMismatch, "code erasure budgets do not match the network parameters");
  }
}

std::vector<Message> random_messages(int slots, int k, std::uint32_t field_size, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> sym(0, field_size - 1);
  std::vector<Message> out(static_cast<std::size_t>(slots), Message(static_cast<std::size_t>(k)));
  for (auto& m : out) {
    for (auto& s : m) s = static_cast<Symbol>(sym(rng));
  }
  return out;
}

// End-to-end run over fixed message streams; the source packets are encoded
// once and reused for every erasure pattern.
class Simulator {
 public:
  Simulator(const MultiAccessCode& code, const std::vector<Message>& m1, const std::vector<Message>& m2, int horizon)
      : code_(code), m1_(m1), m2_(m2), horizon_(horizon) {
    if (m1.size() < static_cast<std::size_t>(horizon) || m2.size() < static_cast<std::size_t>(horizon)) {
      throw Error(ErrorCode::InvalidArgument, "message streams shorter than the horizon");
    }
    sent1_ = encode_stream(code.src1, std::span(m1).first(static_cast<std::size_t>(horizon)));
    sent2_ = encode_stream(code.src2, std::span(m2).first(static_cast<std::size_t>(horizon)));
  }

  std::uint64_t run(const ErasurePattern& pattern, std::vector<NetworkFailure>* failures, SimulationTrace* trace) const {
    const auto h = static_cast<std::size_t>(horizon_);
    const PacketStream got1 = apply_channel(sent1_, pattern.link1);
    const PacketStream got2 = apply_channel(sent2_, pattern.link2);

    auto relay_decode = [&](const P2PStreamingCode& src, const PacketStream& got) {
      std::vector<std::vector<std::optional<Symbol>>> est(h, std::vector<std::optional<Symbol>>(
                                                                 static_cast<std::size_t>(src.k())));
      for (std::size_t t = 0; t < h; ++t) {
        for (int j = 0; j < src.k(); ++j) {
          if (static_cast<int>(t) + src.declared_delay(j) >= horizon_) continue;
          est[t][static_cast<std::size_t>(j)] = decode_symbol(src, got, static_cast<std::int64_t>(t), j);
        }
      }
      return est;
    };
    auto est1 = relay_decode(code_.src1, got1);
    auto est2 = relay_decode(code_.src2, got2);

    std::vector<Message> relay_msgs(h, Message(static_cast<std::size_t>(code_.relay.k()), 0));
    for (const auto& e : code_.schedule) {
      const auto& est = e.source == 1 ? est1 : est2;
      for (std::size_t u = static_cast<std::size_t>(std::max(e.lag, 0)); u < h; ++u) {
        const auto& v = est[u - static_cast<std::size_t>(e.lag)][static_cast<std::size_t>(e.source_index)];
        relay_msgs[u][static_cast<std::size_t>(e.relay_index)] = v.value_or(0);
      }
    }
    PacketStream sent3 = encode_stream(code_.relay, relay_msgs);
    const PacketStream got3 = apply_channel(sent3, pattern.link3);

    if (trace) {
      trace->dest1.assign(h, std::vector<std::optional<Symbol>>(static_cast<std::size_t>(code_.k1())));
      trace->dest2.assign(h, std::vector<std::optional<Symbol>>(static_cast<std::size_t>(code_.k2())));
    }
    std::uint64_t count = 0;
    const int deadline = code_.params.deadline;
    for (const auto& e : code_.schedule) {
      const auto& truth = e.source == 1 ? m1_ : m2_;
      for (int t = 0; t + deadline < horizon_; ++t) {
        const auto v = decode_symbol(code_.relay, got3, t + e.lag, e.relay_index);
        if (trace) {
          auto& dest = e.source == 1 ? trace->dest1 : trace->dest2;
          dest[static_cast<std::size_t>(t)][static_cast<std::size_t>(e.source_index)] = v;
        }
        if (!v || *v != truth[static_cast<std::size_t>(t)][static_cast<std::size_t>(e.source_index)]) {
          ++count;
          if (failures && failures->size() < kStoredFailures) {
            failures->push_back({pattern, e.source, t, e.source_index});
          }
        }
      }
    }
    if (trace) {
      trace->sent1 = sent1_;
      trace->sent2 = sent2_;
      trace->sent3 = std::move(sent3);
      trace->relay1 = std::move(est1);
      trace->relay2 = std::move(est2);
    }
    return count;
  }

 private:
  const MultiAccessCode& code_;
  const std::vector<Message>& m1_;
  const std::vector<Message>& m2_;
  int horizon_;
  PacketStream sent1_;
  PacketStream sent2_;
};

std::vector<ErasureSet> bursts_with_empty(int horizon, int budget) {
  std::vector<ErasureSet> out{ErasureSet{}};
  auto b = burst_patterns(horizon, budget);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

}  // namespace

void NetworkParams::validate() const {
  if (budget2 < 0 || budget3 < 0) throw Error(ErrorCode::InvalidArgument, "erasure budgets must be nonnegative");
  if (budget1 < budget2) {
    throw Error(ErrorCode::InvalidArgument, "N1 = " + std::to_string(budget1) + " must be at least N2 = " +
                                                std::to_string(budget2));
  }
  if (deadline < 1) throw Error(ErrorCode::InvalidArgument, "deadline T must be at least 1");
}

int MultiAccessCode::n() const { return std::max({src1.n(), src2.n(), relay.n()}); }

Rational MultiAccessCode::rate1() const { return n() == 0 ? Rational(0) : make_rational(k1(), n()); }
Rational MultiAccessCode::rate2() const { return n() == 0 ? Rational(0) : make_rational(k2(), n()); }

int MultiAccessCode::worst_margin() const {
  int margin = params.deadline;
  for (const auto& p : assignment.pairs) {
    const auto& src = p.source == 1 ? src1 : src2;
    const int d1 = src.structural_delay(static_cast<int>(p.source_index));
    const int d2 = relay.structural_delay(static_cast<int>(p.relay_index));
    margin = std::min(margin, params.deadline - d1 - d2);
  }
  return margin;
}

int MultiAccessCode::default_horizon() const {
  return 3 * (params.deadline + 1) + std::max({src1.max_span(), src2.max_span(), relay.max_span()});
}

MultiAccessCode compose_swdf(P2PStreamingCode src1, P2PStreamingCode src2, P2PStreamingCode relay,
                             const NetworkParams& params) {
  params.validate();
  check_budgets(src1, src2, relay, params);
  if (relay.k() < src1.k() + src2.k()) {
    throw Error(ErrorCode::RelayCapacityExceeded, "relay carries " + std::to_string(relay.k()) + " symbols but " +
                                                      std::to_string(src1.k() + src2.k()) + " are needed");
  }
  MatchingAssignment a = match_spectra(src1.delays(), src2.delays(), relay.delays(), params.deadline);
  return assemble(std::move(src1), std::move(src2), std::move(relay), params, std::move(a));
}

MultiAccessCode compose_with_assignment(P2PStreamingCode src1, P2PStreamingCode src2, P2PStreamingCode relay,
                                        const NetworkParams& params, MatchingAssignment assignment) {
  params.validate();
  check_budgets(src1, src2, relay, params);
  std::vector<bool> used1(static_cast<std::size_t>(src1.k())), used2(static_cast<std::size_t>(src2.k())),
      used_relay(static_cast<std::size_t>(relay.k()));
  for (const auto& p : assignment.pairs) {
    if (p.source != 1 && p.source != 2) throw Error(ErrorCode::InvalidArgument, "assignment source must be 1 or 2");
    const auto& src = p.source == 1 ? src1 : src2;
    auto& used = p.source == 1 ? used1 : used2;
    if (p.source_index >= used.size() || p.relay_index >= used_relay.size()) {
      throw Error(ErrorCode::InvalidArgument, "assignment index out of range");
    }
    if (used[p.source_index] || used_relay[p.relay_index]) {
      throw Error(ErrorCode::InvalidArgument, "assignment uses a symbol twice");
    }
    used[p.source_index] = true;
    used_relay[p.relay_index] = true;
    if (p.source_delay != src.declared_delay(static_cast<int>(p.source_index)) ||
        p.relay_delay != relay.declared_delay(static_cast<int>(p.relay_index))) {
      throw Error(ErrorCode::InvalidArgument, "assignment delays disagree with the codes");
    }
    if (p.source_delay + p.relay_delay > params.deadline) {
      throw Error(ErrorCode::Infeasible, "assignment pair exceeds the deadline");
    }
  }
  if (std::find(used1.begin(), used1.end(), false) != used1.end() ||
      std::find(used2.begin(), used2.end(), false) != used2.end()) {
    throw Error(ErrorCode::InvalidArgument, "assignment leaves source symbols unmatched");
  }
  return assemble(std::move(src1), std::move(src2), std::move(relay), params, std::move(assignment));
}

SimulationTrace simulate(const MultiAccessCode& code, const std::vector<Message>& messages1,
                         const std::vector<Message>& messages2, const ErasurePattern& pattern, int horizon) {
  SimulationTrace trace;
  const Simulator sim(code, messages1, messages2, horizon);
  sim.run(pattern, &trace.failures, &trace);
  return trace;
}

NetworkReport verify_network(const MultiAccessCode& code, const NetworkParams& budgets, int horizon,
                             const VerifyOptions& opts) {
  NetworkReport report;
  report.worst_margin = code.worst_margin();
  if (horizon <= 0) return report;

  std::mt19937_64 rng(0x5eedULL ^ opts.seed);
  const auto m1 = random_messages(horizon, code.k1(), code.src1.field().size(), rng);
  const auto m2 = random_messages(horizon, code.k2(), code.src2.field().size(), rng);
  const Simulator sim(code, m1, m2, horizon);

  std::vector<ErasurePattern> patterns;
  const std::uint64_t c1 = count_patterns(horizon, budgets.budget1);
  const std::uint64_t c2 = count_patterns(horizon, budgets.budget2);
  const std::uint64_t c3 = count_patterns(horizon, budgets.budget3);
  const std::uint64_t combined = saturating_mul(saturating_mul(c1, c2), c3);

  if (opts.mode == VerifyMode::Exhaustive && combined <= kJointLimit) {
    std::vector<ErasureSet> l1, l2, l3;
    for_each_pattern(horizon, budgets.budget1, [&](const ErasureSet& s) { l1.push_back(s); });
    for_each_pattern(horizon, budgets.budget2, [&](const ErasureSet& s) { l2.push_back(s); });
    for_each_pattern(horizon, budgets.budget3, [&](const ErasureSet& s) { l3.push_back(s); });
    for (const auto& a : l1) {
      for (const auto& b : l2) {
        for (const auto& c : l3) patterns.push_back({a, b, c});
      }
    }
  } else if (opts.mode == VerifyMode::Exhaustive && c1 + c2 + c3 <= kExhaustiveLimit) {
    // Relay decoding sees only the first hop and destination decoding only
    // the second, so checking each link with the others clean covers every
    // combination.
    report.factorized = true;
    for_each_pattern(horizon, budgets.budget1, [&](const ErasureSet& s) { patterns.push_back({s, {}, {}}); });
    for_each_pattern(horizon, budgets.budget2, [&](const ErasureSet& s) {
      if (!s.empty()) patterns.push_back({{}, s, {}});
    });
    for_each_pattern(horizon, budgets.budget3, [&](const ErasureSet& s) {
      if (!s.empty()) patterns.push_back({{}, {}, s});
    });
  } else {
    report.exhaustive = false;
    const auto b1 = bursts_with_empty(horizon, budgets.budget1);
    const auto b2 = bursts_with_empty(horizon, budgets.budget2);
    const auto b3 = bursts_with_empty(horizon, budgets.budget3);
    if (b1.size() * b2.size() * b3.size() <= kBurstProductLimit) {
      for (const auto& a : b1) {
        for (const auto& b : b2) {
          for (const auto& c : b3) patterns.push_back({a, b, c});
        }
      }
    } else {
      for (const auto& a : b1) {
        for (const auto& b : b2) patterns.push_back({a, b, {}});
        for (const auto& c : b3) patterns.push_back({a, {}, c});
      }
      for (const auto& b : b2) {
        for (const auto& c : b3) patterns.push_back({{}, b, c});
      }
    }
    std::mt19937_64 prng(opts.seed);
    for (std::uint64_t i = 0; i < opts.count; ++i) {
      ErasurePattern p;
      p.link1 = random_pattern(horizon, budgets.budget1, prng);
      p.link2 = random_pattern(horizon, budgets.budget2, prng);
      p.link3 = random_pattern(horizon, budgets.budget3, prng);
      patterns.push_back(std::move(p));
    }
  }

  std::mutex mu;
  const unsigned workers = worker_count();
  run_workers(workers, [&](unsigned w) {
    std::uint64_t failures = 0;
    std::vector<NetworkFailure> stored;
    for (std::size_t i = w; i < patterns.size(); i += workers) failures += sim.run(patterns[i], &stored, nullptr);
    std::lock_guard lock(mu);
    report.failure_count += failures;
    report.failures.insert(report.failures.end(), stored.begin(), stored.end());
  });
  report.patterns_checked = report.factorized ? combined : patterns.size();
  std::sort(report.failures.begin(), report.failures.end(), [](const NetworkFailure& a, const NetworkFailure& b) {
    return std::tie(a.pattern, a.user, a.t, a.j) < std::tie(b.pattern, b.user, b.t, b.j);
  });
  if (report.failures.size() > kStoredFailures) report.failures.resize(kStoredFailures);
  return report;
}

P2PStreamingCode concatenate(const std::vector<const P2PStreamingCode*>& codes, int erasures) {
  FieldConfig field = FieldConfig::gf256();
  for (const auto* c : codes) {
    if (c->erasures() != erasures) throw Error(ErrorCode::ParameterMismatch, "erasure budgets differ");
    if (c->field_config().bits > field.bits) field = c->field_config();
  }
  std::vector<DimdsComponent> comps;
  std::vector<SymbolSlot> map;
  std::vector<int> declared;
  int padding = 0;
  for (const auto* c : codes) {
    const std::size_t base = comps.size();
    for (const auto& comp : c->components()) {
      comps.push_back(c->field_config() == field ? comp : build_dimds(comp.erasures, comp.width, field));
    }
    for (const auto& s : c->symbol_map()) map.push_back({base + s.component, s.index});
    declared.insert(declared.end(), c->declared_delays().begin(), c->declared_delays().end());
    padding += c->padding();
  }
  return P2PStreamingCode(field, erasures, std::move(comps), padding, std::move(map), std::move(declared));
}

MultiAccessCode timeshare(const MultiAccessCode& code_a, const MultiAccessCode& code_b, int a, int b) {
  if (!(code_a.params == code_b.params)) {
    throw Error(ErrorCode::ParameterMismatch, "time-shared codes must share (N1, N2, N3, T)");
  }
  if (a < 0 || b < 0) throw Error(ErrorCode::InvalidArgument, "copy counts must be nonnegative");
  std::vector<const MultiAccessCode*> parts;
  for (int i = 0; i < a; ++i) parts.push_back(&code_a);
  for (int i = 0; i < b; ++i) parts.push_back(&code_b);

  std::vector<const P2PStreamingCode*> s1, s2, r;
  MatchingAssignment assignment;
  std::size_t off1 = 0, off2 = 0, offr = 0;
  for (const auto* p : parts) {
    s1.push_back(&p->src1);
    s2.push_back(&p->src2);
    r.push_back(&p->relay);
    for (auto pair : p->assignment.pairs) {
      pair.source_index += pair.source == 1 ? off1 : off2;
      pair.relay_index += offr;
      assignment.pairs.push_back(pair);
    }
    off1 += static_cast<std::size_t>(p->k1());
    off2 += static_cast<std::size_t>(p->k2());
    offr += static_cast<std::size_t>(p->relay.k());
  }
  const NetworkParams& params = code_a.params;
  return assemble(concatenate(s1, params.budget1), concatenate(s2, params.budget2), concatenate(r, params.budget3),
                  params, std::move(assignment));
}

MultiAccessCode single_user_code(const NetworkParams& params, int user) {
  params.validate();
  if (user != 1 && user != 2) throw Error(ErrorCode::InvalidArgument, "user must be 1 or 2");
  const int own = user == 1 ? params.budget1 : params.budget2;
  const int other = user == 1 ? params.budget2 : params.budget1;
  const int width = params.deadline + 1 - own - params.budget3;
  if (width <= 0) {
    throw Error(ErrorCode::DegenerateSplit, "T + 1 - N" + std::to_string(user) + " - N3 must be positive");
  }
  const FieldConfig field = FieldConfig::for_blocklength(static_cast<std::size_t>(std::max(own, params.budget3) + width));
  auto single = [&](int erasures) {
    std::vector<SymbolSlot> map;
    std::vector<int> declared;
    DimdsComponent comp = build_dimds(erasures, width, field);
    for (int p = 0; p < width; ++p) {
      map.push_back({0, p});
      declared.push_back(comp.structural_delay(p));
    }
    return P2PStreamingCode(field, erasures, {std::move(comp)}, 0, std::move(map), std::move(declared));
  };
  P2PStreamingCode src = single(own);
  P2PStreamingCode empty(field, other, {}, 0, {}, {});
  P2PStreamingCode relay = single(params.budget3);
  if (user == 1) return compose_swdf(std::move(src), std::move(empty), std::move(relay), params);
  return compose_swdf(std::move(empty), std::move(src), std::move(relay), params);
}

}  // namespace streamrelay
