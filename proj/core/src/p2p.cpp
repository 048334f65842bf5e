#include "streamrelay/p2p.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <string>
#include <tuple>

#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

constexpr std::size_t kStoredFailures = 32;

FieldConfig pick_field(std::optional<FieldConfig> cfg, int blocklength) {
  const FieldConfig f = cfg ? *cfg : FieldConfig::for_blocklength(static_cast<std::size_t>(blocklength));
  if (static_cast<std::uint32_t>(blocklength) > f.size()) {
    throw Error(ErrorCode::FieldTooSmall, "component blocklength " + std::to_string(blocklength) +
                                              " exceeds field size " + std::to_string(f.size()));
  }
  return f;
}

// Calls get(time, message_index) for every message symbol the packet at
// time t depends on and writes the packet.
template <class Get>
void fill_packet(const P2PStreamingCode& code, std::int64_t t, std::span<Symbol> out, Get&& get) {
  const GaloisField& f = code.field();
  for (std::size_t c = 0; c < code.components().size(); ++c) {
    const auto& comp = code.components()[c];
    const int off = code.packet_offset(c);
    const int m = comp.width;
    for (int p = 0; p < m; ++p) out[static_cast<std::size_t>(off + p)] = get(t, code.message_index(c, p));
    for (int i = 0; i < comp.erasures; ++i) {
      const std::int64_t d = t - m - i;
      Symbol acc = 0;
      const auto row = comp.generator.parity.row(static_cast<std::size_t>(i));
      for (int q = 0; q < m; ++q) {
        if (d + q < 0) continue;
        acc = GaloisField::add(acc, f.mul(row[static_cast<std::size_t>(q)], get(d + q, code.message_index(c, q))));
      }
      out[static_cast<std::size_t>(off + m + i)] = acc;
    }
  }
  for (int i = 0; i < code.padding(); ++i) out[out.size() - 1 - static_cast<std::size_t>(i)] = 0;
}

}  // namespace

DimdsComponent build_dimds(int erasures, int width, const FieldConfig& cfg) {
  if (erasures < 0 || width < 1) {
    throw Error(ErrorCode::InvalidArgument, "component needs N >= 0 and m >= 1");
  }
  const GaloisField field(pick_field(cfg, erasures + width));
  DimdsComponent c;
  c.erasures = erasures;
  c.width = width;
  c.generator = build_mds_generator(static_cast<std::size_t>(width), static_cast<std::size_t>(erasures), field);
  return c;
}

P2PStreamingCode::P2PStreamingCode(FieldConfig field, int erasures, std::vector<DimdsComponent> components,
                                   int padding, std::vector<SymbolSlot> symbol_map, std::vector<int> declared_delays)
    : field_(field),
      erasures_(erasures),
      padding_(padding),
      components_(std::move(components)),
      symbol_map_(std::move(symbol_map)),
      declared_(std::move(declared_delays)) {
  if (erasures_ < 0 || padding_ < 0) throw Error(ErrorCode::InvalidArgument, "negative erasures or padding");
  if (declared_.size() != symbol_map_.size()) {
    throw Error(ErrorCode::InvalidArgument, "declared delays and symbol map differ in length");
  }
  int width = 0;
  offsets_.reserve(components_.size());
  inverse_.reserve(components_.size());
  for (const auto& c : components_) {
    if (c.erasures != erasures_) throw Error(ErrorCode::InvalidArgument, "component erasure budget mismatch");
    if (c.width < 1 || c.generator.message_dim != static_cast<std::size_t>(c.width) ||
        c.generator.parity_count() != static_cast<std::size_t>(c.erasures) ||
        c.generator.parity.cols != static_cast<std::size_t>(c.width)) {
      throw Error(ErrorCode::InvalidArgument, "component generator has the wrong shape");
    }
    if (static_cast<std::uint32_t>(c.blocklength()) > field_.size()) {
      throw Error(ErrorCode::FieldTooSmall, "component blocklength exceeds field size");
    }
    for (Symbol v : c.generator.parity.data) {
      if (v >= field_.size()) throw Error(ErrorCode::InvalidArgument, "parity entry outside the field");
    }
    offsets_.push_back(width);
    width += c.blocklength();
    inverse_.emplace_back(static_cast<std::size_t>(c.width), -1);
  }
  n_ = width + padding_;
  for (std::size_t i = 0; i < symbol_map_.size(); ++i) {
    const auto& s = symbol_map_[i];
    if (s.component >= components_.size() || s.index < 0 || s.index >= components_[s.component].width) {
      throw Error(ErrorCode::InvalidPermutation, "symbol map points outside the components");
    }
    int& slot = inverse_[s.component][static_cast<std::size_t>(s.index)];
    if (slot != -1) throw Error(ErrorCode::InvalidPermutation, "symbol map is not injective");
    slot = static_cast<int>(i);
  }
  for (const auto& inv : inverse_) {
    if (std::find(inv.begin(), inv.end(), -1) != inv.end()) {
      throw Error(ErrorCode::InvalidPermutation, "symbol map does not cover every component position");
    }
  }
  for (int j = 0; j < k(); ++j) {
    if (declared_[static_cast<std::size_t>(j)] < structural_delay(j)) {
      throw Error(ErrorCode::InvalidArgument, "declared delay of symbol " + std::to_string(j) +
                                                  " is below its structural delay");
    }
  }
}

int P2PStreamingCode::structural_delay(int j) const {
  const auto& s = symbol_map_[static_cast<std::size_t>(j)];
  return components_[s.component].structural_delay(s.index);
}

DelaySpectrum P2PStreamingCode::structural_delays() const {
  DelaySpectrum out;
  out.delays.reserve(symbol_map_.size());
  for (int j = 0; j < k(); ++j) out.delays.push_back(structural_delay(j));
  return out;
}

int P2PStreamingCode::max_delay() const {
  return declared_.empty() ? 0 : *std::max_element(declared_.begin(), declared_.end());
}

int P2PStreamingCode::max_span() const {
  int span = 1;
  for (const auto& c : components_) span = std::max(span, c.blocklength());
  return span;
}

P2PStreamingCode build_spectrum_code(std::int64_t n, std::int64_t k, int erasures, std::optional<FieldConfig> cfg) {
  const GroupedSpectrum spec = achievable_spectrum(n, k, erasures);
  if (k == 0) {
    return P2PStreamingCode(cfg.value_or(FieldConfig::gf256()), erasures, {}, static_cast<int>(n), {}, {});
  }
  const int top_width = erasures == 0 ? static_cast<int>(k) : spec.max_delay() + 1 - erasures;
  const FieldConfig field = pick_field(cfg, erasures + top_width);

  std::vector<DimdsComponent> comps;
  int padding = 0;
  if (erasures == 0) {
    comps.push_back(build_dimds(0, static_cast<int>(k), field));
  } else {
    const std::int64_t per_level = (n - k) / erasures;
    const std::int64_t wide = spec.groups.front().count;
    const DimdsComponent big = build_dimds(erasures, top_width, field);
    for (std::int64_t i = 0; i < wide; ++i) comps.push_back(big);
    if (top_width > 1) {
      const DimdsComponent small = build_dimds(erasures, top_width - 1, field);
      for (std::int64_t i = wide; i < per_level; ++i) comps.push_back(small);
    } else {
      padding = static_cast<int>((per_level - wide) * erasures);
    }
  }
  std::vector<SymbolSlot> map;
  std::vector<int> declared;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int p = 0; p < comps[c].width; ++p) {
      map.push_back({c, p});
      declared.push_back(comps[c].structural_delay(p));
    }
  }
  return P2PStreamingCode(field, erasures, std::move(comps), padding, std::move(map), std::move(declared));
}

P2PStreamingCode build_constrained_code(std::int64_t n, int erasures, const DelaySpectrum& target,
                                        std::optional<FieldConfig> cfg) {
  const auto k = static_cast<std::int64_t>(target.size());
  if (k == 0) return P2PStreamingCode(cfg.value_or(FieldConfig::gf256()), erasures, {}, 0, {}, {});
  for (int d : target.delays) {
    if (d < erasures) {
      throw Error(ErrorCode::Infeasible, "target delay " + std::to_string(d) + " is below N = " +
                                             std::to_string(erasures));
    }
  }
  SpectrumConstraint constraint;
  for (const auto& g : group(target).groups) constraint.levels.push_back(g);
  const int violated = first_violated_inequality(n, k, erasures, constraint);
  if (violated >= 0) {
    throw Error(ErrorCode::Infeasible, "max-symbol inequality " + std::to_string(violated) +
                                           " fails for the target spectrum at n = " + std::to_string(n));
  }
  const std::int64_t count = min_components_for_targets(target.delays, erasures);
  if (k + erasures * count > n) {
    throw Error(ErrorCode::Infeasible, "integer construction needs width " + std::to_string(k + erasures * count) +
                                           " > n = " + std::to_string(n));
  }

  std::vector<int> widths;
  if (erasures == 0) {
    widths.push_back(static_cast<int>(k));
  } else {
    const std::int64_t levels = (k + count - 1) / count;
    const std::int64_t wide = k - (levels - 1) * count;
    for (std::int64_t i = 0; i < count; ++i) widths.push_back(static_cast<int>(i < wide ? levels : levels - 1));
  }
  const FieldConfig field = pick_field(cfg, erasures + widths.front());
  std::vector<DimdsComponent> comps;
  for (int w : widths) {
    if (!comps.empty() && comps.back().width == w) {
      comps.push_back(comps.back());
    } else {
      comps.push_back(build_dimds(erasures, w, field));
    }
  }

  struct Slot {
    int delay;
    SymbolSlot where;
  };
  std::vector<Slot> slots;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (int p = 0; p < comps[c].width; ++p) slots.push_back({comps[c].structural_delay(p), {c, p}});
  }
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.delay < b.delay; });
  std::vector<std::size_t> order(target.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return target.delays[a] < target.delays[b]; });

  std::vector<SymbolSlot> map(target.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (slots[i].delay > target.delays[order[i]]) {
      throw Error(ErrorCode::Infeasible, "component layout cannot meet the target spectrum");
    }
    map[order[i]] = slots[i].where;
  }
  return P2PStreamingCode(field, erasures, std::move(comps), 0, std::move(map), target.delays);
}

P2PStreamingCode build_constrained_code(std::int64_t n, int erasures, const GroupedSpectrum& target,
                                        std::optional<FieldConfig> cfg) {
  return build_constrained_code(n, erasures, target.expand(), cfg);
}

std::vector<Symbol> encode_slot(const P2PStreamingCode& code, std::span<const Message> history, std::int64_t t) {
  std::vector<Symbol> out(static_cast<std::size_t>(code.n()), 0);
  fill_packet(code, t, out, [&](std::int64_t tau, int j) -> Symbol {
    if (tau < 0 || tau >= static_cast<std::int64_t>(history.size())) return 0;
    return history[static_cast<std::size_t>(tau)][static_cast<std::size_t>(j)];
  });
  return out;
}

PacketStream encode_stream(const P2PStreamingCode& code, std::span<const Message> history) {
  PacketStream out(static_cast<std::size_t>(code.n()), history.size());
  for (std::size_t t = 0; t < history.size(); ++t) {
    fill_packet(code, static_cast<std::int64_t>(t), out.packet(t), [&](std::int64_t tau, int j) -> Symbol {
      if (tau < 0) return 0;
      return history[static_cast<std::size_t>(tau)][static_cast<std::size_t>(j)];
    });
  }
  return out;
}

Encoder::Encoder(const P2PStreamingCode& code)
    : code_(&code), ring_(static_cast<std::size_t>(code.max_span()), Message(static_cast<std::size_t>(code.k()), 0)) {}

std::vector<Symbol> Encoder::push(const Message& message) {
  if (message.size() != static_cast<std::size_t>(code_->k())) {
    throw Error(ErrorCode::InvalidArgument, "message has the wrong number of symbols");
  }
  const auto size = static_cast<std::int64_t>(ring_.size());
  ring_[static_cast<std::size_t>(time_ % size)] = message;
  std::vector<Symbol> out(static_cast<std::size_t>(code_->n()), 0);
  fill_packet(*code_, time_, out, [&](std::int64_t tau, int j) -> Symbol {
    if (tau < 0) return 0;
    return ring_[static_cast<std::size_t>(tau % size)][static_cast<std::size_t>(j)];
  });
  ++time_;
  return out;
}

std::optional<Symbol> decode_symbol(const P2PStreamingCode& code, const PacketStream& received, std::int64_t t,
                                    int j) {
  const auto slots = static_cast<std::int64_t>(received.slots());
  if (t < 0 || t >= slots || j < 0 || j >= code.k()) return std::nullopt;
  const SymbolSlot where = code.symbol_map()[static_cast<std::size_t>(j)];
  const auto& comp = code.components()[where.component];
  const int off = code.packet_offset(where.component);
  if (!received.erased(static_cast<std::size_t>(t))) {
    return received.packet(static_cast<std::size_t>(t))[static_cast<std::size_t>(off + where.index)];
  }
  const std::int64_t limit = std::min(t + code.declared_delay(j), slots - 1);
  const int m = comp.width;
  const std::int64_t d = t - where.index;
  auto usable = [&](std::int64_t tau) {
    return tau >= 0 && tau <= limit && !received.erased(static_cast<std::size_t>(tau));
  };

  // Diagonal positions: known zero before time 0, known if received, else unknown.
  std::vector<int> unknown_col(static_cast<std::size_t>(m), -1);
  std::vector<Symbol> known(static_cast<std::size_t>(m), 0);
  int unknowns = 0;
  for (int q = 0; q < m; ++q) {
    const std::int64_t tau = d + q;
    if (tau < 0) continue;
    if (usable(tau)) {
      known[static_cast<std::size_t>(q)] = received.packet(static_cast<std::size_t>(tau))[static_cast<std::size_t>(off + q)];
    } else {
      unknown_col[static_cast<std::size_t>(q)] = unknowns++;
    }
  }
  std::vector<int> rows;
  for (int i = 0; i < comp.erasures; ++i) {
    if (usable(d + m + i)) rows.push_back(i);
  }
  if (rows.empty()) return std::nullopt;

  const GaloisField& f = code.field();
  Matrix a(rows.size(), static_cast<std::size_t>(unknowns));
  std::vector<Symbol> rhs(rows.size(), 0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int i = rows[r];
    const auto coeffs = comp.generator.parity.row(static_cast<std::size_t>(i));
    Symbol v = received.packet(static_cast<std::size_t>(d + m + i))[static_cast<std::size_t>(off + m + i)];
    for (int q = 0; q < m; ++q) {
      const Symbol c = coeffs[static_cast<std::size_t>(q)];
      if (unknown_col[static_cast<std::size_t>(q)] >= 0) {
        a.at(r, static_cast<std::size_t>(unknown_col[static_cast<std::size_t>(q)])) = c;
      } else {
        v = GaloisField::sub(v, f.mul(c, known[static_cast<std::size_t>(q)]));
      }
    }
    rhs[r] = v;
  }
  const SolveResult sol = solve_linear_system(a, rhs, f);
  return sol.values[static_cast<std::size_t>(unknown_col[static_cast<std::size_t>(where.index)])];
}

int default_horizon(const P2PStreamingCode& code) { return 3 * (code.max_delay() + 1) + code.max_span(); }

P2PReport verify_p2p(const P2PStreamingCode& code, int erasures, int horizon, const VerifyOptions& opts) {
  P2PReport report;
  if (horizon <= 0 || code.k() == 0) return report;

  std::mt19937_64 rng(0x5eedULL ^ opts.seed);
  std::uniform_int_distribution<unsigned> sym(0, code.field().size() - 1);
  std::vector<Message> messages(static_cast<std::size_t>(horizon), Message(static_cast<std::size_t>(code.k())));
  for (auto& msg : messages) {
    for (auto& s : msg) s = static_cast<Symbol>(sym(rng));
  }
  const PacketStream sent = encode_stream(code, messages);

  std::mutex mu;
  auto check = [&](const ErasureSet& pattern, std::uint64_t& failures, std::vector<P2PFailure>& stored) {
    const PacketStream got = apply_channel(sent, pattern);
    for (int t : pattern) {
      for (int j = 0; j < code.k(); ++j) {
        if (t + code.declared_delay(j) >= horizon) continue;
        const auto v = decode_symbol(code, got, t, j);
        if (!v || *v != messages[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]) {
          ++failures;
          if (stored.size() < kStoredFailures) stored.push_back({pattern, t, j});
        }
      }
    }
  };
  auto merge = [&](std::uint64_t checked, std::uint64_t failures, std::vector<P2PFailure>& stored) {
    std::lock_guard lock(mu);
    report.patterns_checked += checked;
    report.failure_count += failures;
    report.failures.insert(report.failures.end(), stored.begin(), stored.end());
  };

  const unsigned workers = worker_count();
  const std::uint64_t total = count_patterns(horizon, erasures);
  if (opts.mode == VerifyMode::Exhaustive && total <= kExhaustiveLimit) {
    run_workers(workers, [&](unsigned w) {
      std::uint64_t checked = 0;
      std::uint64_t failures = 0;
      std::vector<P2PFailure> stored;
      for_each_pattern(horizon, erasures, [&](const ErasureSet& p) {
        ++checked;
        check(p, failures, stored);
      }, w, workers);
      merge(checked, failures, stored);
    });
  } else {
    report.exhaustive = false;
    std::vector<ErasureSet> patterns = burst_patterns(horizon, erasures);
    std::mt19937_64 prng(opts.seed);
    for (std::uint64_t i = 0; i < opts.count; ++i) patterns.push_back(random_pattern(horizon, erasures, prng));
    run_workers(workers, [&](unsigned w) {
      std::uint64_t checked = 0;
      std::uint64_t failures = 0;
      std::vector<P2PFailure> stored;
      for (std::size_t i = w; i < patterns.size(); i += workers) {
        ++checked;
        check(patterns[i], failures, stored);
      }
      merge(checked, failures, stored);
    });
  }
  std::sort(report.failures.begin(), report.failures.end(), [](const P2PFailure& a, const P2PFailure& b) {
    return std::tie(a.pattern, a.t, a.j) < std::tie(b.pattern, b.t, b.j);
  });
  if (report.failures.size() > kStoredFailures) report.failures.resize(kStoredFailures);
  return report;
}

}  // namespace streamrelay
