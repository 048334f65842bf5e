#include "streamrelay/descriptor.hpp"

#include <cstdio>
#include <string>

#include "json.hpp"
#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

using nlohmann::json;

std::string hex_entries(const Matrix& m, unsigned bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const unsigned digits = bits / 4;
  std::string out;
  out.reserve(m.data.size() * digits);
  for (Symbol v : m.data) {
    for (unsigned d = digits; d-- > 0;) out += kDigits[(v >> (4 * d)) & 0xF];
  }
  return out;
}

Matrix parse_hex(const std::string& text, std::size_t rows, std::size_t cols, unsigned bits) {
  const std::size_t digits = bits / 4;
  if (text.size() != rows * cols * digits) throw Error(ErrorCode::Parse, "parity matrix has the wrong length");
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    unsigned v = 0;
    for (std::size_t d = 0; d < digits; ++d) {
      const char c = text[i * digits + d];
      unsigned nibble;
      if (c >= '0' && c <= '9') {
        nibble = static_cast<unsigned>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        nibble = static_cast<unsigned>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        nibble = static_cast<unsigned>(c - 'A' + 10);
      } else {
        throw Error(ErrorCode::Parse, "parity matrix is not hex");
      }
      v = v * 16 + nibble;
    }
    m.data[i] = static_cast<Symbol>(v);
  }
  return m;
}

json p2p_json(const P2PStreamingCode& code) {
  json j;
  j["n"] = code.n();
  j["k"] = code.k();
  j["N"] = code.erasures();
  char poly[16];
  std::snprintf(poly, sizeof poly, "0x%x", static_cast<unsigned>(code.field_config().reduction_polynomial));
  j["field"] = {{"m", code.field_config().bits}, {"poly", poly}};
  json comps = json::array();
  for (const auto& c : code.components()) {
    comps.push_back({{"N", c.erasures}, {"m", c.width}, {"parity_matrix", hex_entries(c.generator.parity, code.field_config().bits)}});
  }
  j["components"] = comps;
  j["padding"] = code.padding();
  json map = json::array();
  for (const auto& s : code.symbol_map()) map.push_back({s.component, s.index});
  j["symbol_map"] = map;
  json spec = json::array();
  for (const auto& g : code.spectrum().groups) spec.push_back({g.delay, g.count});
  j["spectrum"] = spec;
  j["declared_delays"] = code.declared_delays();
  return j;
}

P2PStreamingCode p2p_parse(const json& j) {
  const unsigned bits = j.at("field").at("m").get<unsigned>();
  const std::string poly_text = j.at("field").at("poly").get<std::string>();
  const auto poly = static_cast<std::uint32_t>(std::stoul(poly_text, nullptr, 0));
  const FieldConfig field{bits, poly};
  if (!(field == FieldConfig::gf256()) && !(field == FieldConfig::gf65536())) {
    throw Error(ErrorCode::Parse, "unsupported field");
  }
  const int erasures = j.at("N").get<int>();
  std::vector<DimdsComponent> comps;
  for (const auto& c : j.at("components")) {
    DimdsComponent d;
    d.erasures = c.at("N").get<int>();
    d.width = c.at("m").get<int>();
    if (d.erasures < 0 || d.width < 1) throw Error(ErrorCode::Parse, "bad component shape");
    d.generator.message_dim = static_cast<std::size_t>(d.width);
    d.generator.parity = parse_hex(c.at("parity_matrix").get<std::string>(), static_cast<std::size_t>(d.erasures),
                                   static_cast<std::size_t>(d.width), bits);
    comps.push_back(std::move(d));
  }
  std::vector<SymbolSlot> map;
  for (const auto& s : j.at("symbol_map")) {
    const auto pair = s.get<std::vector<long long>>();
    if (pair.size() != 2 || pair[0] < 0) throw Error(ErrorCode::Parse, "symbol map entries are [component, index]");
    map.push_back({static_cast<std::size_t>(pair[0]), static_cast<int>(pair[1])});
  }
  auto declared = j.at("declared_delays").get<std::vector<int>>();
  P2PStreamingCode code(field, erasures, std::move(comps), j.value("padding", 0), std::move(map), std::move(declared));
  if (code.n() != j.at("n").get<int>() || code.k() != j.at("k").get<int>()) {
    throw Error(ErrorCode::Parse, "n or k disagrees with the components");
  }
  if (j.contains("spectrum")) {
    GroupedSpectrum stated;
    for (const auto& g : j.at("spectrum")) {
      const auto pair = g.get<std::vector<long long>>();
      if (pair.size() != 2) throw Error(ErrorCode::Parse, "spectrum entries are [delay, count]");
      stated.groups.push_back({static_cast<int>(pair[0]), pair[1]});
    }
    if (!(stated == code.spectrum())) throw Error(ErrorCode::Parse, "spectrum disagrees with declared delays");
  }
  return code;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::Parse, e.what());
  }
}

json pattern_json(const ErasurePattern& p) { return {{"link1", p.link1}, {"link2", p.link2}, {"link3", p.link3}}; }

}  // namespace

std::string p2p_to_json(const P2PStreamingCode& code, int indent) { return p2p_json(code).dump(indent); }

P2PStreamingCode p2p_from_json(std::string_view text) {
  return guarded([&] { return p2p_parse(json::parse(text)); });
}

std::string code_to_json(const MultiAccessCode& code, int indent) {
  json j;
  j["params"] = {{"N1", code.params.budget1}, {"N2", code.params.budget2}, {"N3", code.params.budget3},
                 {"T", code.params.deadline}};
  j["n"] = code.n();
  j["k1"] = code.k1();
  j["k2"] = code.k2();
  j["rates"] = {{"R1", to_string(code.rate1())}, {"R2", to_string(code.rate2())}};
  j["src1"] = p2p_json(code.src1);
  j["src2"] = p2p_json(code.src2);
  j["relay"] = p2p_json(code.relay);
  json pairs = json::array();
  for (const auto& p : code.assignment.pairs) {
    pairs.push_back({{"source", p.source}, {"source_index", p.source_index}, {"source_delay", p.source_delay},
                     {"relay_index", p.relay_index}, {"relay_delay", p.relay_delay}});
  }
  j["assignment"] = pairs;
  json sched = json::array();
  for (const auto& s : code.schedule) {
    sched.push_back({{"relay_index", s.relay_index}, {"source", s.source}, {"source_index", s.source_index},
                     {"lag", s.lag}});
  }
  j["schedule"] = sched;
  return j.dump(indent);
}

MultiAccessCode code_from_json(std::string_view text) {
  return guarded([&] {
    const json j = json::parse(text);
    const auto& pj = j.at("params");
    NetworkParams params{pj.at("N1").get<int>(), pj.at("N2").get<int>(), pj.at("N3").get<int>(), pj.at("T").get<int>()};
    MatchingAssignment a;
    for (const auto& p : j.at("assignment")) {
      a.pairs.push_back({p.at("source").get<int>(), p.at("source_index").get<std::size_t>(),
                         p.at("source_delay").get<int>(), p.at("relay_index").get<std::size_t>(),
                         p.at("relay_delay").get<int>()});
    }
    MultiAccessCode code = compose_with_assignment(p2p_parse(j.at("src1")), p2p_parse(j.at("src2")),
                                                   p2p_parse(j.at("relay")), params, std::move(a));
    if (j.contains("schedule")) {
      std::vector<ScheduleEntry> stated;
      for (const auto& s : j.at("schedule")) {
        stated.push_back({s.at("relay_index").get<int>(), s.at("source").get<int>(), s.at("source_index").get<int>(),
                          s.at("lag").get<int>()});
      }
      if (stated != code.schedule) throw Error(ErrorCode::Parse, "schedule disagrees with the assignment");
    }
    return code;
  });
}

std::string report_to_json(const NetworkReport& report, int indent) {
  json j;
  j["patterns_checked"] = report.patterns_checked;
  j["failure_count"] = report.failure_count;
  j["exhaustive"] = report.exhaustive;
  j["factorized"] = report.factorized;
  json fails = json::array();
  for (const auto& f : report.failures) {
    fails.push_back({{"pattern", pattern_json(f.pattern)}, {"user", f.user}, {"t", f.t}, {"j", f.j}});
  }
  j["failures"] = fails;
  j["worst_margin"] = report.worst_margin;
  return j.dump(indent);
}

}  // namespace streamrelay
