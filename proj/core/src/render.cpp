#include "streamrelay/render.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

namespace streamrelay {

namespace {

std::string at_time(std::int64_t offset) {
  if (offset == 0) return "(t)";
  return "(t" + std::to_string(offset) + ")";
}

std::string coeff(Symbol c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "%x", static_cast<unsigned>(c));
  return buf;
}

std::string spectrum_text(const GroupedSpectrum& g) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < g.groups.size(); ++i) {
    if (i) os << ", ";
    os << '(' << g.groups[i].delay << ',' << g.groups[i].count << ')';
  }
  os << ']';
  return os.str();
}

}  // namespace

std::string render_p2p(const P2PStreamingCode& code, const std::string& prefix) {
  std::ostringstream os;
  int row = 0;
  for (std::size_t c = 0; c < code.components().size(); ++c) {
    const auto& comp = code.components()[c];
    os << "  component " << c << ": (" << comp.blocklength() << ',' << comp.width << ") N=" << comp.erasures << '\n';
    for (int p = 0; p < comp.width; ++p) {
      const int j = code.message_index(c, p);
      os << "    x[" << row++ << "]  " << prefix << j << at_time(0) << "   delay " << code.declared_delay(j);
      if (code.declared_delay(j) != code.structural_delay(j)) os << " (decodable at " << code.structural_delay(j) << ')';
      os << '\n';
    }
    for (int i = 0; i < comp.erasures; ++i) {
      os << "    x[" << row++ << "]  ";
      const auto coeffs = comp.generator.parity.row(static_cast<std::size_t>(i));
      for (int q = 0; q < comp.width; ++q) {
        if (q) os << " + ";
        os << coeff(coeffs[static_cast<std::size_t>(q)]) << '*' << prefix << code.message_index(c, q)
           << at_time(q - comp.width - i);
      }
      os << '\n';
    }
  }
  for (int i = 0; i < code.padding(); ++i) os << "    x[" << row++ << "]  0\n";
  return os.str();
}

std::string render_code(const MultiAccessCode& code) {
  std::ostringstream os;
  const auto& p = code.params;
  os << "N1=" << p.budget1 << " N2=" << p.budget2 << " N3=" << p.budget3 << " T=" << p.deadline << '\n';
  os << "n=" << code.n() << " k1=" << code.k1() << " k2=" << code.k2() << " R1=" << to_string(code.rate1())
     << " R2=" << to_string(code.rate2()) << '\n';
  os << "source 1 -> relay   width " << code.src1.n() << "  spectrum " << spectrum_text(code.src1.spectrum()) << '\n';
  os << "source 2 -> relay   width " << code.src2.n() << "  spectrum " << spectrum_text(code.src2.spectrum()) << '\n';
  os << "relay -> dest       width " << code.relay.n() << "  spectrum "
     << spectrum_text(code.relay.spectrum().reordered(GroupOrder::Ascending)) << '\n';

  std::map<std::tuple<int, int, int>, int> cells;
  for (const auto& pr : code.assignment.pairs) ++cells[{pr.source_delay, pr.relay_delay, pr.source}];
  os << "\ndelay pairs (first hop, second hop): user1 user2\n";
  std::map<std::pair<int, int>, std::pair<int, int>> merged;
  for (const auto& [key, count] : cells) {
    auto& slot = merged[{std::get<0>(key), std::get<1>(key)}];
    (std::get<2>(key) == 1 ? slot.first : slot.second) += count;
  }
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    os << "  (" << it->first.first << ',' << it->first.second << "): " << it->second.first << ' ' << it->second.second
       << '\n';
  }

  auto table = [&](const P2PStreamingCode& c, const char* title, const char* prefix) {
    os << '\n' << title << '\n';
    if (c.n() > kRenderWidthLimit) {
      os << "  (width " << c.n() << " > " << kRenderWidthLimit << ", see descriptor)\n";
    } else {
      os << render_p2p(c, prefix);
    }
  };
  table(code.src1, "source 1 packet x1(t):", "a");
  table(code.src2, "source 2 packet x2(t):", "b");
  table(code.relay, "relay packet x3(t):", "r");
  if (!code.schedule.empty()) {
    os << "\nrelay message:\n";
    for (const auto& s : code.schedule) {
      os << "  r" << s.relay_index << "(t) = " << (s.source == 1 ? 'a' : 'b') << s.source_index << "(t-" << s.lag
         << ")\n";
    }
  }
  return os.str();
}

}  // namespace streamrelay
