#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "streamrelay/analysis.hpp"
#include "streamrelay/construct.hpp"
#include "streamrelay/error.hpp"
#include "streamrelay/network.hpp"

using namespace streamrelay;

namespace {

Rational Q(std::int64_t a, std::int64_t b = 1) { return make_rational(a, b); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
int selected = 0;  // 0 runs every criterion

void criterion(int id, const char* name, double limit_seconds, const std::function<Outcome()>& body) {
  if (selected != 0 && selected != id) return;
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0 && secs >= limit_seconds) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(limit_seconds)) + " s limit)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s [%.2fs] %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string str(const Rational& r) { return to_string(r); }

// Time-invariant diagonal codes: a parity only involves its own diagonal,
// which spans at most max_span slots, so every placement of erasures relative
// to one full diagonal and its deadlines fits in this window.
int oracle_horizon(const P2PStreamingCode& c) { return c.max_delay() + c.max_span() + 1; }

bool beyond_budget_breaks(const P2PStreamingCode& c) {
  const int horizon = oracle_horizon(c) + c.max_span();
  std::mt19937_64 rng(7);
  std::vector<Message> msgs(static_cast<std::size_t>(horizon), Message(static_cast<std::size_t>(c.k())));
  std::uniform_int_distribution<int> d(0, static_cast<int>(c.field_config().size()) - 1);
  for (auto& m : msgs) {
    for (auto& s : m) s = static_cast<Symbol>(d(rng));
  }
  // A burst of N+1 slots starting where diagonal 0 starts.
  ErasureSet burst;
  for (int s = 0; s <= c.erasures(); ++s) burst.push_back(s);
  const auto recv = apply_channel(encode_stream(c, msgs), burst);
  for (int t = 0; t <= c.erasures(); ++t) {
    for (int j = 0; j < c.k(); ++j) {
      if (t + c.declared_delay(j) >= horizon) continue;
      const auto got = decode_symbol(c, recv, t, j);
      if (!got || *got != msgs[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)]) return true;
    }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) selected = std::atoi(argv[1]);
  if (selected < 0 || selected > 10) {
    std::fprintf(stderr, "usage: %s [criterion 1-10]\n", argv[0]);
    return 2;
  }

  criterion(1, "worked example (1,1,1,2) FB-SWDF", 1.0, [&] {
    const NetworkParams p{1, 1, 1, 2};
    const auto code = construct_fb(p, Q(1, 4)).code;
    const auto rep = verify_network(code, p, 10);
    std::ostringstream d;
    d << "R1=" << str(code.rate1()) << " R2=" << str(code.rate2()) << " sum bound " << str(upper_bound(p).sum_max)
      << ", " << rep.patterns_checked << " patterns, " << rep.failure_count << " failures";
    const bool ok = code.rate1() == Q(1, 4) && code.rate2() == Q(1, 4) &&
                    code.rate1() + code.rate2() == upper_bound(p).sum_max && rep.exhaustive && rep.ok();
    return Outcome{ok, d.str()};
  });

  criterion(2, "table code (3,2,1,6) R1=1/2", 120.0, [&] {
    const NetworkParams p{3, 2, 1, 6};
    const auto code = construct_fb(p, Q(1, 2)).code;
    const auto ub = upper_bound(p);
    const GroupedSpectrum s1{GroupOrder::Descending, {{5, 5}, {4, 5}, {3, 5}}};
    const GroupedSpectrum s3{GroupOrder::Descending, {{4, 6}, {3, 6}, {2, 6}, {1, 6}}};
    bool pairs_ok = true;
    for (const auto& [a, b] : std::vector<std::pair<int, int>>{{5, 1}, {4, 2}, {3, 3}, {2, 4}}) {
      pairs_ok = pairs_ok && code.assignment.count(a, b, 1) + code.assignment.count(a, b, 2) == 6;
    }
    const VerifyOptions opts{VerifyMode::Sampled, 1, 100000};
    const auto rep = verify_network(code, p, 20, opts);
    std::ostringstream d;
    d << "n=" << code.n() << " k1=" << code.k1() << " k2=" << code.k2() << " R2=" << str(code.rate2())
      << " bound " << str(std::min(ub.r2_max, ub.sum_max - Q(1, 2))) << ", pairs " << (pairs_ok ? "ok" : "wrong")
      << ", " << rep.patterns_checked << " patterns, " << rep.failure_count << " failures";
    const bool ok = code.n() == 30 && code.k1() == 15 && code.k2() == 9 && code.rate2() == Q(3, 10) &&
                    code.rate2() == std::min(ub.r2_max, ub.sum_max - Q(1, 2)) && code.src1.spectrum() == s1 &&
                    code.relay.spectrum() == s3 && pairs_ok && rep.ok() && rep.patterns_checked >= 100000;
    return Outcome{ok, d.str()};
  });

  criterion(3, "CSWDF best pair at (3,2,1,6) R1=1/2", 0, [] {
    const auto pt = cswdf_best_r2({3, 2, 1, 6}, Q(1, 2));
    std::ostringstream d;
    d << "A=" << pt.hint.a.value_or(-1) << " B=" << pt.hint.b.value_or(-1) << " R2=" << str(pt.r2);
    return Outcome{pt.hint.a == 5 && pt.hint.b == 2 && pt.r2 == Q(4, 15), d.str()};
  });

  criterion(4, "CMWDF degenerate point at (3,2,1,6) R1=1/2", 0, [] {
    const auto pt = cmwdf_best_r2({3, 2, 1, 6}, Q(1, 2));
    return Outcome{pt.r2 == 0, "R2=" + str(pt.r2)};
  });

  criterion(5, "sum-rate gate", 0, [] {
    const bool a = sumrate_achievable({3, 2, 1, 4}), b = sumrate_achievable({3, 2, 1, 6});
    return Outcome{!a && b, std::string("T=4 ") + (a ? "true" : "false") + ", T=6 " + (b ? "true" : "false")};
  });

  criterion(6, "regime classification", 0, [] {
    const std::vector<std::pair<NetworkParams, Regime>> cases{{{9, 8, 1, 12}, Regime::StrongSourceRelay},
                                                              {{20, 9, 1, 27}, Regime::WeakSourceRelay},
                                                              {{19, 14, 3, 30}, Regime::WeakSourceRelay},
                                                              {{3, 1, 2, 5}, Regime::StrongRelayDestination},
                                                              {{3, 2, 1, 6}, Regime::WeakRelayDestination}};
    bool ok = true;
    std::string d;
    for (const auto& [p, want] : cases) {
      const auto got = classify_regime(p);
      ok = ok && got == want;
      d += std::string(to_string(got)) + " ";
    }
    return Outcome{ok, d};
  });

  criterion(7, "weak source-relay full-region condition", 0, [] {
    const bool a = regime_achievability({20, 9, 1, 27}).full_region;
    const bool b = regime_achievability({19, 14, 3, 30}).full_region;
    return Outcome{a && !b, std::string("(20,9,1,27) ") + (a ? "full" : "partial") + ", (19,14,3,30) " +
                                (b ? "full" : "partial")};
  });

  criterion(8, "strong source-relay corner (9,8,1,12)", 0, [&] {
    const NetworkParams p{9, 8, 1, 12};
    const auto pt = cswdf_rate(p, 1, 1);
    const auto code = construct_cswdf(p, 1, 1);
    const auto rep = verify_network(code, p, code.default_horizon(), {VerifyMode::Sampled, 1, 10000});
    std::ostringstream d;
    d << "(" << str(pt.r1) << ", " << str(pt.r2) << "), code (" << str(code.rate1()) << ", " << str(code.rate2())
      << "), " << rep.patterns_checked << " patterns, " << rep.failure_count << " failures";
    const bool ok = pt.r1 == Q(1, 4) && pt.r2 == Q(1, 3) && code.rate1() == pt.r1 && code.rate2() == pt.r2 &&
                    rep.ok() && rep.patterns_checked >= 10000;
    return Outcome{ok, d.str()};
  });

  criterion(9, "region sweeps: bound, OB dominance", 0, [] {
    const std::vector<NetworkParams> sets{{3, 2, 1, 4},   {3, 2, 1, 6},    {9, 8, 1, 12},
                                          {20, 9, 1, 27}, {19, 14, 3, 30}, {3, 1, 2, 5}};
    const Rational tol = Q(1, 100000);
    bool ok = true;
    std::ostringstream d;
    int closed_form_gaps = 0;
    for (const auto& p : sets) {
      const auto start = std::chrono::steady_clock::now();
      const auto r = region(p, all_schemes(), {.grid = 101});
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::map<std::string, std::map<Rational, Rational>> curves;
      int outside = 0;
      for (const auto& c : r.curves) {
        for (const auto& pt : c.points) {
          curves[c.scheme][pt.r1] = pt.r2;
          if (!r.bound.contains(pt.r1, pt.r2)) ++outside;
        }
      }
      int below_fb = 0, below_cs = 0;
      for (const auto& [r1, ob] : curves["ob"]) {
        if (curves["fb"].count(r1) && ob < curves["fb"][r1] - tol) ++below_fb;
        if (curves["cs"].count(r1) && ob < curves["cs"][r1] - tol) ++below_cs;
        if (ob < fb_swdf_r2(p, r1) - tol) ++closed_form_gaps;
      }
      const bool set_ok = secs < 30 && outside == 0 && below_fb == 0 && below_cs == 0 && curves["ob"].size() == 101;
      ok = ok && set_ok;
      d << "(" << p.budget1 << "," << p.budget2 << "," << p.budget3 << "," << p.deadline << ") " << secs << "s";
      if (!set_ok) d << " outside=" << outside << " ob<fb=" << below_fb << " ob<cs=" << below_cs;
      d << "; ";
    }
    if (closed_form_gaps > 0) {
      d << "note: " << closed_form_gaps
        << " grid points where the fixed-bottleneck closed form is not realizable (user 1 overflows the relay"
           " budget) are compared against the realized FB curve";
    }
    return Outcome{ok, d.str()};
  });

  criterion(10, "exhaustive oracle on constructed codes (n <= 40)", 0, [&] {
    std::vector<std::pair<std::string, P2PStreamingCode>> codes;
    auto keep = [&](const std::string& name, const MultiAccessCode& c) {
      codes.emplace_back(name + "/src1", c.src1);
      if (c.k2() > 0) codes.emplace_back(name + "/src2", c.src2);
      codes.emplace_back(name + "/relay", c.relay);
    };
    keep("fb(1,1,1,2)", construct_fb({1, 1, 1, 2}, Q(1, 4)).code);
    keep("fb(3,2,1,6)", construct_fb({3, 2, 1, 6}, Q(1, 2)).code);
    keep("cs(3,2,1,6)", construct_cswdf({3, 2, 1, 6}, 5, 2));
    keep("cs(9,8,1,12)", construct_cswdf({9, 8, 1, 12}, 1, 1));
    for (int n = 2; n <= 12; ++n) {
      for (int N = 1; N <= 3; ++N) {
        for (int k = 1; k < n; ++k) {
          if ((n - k) % N == 0) codes.emplace_back("spectrum", build_spectrum_code(n, k, N));
        }
      }
    }
    int checked = 0, bad = 0, unbroken = 0;
    std::uint64_t patterns = 0;
    std::string names;
    for (const auto& [name, c] : codes) {
      if (c.n() > 40 || c.k() == 0) continue;
      const auto rep = verify_p2p(c, c.erasures(), oracle_horizon(c));
      ++checked;
      patterns += rep.patterns_checked;
      if (!rep.ok() || !rep.exhaustive) {
        ++bad;
        names += " " + name;
      }
      if (!beyond_budget_breaks(c)) {
        ++unbroken;
        names += " " + name + "(N+1 survived)";
      }
    }
    std::ostringstream d;
    d << checked << " codes, " << patterns << " patterns, " << bad << " with failures, " << unbroken
      << " surviving N+1" << names;
    return Outcome{bad == 0 && unbroken == 0 && checked > 0, d.str()};
  });

  return failures == 0 ? 0 : 1;
}
