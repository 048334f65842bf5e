#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "streamrelay/analysis.hpp"
#include "streamrelay/error.hpp"

namespace streamrelay {

namespace {

// (b - a) x (c - a); positive when c lies to the left of a->b.
Rational cross(const RatePair& a, const RatePair& b, const RatePair& c) {
  return (b.first - a.first) * (c.second - a.second) - (b.second - a.second) * (c.first - a.first);
}

std::optional<Rational> envelope_at(const std::vector<RatePair>& hull, const Rational& x) {
  if (hull.empty() || x < hull.front().first || x > hull.back().first) return std::nullopt;
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[i + 1];
    if (x >= a.first && x <= b.first) {
      if (b.first == a.first) return std::max(a.second, b.second);
      return a.second + (b.second - a.second) * (x - a.first) / (b.first - a.first);
    }
  }
  return hull.back().second;
}

RatePoint plain(const Rational& r1, const Rational& r2, const std::string& scheme) {
  RatePoint p;
  p.r1 = r1;
  p.r2 = r2;
  p.scheme = scheme;
  return p;
}

std::string decimal(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", to_double(r));
  return buf;
}

nlohmann::json hint_json(const RealizationHint& h) {
  nlohmann::json j = nlohmann::json::object();
  if (h.n) j["n"] = *h.n;
  if (h.k1) j["k1"] = *h.k1;
  if (h.k2) j["k2"] = *h.k2;
  if (h.relay_rate) j["relay_rate"] = to_string(*h.relay_rate);
  if (h.a) j["A"] = *h.a;
  if (h.b) j["B"] = *h.b;
  if (h.split1) j["split1"] = *h.split1;
  if (h.split2) j["split2"] = *h.split2;
  return j;
}

nlohmann::json pair_json(const RatePair& p) { return nlohmann::json::array({to_string(p.first), to_string(p.second)}); }

}  // namespace

std::vector<std::string> all_schemes() { return {"cm", "cs", "fb", "ob", "ts", "upper"}; }

std::vector<RatePair> concave_envelope(std::vector<RatePair> points) {
  if (points.empty()) return {};
  const std::size_t original = points.size();
  points.emplace_back(0, 0);
  for (std::size_t i = 0; i < original; ++i) {
    points.emplace_back(points[i].first, 0);
    points.emplace_back(0, points[i].second);
  }
  std::sort(points.begin(), points.end(), [](const RatePair& a, const RatePair& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  });
  std::vector<RatePair> top;
  for (const auto& p : points) {
    if (!top.empty() && top.back().first == p.first) continue;
    top.push_back(p);
  }
  std::vector<RatePair> hull;
  for (const auto& p : top) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= 0) hull.pop_back();
    hull.push_back(p);
  }
  return hull;
}

RateRegion region(const NetworkParams& params, const std::vector<std::string>& schemes, const RegionOptions& opts) {
  params.validate();
  if (opts.grid < 2) throw Error(ErrorCode::InvalidArgument, "grid must have at least 2 points");
  const auto known = all_schemes();
  std::set<std::string> wanted;
  for (const auto& s : schemes) {
    if (std::find(known.begin(), known.end(), s) == known.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown scheme '" + s + "'");
    }
    wanted.insert(s);
  }

  RateRegion out;
  out.params = params;
  out.bound = upper_bound(params);
  const Rational r1_max = out.bound.r1_max;
  std::vector<Rational> grid;
  for (int i = 0; i < opts.grid; ++i) grid.push_back(r1_max * i / (opts.grid - 1));

  // Schemes that feed the time-sharing envelope are computed whenever "ts"
  // is requested, even if they are not printed.
  std::set<std::string> compute = wanted;
  if (wanted.count("ts")) compute.insert({"cs", "cm", "ob", "fb"});

  using Eval = std::function<std::optional<RatePoint>(const Rational&)>;
  std::map<std::string, Eval> evals;
  evals["upper"] = [&](const Rational& r1) {
    return std::optional(plain(r1, std::max(Rational(0), std::min(out.bound.r2_max, out.bound.sum_max - r1)), "upper"));
  };
  evals["fb"] = [&](const Rational& r1) -> std::optional<RatePoint> {
    const auto r2 = fb_swdf_realized_r2(params, r1);
    if (!r2) return std::nullopt;
    RatePoint p = plain(r1, *r2, "fb");
    p.hint.relay_rate = out.bound.sum_max;
    return p;
  };
  auto concatenated = [&](auto&& best, const char* name) {
    return [&, best, name](const Rational& r1) -> std::optional<RatePoint> {
      try {
        RatePoint p = best(params, r1, opts.search_bound);
        p.r1 = r1;
        p.scheme = name;
        return p;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Infeasible && e.code() != ErrorCode::DegenerateSplit) throw;
        return std::nullopt;
      }
    };
  };
  evals["cs"] = concatenated(cswdf_best_r2, "cs");
  evals["cm"] = concatenated(cmwdf_best_r2, "cm");
  evals["ob"] = [&](const Rational& r1) {
    return std::optional(ob_swdf(params, r1, 100000, opts.epsilon).point);
  };

  std::map<std::string, std::vector<std::optional<RatePoint>>> results;
  std::vector<std::pair<std::string, std::size_t>> tasks;
  for (const auto& s : compute) {
    if (s == "ts") continue;
    results[s].resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) tasks.emplace_back(s, i);
  }
  const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  run_workers(workers, [&](unsigned w) {
    for (std::size_t t = w; t < tasks.size(); t += workers) {
      const auto& [s, i] = tasks[t];
      results[s][i] = evals[s](grid[i]);
    }
  });

  auto curve_of = [&](const std::string& s) {
    SchemeCurve c;
    c.scheme = s;
    for (const auto& p : results[s]) {
      if (p) c.points.push_back(*p);
    }
    return c;
  };

  for (const auto& s : wanted) {
    if (s == "ts") continue;
    SchemeCurve c = curve_of(s);
    std::vector<RatePair> pts;
    for (const auto& p : c.points) pts.emplace_back(p.r1, p.r2);
    SchemeCurve hull;
    hull.scheme = s;
    for (const auto& v : concave_envelope(pts)) hull.points.push_back(plain(v.first, v.second, s));
    out.curves.push_back(std::move(c));
    out.hulls.push_back(std::move(hull));
  }

  if (wanted.count("ts")) {
    std::vector<RatePair> pts;
    for (const auto& s : {"cs", "cm", "ob"}) {
      for (const auto& p : results[s]) {
        if (p) pts.emplace_back(p->r1, p->r2);
      }
    }
    for (const auto& p : results["fb"]) {
      if (p) pts.emplace_back(p->r1, p->r2);
    }
    for (const auto& c : regime_achievability(params).corners) {
      if (c.scheme == "lower-corner") {
        const auto reached = fb_swdf_realized_r2(params, c.r1);
        if (!reached || *reached < c.r2) continue;
      }
      pts.emplace_back(c.r1, c.r2);
    }
    // Single-user codes reach min(C(T-N3, N_i), C(T-N_i, N3)).
    pts.emplace_back(std::min(out.bound.r1_max, capacity(params.deadline - params.budget1, params.budget3)), 0);
    pts.emplace_back(0, std::min(out.bound.r2_max, out.bound.sum_max));
    const auto hull = concave_envelope(pts);
    SchemeCurve c;
    c.scheme = "ts";
    for (const auto& r1 : grid) {
      if (const auto r2 = envelope_at(hull, r1)) c.points.push_back(plain(r1, *r2, "ts"));
    }
    SchemeCurve h;
    h.scheme = "ts";
    for (const auto& v : hull) h.points.push_back(plain(v.first, v.second, "ts"));
    out.curves.push_back(std::move(c));
    out.hulls.push_back(std::move(h));
  }
  auto by_name = [](const SchemeCurve& a, const SchemeCurve& b) { return a.scheme < b.scheme; };
  std::sort(out.curves.begin(), out.curves.end(), by_name);
  std::sort(out.hulls.begin(), out.hulls.end(), by_name);
  return out;
}

std::string region_csv(const RateRegion& r) {
  std::ostringstream os;
  os << "scheme,R1_num,R1_den,R2_num,R2_den,R1,R2\n";
  for (const auto& c : r.curves) {
    for (const auto& p : c.points) {
      os << c.scheme << ',' << numerator_of(p.r1) << ',' << denominator_of(p.r1) << ',' << numerator_of(p.r2) << ','
         << denominator_of(p.r2) << ',' << decimal(p.r1) << ',' << decimal(p.r2) << '\n';
    }
  }
  return os.str();
}

std::string region_json(const RateRegion& r) {
  nlohmann::json j;
  j["params"] = {{"N1", r.params.budget1}, {"N2", r.params.budget2}, {"N3", r.params.budget3}, {"T", r.params.deadline}};
  nlohmann::json poly = nlohmann::json::array();
  for (const auto& v : r.bound.polygon) poly.push_back(pair_json(v));
  j["upper_bound"] = {{"R1_max", to_string(r.bound.r1_max)},
                      {"R2_max", to_string(r.bound.r2_max)},
                      {"sum_max", to_string(r.bound.sum_max)},
                      {"polygon", poly}};
  j["fb_in_regime"] = fb_in_regime(r.params);
  nlohmann::json schemes = nlohmann::json::object();
  for (const auto& c : r.curves) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points) {
      pts.push_back({{"R1", to_string(p.r1)},
                     {"R2", to_string(p.r2)},
                     {"R1_decimal", to_double(p.r1)},
                     {"R2_decimal", to_double(p.r2)},
                     {"hint", hint_json(p.hint)}});
    }
    schemes[c.scheme]["points"] = pts;
  }
  for (const auto& h : r.hulls) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : h.points) pts.push_back(pair_json({p.r1, p.r2}));
    schemes[h.scheme]["hull"] = pts;
  }
  j["schemes"] = schemes;
  return j.dump(2) + "\n";
}

}  // namespace streamrelay
