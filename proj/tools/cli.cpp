#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "streamrelay/analysis.hpp"
#include "streamrelay/construct.hpp"
#include "streamrelay/descriptor.hpp"
#include "streamrelay/error.hpp"
#include "streamrelay/render.hpp"

namespace streamrelay::cli {

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  NetworkParams params;
  std::string schemes = "cm,cs,fb,ob,ts,upper";
  int grid = 101;
  std::string epsilon = "1/100000";
  std::string out;
  std::string format;
  std::string scheme = "fb";
  std::string r1;
  int a = -1;
  int b = -1;
  int max_n = 240;
  std::string table_out;
  std::string code_path;
  int horizon = 0;
  std::string mode = "exhaustive";
  std::optional<std::uint64_t> seed;
  std::uint64_t count = 100000;
  std::string override_budgets;
  std::string report;
  std::int64_t n = 0;
  std::int64_t k = 0;
  int erasures = 0;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible:
    case ErrorCode::IndivisibleParity:
    case ErrorCode::RelayCapacityExceeded:
    case ErrorCode::FieldTooSmall:
    case ErrorCode::DegenerateSplit:
    case ErrorCode::NotApplicable:
      return kInfeasible;
    default:
      return kUsage;
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f.flush()) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

void add_params(CLI::App* cmd, Config& cfg) {
  cmd->add_option("--n1", cfg.params.budget1, "erasures on the source 1 -> relay link")->required();
  cmd->add_option("--n2", cfg.params.budget2, "erasures on the source 2 -> relay link")->required();
  cmd->add_option("--n3", cfg.params.budget3, "erasures on the relay -> destination link")->required();
  cmd->add_option("-T,--deadline", cfg.params.deadline, "end-to-end decoding deadline in slots")->required();
}

int cmd_classify(const Config& cfg, std::ostream& out) {
  const RegimeEvaluation e = evaluate_regime(cfg.params);
  const Rational both = e.single1 + e.single2;
  out << to_string(e.regime) << '\n';
  out << "C(T-N3,N1) = " << to_string(e.single1) << '\n';
  out << "C(T-N3,N2) = " << to_string(e.single2) << '\n';
  out << "C(T-N2,N3) = " << to_string(e.sum) << '\n';
  out << "C(T-N1,N3) = " << to_string(e.weak_sum) << '\n';
  out << "strong-source-relay:      C(T-N1,N3) >= C(T-N3,N1) + C(T-N3,N2): " << to_string(e.weak_sum) << " >= "
      << to_string(both) << " -> " << (e.strong_source_relay ? "true" : "false") << '\n';
  out << "weak-source-relay:        C(T-N2,N3) >= C(T-N3,N1) + C(T-N3,N2) > C(T-N1,N3): " << to_string(e.sum)
      << " >= " << to_string(both) << " > " << to_string(e.weak_sum) << " -> "
      << (e.weak_source_relay ? "true" : "false") << '\n';
  out << "weak-relay-destination:   C(T-N3,N1) + C(T-N3,N2) >= C(T-N2,N3) >= C(T-N3,N2): " << to_string(both)
      << " >= " << to_string(e.sum) << " >= " << to_string(e.single2) << " -> "
      << (e.weak_relay_destination ? "true" : "false") << '\n';
  out << "strong-relay-destination: C(T-N3,N1) <= C(T-N2,N3) <= C(T-N3,N2): " << to_string(e.single1) << " <= "
      << to_string(e.sum) << " <= " << to_string(e.single2) << " -> "
      << (e.strong_relay_destination ? "true" : "false") << '\n';
  if (e.fallback) out << "note: no inequality holds; reported as strong-relay-destination\n";
  const RegimeReport rep = regime_achievability(cfg.params);
  out << "sum rate reached: " << (rep.sumrate_reached ? "yes" : "no") << '\n';
  out << "full region achievable: " << (rep.full_region ? "yes" : "no") << '\n';
  for (const auto& c : rep.corners) {
    out << "corner " << c.scheme << ": (" << to_string(c.r1) << ", " << to_string(c.r2) << ")\n";
  }
  return kOk;
}

int cmd_region(const Config& cfg, std::ostream& out) {
  RegionOptions opts;
  opts.grid = cfg.grid;
  opts.epsilon = parse_rational(cfg.epsilon);
  std::string format = cfg.format;
  if (format.empty()) format = cfg.out.size() >= 5 && cfg.out.ends_with(".json") ? "json" : "csv";
  if (format != "csv" && format != "json") throw Error(ErrorCode::InvalidArgument, "format must be csv or json");
  const RateRegion r = region(cfg.params, split(cfg.schemes, ','), opts);
  const std::string text = format == "csv" ? region_csv(r) : region_json(r);
  if (cfg.out.empty()) {
    out << text;
  } else {
    write_file(cfg.out, text);
  }
  return kOk;
}

int cmd_construct(const Config& cfg, std::ostream& out, std::ostream& err) {
  MultiAccessCode code;
  if (cfg.scheme == "fb") {
    if (cfg.r1.empty()) throw Error(ErrorCode::InvalidArgument, "--r1 is required for --scheme fb");
    const FbConstruction fb = construct_fb(cfg.params, parse_rational(cfg.r1), cfg.max_n);
    if (!fb.reached_target) {
      err << "warning: best code found has R2 = " << to_string(fb.code.rate2()) << ", below the closed-form "
          << to_string(fb.target_r2) << '\n';
    }
    code = fb.code;
  } else if (cfg.scheme == "cs") {
    if (cfg.a < 0 || cfg.b < 0) throw Error(ErrorCode::InvalidArgument, "--a and --b are required for --scheme cs");
    code = construct_cswdf(cfg.params, cfg.a, cfg.b);
  } else {
    throw Error(ErrorCode::InvalidArgument, "scheme must be fb or cs");
  }
  const std::string descriptor = code_to_json(code) + "\n";
  const bool small = code.n() <= kRenderWidthLimit;
  if (cfg.out.empty()) {
    out << descriptor;
  } else {
    write_file(cfg.out, descriptor);
    out << "n=" << code.n() << " k1=" << code.k1() << " k2=" << code.k2() << " R1=" << to_string(code.rate1())
        << " R2=" << to_string(code.rate2()) << '\n';
  }
  if (!cfg.table_out.empty()) {
    write_file(cfg.table_out, render_code(code));
  } else if (!cfg.out.empty() && small) {
    out << '\n' << render_code(code);
  }
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  const MultiAccessCode code = code_from_json(read_file(cfg.code_path));
  NetworkParams budgets = code.params;
  if (!cfg.override_budgets.empty()) {
    const auto parts = split(cfg.override_budgets, ',');
    if (parts.size() != 3) throw Error(ErrorCode::InvalidArgument, "--override-budgets expects N1,N2,N3");
    try {
      budgets.budget1 = std::stoi(parts[0]);
      budgets.budget2 = std::stoi(parts[1]);
      budgets.budget3 = std::stoi(parts[2]);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "--override-budgets expects three integers");
    }
    if (budgets.budget1 < 0 || budgets.budget2 < 0 || budgets.budget3 < 0) {
      throw Error(ErrorCode::InvalidArgument, "budgets must be nonnegative");
    }
  }
  VerifyOptions opts;
  if (cfg.mode == "exhaustive") {
    opts.mode = VerifyMode::Exhaustive;
  } else if (cfg.mode == "sampled") {
    if (!cfg.seed) throw Error(ErrorCode::InvalidArgument, "sampled mode needs an explicit --seed");
    opts.mode = VerifyMode::Sampled;
  } else {
    throw Error(ErrorCode::InvalidArgument, "mode must be exhaustive or sampled");
  }
  opts.seed = cfg.seed.value_or(1);
  opts.count = cfg.count;
  const int horizon = cfg.horizon > 0 ? cfg.horizon : code.default_horizon();
  const NetworkReport report = verify_network(code, budgets, horizon, opts);
  const std::string json = report_to_json(report) + "\n";
  if (!cfg.report.empty()) write_file(cfg.report, json);
  out << "patterns checked: " << report.patterns_checked << (report.exhaustive ? " (exhaustive" : " (sampled")
      << (report.factorized ? ", per link)" : ")") << '\n';
  out << "failures: " << report.failure_count << '\n';
  out << "worst margin: " << report.worst_margin << '\n';
  if (cfg.report.empty()) out << json;
  return report.ok() ? kOk : kVerificationFailed;
}

int cmd_spectrum(const Config& cfg, std::ostream& out) {
  const GroupedSpectrum g = achievable_spectrum(cfg.n, cfg.k, cfg.erasures);
  for (const auto& grp : g.groups) out << grp.delay << ' ' << grp.count << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config cfg;
  CLI::App app{"Streaming codes for the two-source relay network"};
  app.require_subcommand(1);

  auto* classify = app.add_subcommand("classify", "print the bottleneck regime and its inequalities");
  add_params(classify, cfg);

  auto* reg = app.add_subcommand("region", "export achievable rate regions");
  add_params(reg, cfg);
  reg->add_option("--schemes", cfg.schemes, "comma list of upper,fb,cs,cm,ob,ts");
  reg->add_option("--grid", cfg.grid, "number of R1 grid points")->check(CLI::Range(2, 1000000));
  reg->add_option("--epsilon", cfg.epsilon, "bisection tolerance as p/q");
  reg->add_option("--out", cfg.out, "output file (stdout if omitted)");
  reg->add_option("--format", cfg.format, "csv or json");

  auto* construct = app.add_subcommand("construct", "build a code and write its descriptor");
  add_params(construct, cfg);
  construct->add_option("--scheme", cfg.scheme, "fb or cs");
  construct->add_option("--r1", cfg.r1, "user 1 rate as p/q (fb)");
  construct->add_option("--a", cfg.a, "copies of the user 1 code (cs)");
  construct->add_option("--b", cfg.b, "copies of the user 2 code (cs)");
  construct->add_option("--max-n", cfg.max_n, "largest slot width to try (fb)");
  construct->add_option("--out", cfg.out, "descriptor file (stdout if omitted)");
  construct->add_option("--table", cfg.table_out, "write the packet table here");

  auto* verify = app.add_subcommand("verify", "check a descriptor against adversarial erasures");
  verify->add_option("code", cfg.code_path, "code descriptor JSON")->required();
  verify->add_option("--horizon", cfg.horizon, "slots to simulate (default 3(T+1) + span)");
  verify->add_option("--mode", cfg.mode, "exhaustive or sampled");
  verify->add_option("--seed", cfg.seed, "seed for sampled mode");
  verify->add_option("--count", cfg.count, "random patterns in sampled mode");
  verify->add_option("--override-budgets", cfg.override_budgets, "N1,N2,N3 to test instead of the design budgets");
  verify->add_option("--report", cfg.report, "write the JSON report here");

  auto* spectrum = app.add_subcommand("spectrum", "print the achievable delay spectrum of an (n, k) code");
  spectrum->add_option("-n", cfg.n, "symbols per slot")->required();
  spectrum->add_option("-k", cfg.k, "message symbols per slot")->required();
  spectrum->add_option("-N,--erasures", cfg.erasures, "erasure budget")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (!spectrum->parsed() && !verify->parsed()) cfg.params.validate();
    if (classify->parsed()) return cmd_classify(cfg, out);
    if (reg->parsed()) return cmd_region(cfg, out);
    if (construct->parsed()) return cmd_construct(cfg, out, err);
    if (verify->parsed()) return cmd_verify(cfg, out);
    if (spectrum->parsed()) return cmd_spectrum(cfg, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kUsage;
}

}  // namespace streamrelay::cli
