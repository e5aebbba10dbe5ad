#include "statedeg/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "statedeg/channel_lift.hpp"
#include "statedeg/serialization.hpp"

namespace statedeg {

namespace {

struct RunOptions {
  std::string direction = "both";
  std::string format = "text";
  std::string out_path;
  int max_iter = 20000;
  double feas_tol = 1e-8;
  int witnesses = 200;
  std::uint64_t seed = 0;

  DecideConfig decide_config() const {
    DecideConfig c;
    c.solver.max_iter = max_iter;
    c.solver.feas_tol = feas_tol;
    c.witnesses = witnesses;
    c.seed = seed;
    c.solver.validate();
    if (witnesses < 0)
      throw std::invalid_argument("--witnesses must be nonnegative");
    return c;
  }

  std::vector<Direction> directions() const {
    if (direction == "both")
      return {Direction::EtoB, Direction::BtoE};
    return {direction_from_string(direction)};
  }
};

void add_run_flags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--direction", o.direction, "EtoB, BtoE or both")
      ->check(CLI::IsMember({"EtoB", "BtoE", "both"}));
  cmd->add_option("--max-iter", o.max_iter, "projection iteration budget");
  cmd->add_option("--feas-tol", o.feas_tol, "affine residual tolerance");
  cmd->add_option("--witnesses", o.witnesses, "random filter witnesses");
  cmd->add_option("--seed", o.seed, "random witness seed");
  cmd->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", o.out_path, "write the report to this file");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write " + path);
  f << text;
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

void describe_outcome(std::ostream& os, const FeasibilityOutcome& o,
                      Direction d) {
  os << to_string(d) << ": " << to_string(o.status) << " (stage "
     << to_string(o.stage) << ")\n";
  switch (o.status) {
  case Status::Feasible:
    os << "  certificate: " << o.certificate->size() << " Kraus operator(s) "
       << o.certificate->out_dim() << "x" << o.certificate->in_dim()
       << ", verification residual " << sci(o.verification_residual)
       << ", tp defect " << sci(o.tp_defect) << "\n";
    break;
  case Status::RuledOut:
    if (o.filter_witness)
      os << "  witness " << to_string(o.filter_witness->kind) << ": d_in "
         << o.filter_witness->d_in << " < d_out " << o.filter_witness->d_out
         << "\n";
    else
      os << "  " << o.cause << "\n";
    break;
  case Status::Inconclusive:
    os << "  " << o.cause << " at affine residual " << sci(o.residual_affine)
       << ", psd residual " << sci(o.residual_psd) << " after "
       << o.iterations << " iterations; raise --max-iter to continue\n";
    break;
  }
}

int exit_for(const std::vector<Status>& statuses) {
  for (Status s : statuses)
    if (s == Status::Inconclusive)
      return kExitInconclusive;
  return kExitConclusive;
}

int cmd_analyze_state(const std::string& path, const RunOptions& o,
                      std::ostream& out) {
  const DecideConfig config = o.decide_config();
  const TripartiteState state =
      state_from_json(parse_json(read_file(path), path));
  std::vector<Status> statuses;
  Json results = Json::array();
  std::ostringstream text;
  const Dims& d = state.dims();
  text << "state " << path << " dims " << d.n << "x" << d.p << "x" << d.q
       << "\n";
  for (Direction dir : o.directions()) {
    const auto t0 = std::chrono::steady_clock::now();
    const FeasibilityOutcome outcome = decide(state, dir, config);
    const double ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    statuses.push_back(outcome.status);
    results.push_back(outcome_to_json(outcome, dir));
    describe_outcome(text, outcome, dir);
    text << "  time " << std::fixed << std::setprecision(1) << ms << " ms\n"
         << std::defaultfloat;
  }
  if (o.format == "json") {
    Json report;
    report["kind"] = "state";
    report["config"] = config_to_json(config);
    report["state"] = state_to_json(state);
    report["results"] = std::move(results);
    emit(dump(report), o.out_path, out);
  } else {
    emit(text.str(), o.out_path, out);
  }
  return exit_for(statuses);
}

int cmd_analyze_channel(const std::string& path, const RunOptions& o,
                        std::ostream& out) {
  const DecideConfig config = o.decide_config();
  const Json j = parse_json(read_file(path), path);
  const QuantumChannel channel(kraus_from_json(j));
  const ChannelReport r = channel_degradability_test(channel, config);
  if (o.format == "json") {
    Json report;
    report["kind"] = "channel";
    report["config"] = config_to_json(config);
    report["channel"] = kraus_to_json(channel.kraus());
    report.update(channel_report_to_json(r));
    emit(dump(report), o.out_path, out);
  } else {
    std::ostringstream text;
    text << "channel " << path << ": " << to_string(r.verdict) << "\n"
         << "  scope: " << r.scope << "\n";
    describe_outcome(text, r.e_to_b, Direction::EtoB);
    describe_outcome(text, r.b_to_e, Direction::BtoE);
    emit(text.str(), o.out_path, out);
  }
  return r.verdict == ChannelVerdict::Inconclusive ? kExitInconclusive
                                                   : kExitConclusive;
}

struct ScanFlags {
  std::string family = "depolarizing";
  double lo = 0.05;
  double hi = 0.45;
  double step = 0.01;
  bool full = false;
  int threads = 1;
};

int cmd_scan(const ScanFlags& s, const RunOptions& o, std::ostream& out,
             std::ostream& err) {
  if (s.family != "depolarizing")
    throw std::invalid_argument("scan: unknown family " + s.family);
  ScanOptions options;
  options.full_decide = s.full;
  options.threads = s.threads;
  options.decide = o.decide_config();
  const ScanResult r = epsilon_scan(s.lo, s.hi, s.step, options);

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "epsilon,d_R,d_S,verdict,qber\n";
  for (const ScanPoint& p : r.points) {
    std::string verdict = p.ruled_out ? "RuledOut" : "Passed";
    if (p.full)
      verdict = to_string(*p.full);
    csv << p.epsilon << "," << p.d_r << "," << p.d_s << "," << verdict << ","
        << p.qber << "\n";
  }
  emit(csv.str(), o.out_path, out);

  if (r.threshold) {
    err << "threshold: " << *r.last_ruled_out << " < eps* <= "
        << *r.first_passed << ", estimate " << *r.threshold << " (QBER "
        << std::setprecision(4) << *r.threshold_qber() << ")\n";
  } else if (r.last_ruled_out) {
    err << "threshold: every grid point up to " << *r.last_ruled_out
        << " is ruled out\n";
  } else {
    err << "threshold: no grid point is ruled out\n";
  }
  return kExitConclusive;
}

struct FixtureFlags {
  std::string name;
  double a = 0.5;
  double b = 0.5;
  double alpha2 = 0.8;
  double a2 = 0.65;
  double epsilon = 0.1;
  double gamma = 0.5;
  int dim = 2;
  std::string out_path;
};

int cmd_fixture(const FixtureFlags& f, std::ostream& out) {
  Json j;
  if (f.name == "ghz") {
    j = state_to_json(fixtures::ghz());
  } else if (f.name == "example2") {
    j = state_to_json(fixtures::example2(f.a, f.b));
  } else if (f.name == "sec4") {
    if (!(f.alpha2 > 0.0 && f.a2 > 0.0))
      throw std::invalid_argument("sec4: --alpha2 and --a2 must be positive");
    j = state_to_json(fixtures::sec4(std::sqrt(f.alpha2), std::sqrt(f.a2)));
  } else if (f.name == "bell_lift") {
    j = state_to_json(fixtures::bell_lift(f.epsilon));
  } else if (f.name == "depolarizing") {
    j = kraus_to_json(depolarizing(f.epsilon).kraus());
  } else if (f.name == "amplitude_damping") {
    j = kraus_to_json(amplitude_damping(f.gamma).kraus());
  } else if (f.name == "identity") {
    if (f.dim < 1)
      throw std::invalid_argument("identity: --dim must be positive");
    j = kraus_to_json(identity_kraus(f.dim));
  } else {
    throw std::invalid_argument("unknown fixture '" + f.name + "'");
  }
  emit(dump(j), f.out_path, out);
  return kExitConclusive;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Degradability analysis for tripartite pure states and qubit "
               "channels",
               "statedeg"};
  app.require_subcommand(1);

  RunOptions run;
  std::string path;

  auto* state_cmd =
      app.add_subcommand("analyze-state", "decide E->B / B->E degradability");
  state_cmd->add_option("path", path, "state JSON file")->required();
  add_run_flags(state_cmd, run);

  auto* channel_cmd = app.add_subcommand(
      "analyze-channel", "test a channel through its maximally entangled lift");
  channel_cmd->add_option("path", path, "channel JSON file")->required();
  add_run_flags(channel_cmd, run);

  ScanFlags scan;
  auto* scan_cmd =
      app.add_subcommand("scan", "filter scan over the depolarizing family");
  scan_cmd->add_option("--family", scan.family, "channel family")
      ->check(CLI::IsMember({"depolarizing"}));
  scan_cmd->add_option("--lo", scan.lo, "first epsilon");
  scan_cmd->add_option("--hi", scan.hi, "last epsilon");
  scan_cmd->add_option("--step", scan.step, "grid step");
  scan_cmd->add_flag("--full", scan.full, "also run the full decision");
  scan_cmd->add_option("--threads", scan.threads, "worker threads");
  add_run_flags(scan_cmd, run);

  FixtureFlags fix;
  auto* fixture_cmd = app.add_subcommand("fixture", "write a fixture file");
  fixture_cmd
      ->add_option("name", fix.name,
                   "ghz, example2, sec4, bell_lift, depolarizing, "
                   "amplitude_damping, identity")
      ->required();
  fixture_cmd->add_option("--a", fix.a);
  fixture_cmd->add_option("--b", fix.b);
  fixture_cmd->add_option("--alpha2", fix.alpha2);
  fixture_cmd->add_option("--a2", fix.a2);
  fixture_cmd->add_option("--epsilon", fix.epsilon);
  fixture_cmd->add_option("--gamma", fix.gamma);
  fixture_cmd->add_option("--dim", fix.dim);
  fixture_cmd->add_option("--out", fix.out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitConclusive : kExitError;
  }

  try {
    if (state_cmd->parsed())
      return cmd_analyze_state(path, run, out);
    if (channel_cmd->parsed())
      return cmd_analyze_channel(path, run, out);
    if (scan_cmd->parsed())
      return cmd_scan(scan, run, out, err);
    return cmd_fixture(fix, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

} // namespace statedeg
