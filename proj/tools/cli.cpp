#include "seqspace/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "seqspace/convexity.hpp"
#include "seqspace/duality.hpp"
#include "seqspace/factorization.hpp"
#include "seqspace/io.hpp"
#include "seqspace/norms.hpp"
#include "seqspace/random.hpp"
#include "seqspace/verify/battery.hpp"

namespace seqspace::cli {

namespace {

using io::Json;

struct Options {
  std::string matrix = "identity";
  double p = 2.0;
  Index truncation = 64;
  std::uint64_t seed = 42;
  Index samples = 100;
  std::string epsilon_list = "0.25,0.5,1.0";
  std::string output;
  std::string format = "json";
  bool allow_unsound = false;
  bool pretty = false;
  bool show_q = false;
  std::string filter;
  std::string sequence;
  std::string mode = "lp";
  std::string constraint = "sphere";
  double tol_algebraic = 1e-12;
  double tol_inequality = 1e-9;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SEQSPACE_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorKind::parse, std::string("SEQSPACE_SEED is not an integer: ") + env);
    }
  }
  return 42;
}

class Emitter {
 public:
  Emitter(const Options& opt, std::ostream& out) : opt_(opt), out_(out) {}

  void text(const std::string& body) const {
    if (opt_.output.empty()) {
      out_ << body;
      return;
    }
    std::ofstream file(opt_.output, std::ios::binary);
    if (!file) fail(ErrorKind::parameter, "cannot write " + opt_.output);
    file << body;
  }

  void json(const Json& j) const { text(j.dump(opt_.pretty ? 2 : -1) + "\n"); }

 private:
  const Options& opt_;
  std::ostream& out_;
};

MatrixDescriptor load_matrix(const Options& opt) { return io::matrix_from_json(io::parse_json(io::read_argument(opt.matrix))); }

TruncatedSequence load_sequence(const Options& opt) {
  if (opt.sequence.empty()) fail(ErrorKind::parse, "a sequence (file or inline JSON) is required");
  return io::sequence_from_text(io::read_argument(opt.sequence));
}

SpaceParams params_of(const Options& opt, std::ostream& err) {
  const SpaceParams params = SpaceParams::from_p(opt.p);
  if (opt.show_q) err << "q = " << std::setprecision(17) << params.q << "\n";
  return params;
}

Tolerances tolerances_of(const Options& opt) {
  if (!(opt.tol_algebraic > 0.0) || !(opt.tol_inequality > 0.0)) fail(ErrorKind::parameter, "tolerances must be positive");
  return {opt.tol_algebraic, opt.tol_inequality};
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream in(csv);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "bad number in list: " + cell);
    }
  }
  return out;
}

int cmd_norm(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  const TruncatedSequence x = load_sequence(opt);
  params_of(opt, err);
  const NormReport report = weighted_norm(m, x, opt.p, opt.truncation);
  Emitter(opt, out).json(io::to_json(report));
  if (!report.sound && !opt.allow_unsound) {
    err << "truncation at N = " << opt.truncation << " is not certified; pass --allow-unsound to accept\n";
    return kUnsound;
  }
  return kOk;
}

void print_checks(std::ostream& out, const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    out << (c.pass ? "ok   " : "FAIL ") << std::left << std::setw(44) << c.name << std::right
        << " lhs=" << std::setprecision(10) << c.lhs << " rhs=" << c.rhs << " slack=" << c.slack << "\n";
  }
}

int cmd_factor(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  const TruncatedSequence x = load_sequence(opt);
  const SpaceParams params = params_of(opt, err);
  const Tolerances tol = tolerances_of(opt);
  FactorizationCertificate cert;
  if (opt.mode == "lp") cert = factor_lp(x, m, params, opt.truncation, tol);
  else if (opt.mode == "lpM") cert = factor_lpM(x, m, params, opt.truncation, tol);
  else cert = dual_factor(x, m, params, opt.truncation, tol);
  if (opt.pretty) {
    std::ostringstream table;
    print_checks(table, cert.checks);
    Emitter(opt, out).text(table.str());
  } else {
    Emitter(opt, out).json(io::to_json(cert));
  }
  return cert.pass() ? kOk : kVerifyFailure;
}

int cmd_partition(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  const TruncatedSequence x = load_sequence(opt);
  const SpaceParams params = params_of(opt, err);
  const DerivedWeights w = derive_weights(m, params, opt.truncation);
  const Partition part = bennett_partition(x, w.a, opt.p, opt.truncation);
  const PartitionCheck check = check_partition(x, w.a, opt.p, part);
  Json j = io::to_json(part);
  j["ratios"] = block_ratios(x, w.a, opt.p, part);
  j["prefix_slack"] = check.prefix_slack;
  j["decrease_gap"] = check.decrease_gap;
  j["zero_gap"] = check.zero_gap;
  Emitter(opt, out).json(j);
  return check.ok ? kOk : kVerifyFailure;
}

int cmd_convexity(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  params_of(opt, err);
  const Constraint constraint = opt.constraint == "sphere" ? Constraint::unit_sphere : Constraint::norm_at_least_one;
  const CounterRng rng(opt.seed, 0);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "epsilon,delta_sample,beta_sample,analytic_bound,bound_ok\n";
  bool all_ok = true;
  std::uint64_t stream = 0;
  for (double eps : parse_list(opt.epsilon_list)) {
    const ModulusEstimate est = modulus_scan(m, opt.p, eps, opt.samples, opt.truncation, constraint, rng.split(stream++));
    Json row = io::to_json(est);
    std::string bound = "", ok = "";
    if (eps <= 1.0 && opt.p > 1.0 && m.lower_triangular()) {
      const UniformWitness w = uniform_convexity_witness(m, opt.p, eps, opt.truncation, tolerances_of(opt));
      row["witness"] = io::to_json(w);
      all_ok = all_ok && w.bound_ok;
      std::ostringstream b;
      b << std::setprecision(17) << w.analytic_bound;
      bound = b.str();
      ok = w.bound_ok ? "true" : "false";
    }
    csv << eps << "," << est.delta_sample << "," << est.beta_sample << "," << bound << "," << ok << "\n";
    rows.push_back(row);
  }
  if (opt.format == "csv") Emitter(opt, out).text(csv.str());
  else Emitter(opt, out).json(rows);
  return all_ok ? kOk : kVerifyFailure;
}

int cmd_dual_check(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  const SpaceParams params = params_of(opt, err);
  if (opt.truncation < 2) fail(ErrorKind::parameter, "truncation must be >= 2");
  CounterRng rng(opt.seed, 0);
  Json reports = Json::array();
  bool all_ok = true;
  for (Index i = 0; i < opt.samples; ++i) {
    CounterRng draw = rng.split(i);
    auto random_finite = [&]() {
      const Index support = 1 + draw.below(opt.truncation - 1);
      std::vector<Complex> v(support);
      for (auto& c : v) c = draw.complex_normal();
      return TruncatedSequence(std::move(v));
    };
    const TruncatedSequence x = random_finite();
    const TruncatedSequence y = random_finite();
    const DualCheckReport r = holder_bound_check(m, x, y, params, opt.truncation);
    all_ok = all_ok && r.ok;
    reports.push_back(io::to_json(r));
  }
  Emitter(opt, out).json(reports);
  return all_ok ? kOk : kVerifyFailure;
}

int cmd_diagnose(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  params_of(opt, err);
  const TruncatedSequence x = opt.sequence.empty() ? TruncatedSequence::unit(1, 1) : load_sequence(opt);
  std::vector<Index> truncations;
  for (Index n = std::max<Index>(1, opt.truncation / 8); n <= opt.truncation; n *= 2) truncations.push_back(n);
  Json j;
  j["membership"] = io::to_json(membership_diagnostic(m, x, opt.p, truncations));
  if (opt.truncation >= 4) {
    const double q = SpaceParams::from_p(opt.p).q;
    j["counterexample"] = io::to_json(counterexample_diagnostic(opt.truncation, q));
    j["cesaro_inverse_transpose"] = io::to_json(column_growth(MatrixDescriptor::cesaro_inverse().transposed(), q, opt.truncation));
  }
  Emitter(opt, out).json(j);
  return kOk;
}

int cmd_matrix_info(const Options& opt, std::ostream& out, std::ostream& err) {
  const MatrixDescriptor m = load_matrix(opt);
  params_of(opt, err);
  Emitter(opt, out).json(io::matrix_info(m, opt.p, opt.truncation));
  return kOk;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  verify::BatteryConfig config;
  config.seed = opt.seed;
  config.truncation = opt.truncation;
  config.tolerances = tolerances_of(opt);
  config.filter = opt.filter;
  const auto results = verify::run_battery(config);
  if (results.empty()) fail(ErrorKind::parse, "filter \"" + opt.filter + "\" selects no criteria");
  Emitter(opt, out).text(verify::format_report(results));
  bool all = true;
  for (const auto& r : results) {
    if (!r.pass) {
      all = false;
      err << "criterion " << r.id << " (" << r.name << ") failed: " << r.detail << "\n";
    }
  }
  return all ? kOk : kVerifyFailure;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::parameter:
    case ErrorKind::index: return kParseError;
    case ErrorKind::truncation_unsound: return kUnsound;
    case ErrorKind::precondition:
    case ErrorKind::degenerate_input:
    case ErrorKind::singular:
    case ErrorKind::domain:
    case ErrorKind::divergence:
    case ErrorKind::unsupported: return kPrecondition;
    case ErrorKind::internal:
    case ErrorKind::sampling_exhausted: return kVerifyFailure;
  }
  return kVerifyFailure;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Matrix-weighted sequence space toolkit", "seqspace"};
  app.require_subcommand(1);

  try {
    opt.seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  auto common = [&](CLI::App* sub) {
    sub->add_option("--matrix", opt.matrix, "Matrix spec: file path or inline JSON");
    sub->add_option("--p", opt.p, "Exponent p >= 1");
    sub->add_flag("--q", opt.show_q, "Print the conjugate exponent to stderr");
    sub->add_option("--truncation,-N", opt.truncation, "Truncation N")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "Seed for all sampling");
    sub->add_option("--output,-o", opt.output, "Write the report here instead of stdout");
    sub->add_flag("--pretty", opt.pretty, "Human-readable output");
    sub->add_option("--tol-algebraic", opt.tol_algebraic, "Relative tolerance for identities");
    sub->add_option("--tol-inequality", opt.tol_inequality, "Slack allowed on inequalities");
  };

  auto* norm = app.add_subcommand("norm", "Truncated weighted norm of a sequence");
  common(norm);
  norm->add_option("sequence", opt.sequence, "Sequence: file (JSON or CSV) or inline JSON")->required();
  norm->add_flag("--allow-unsound", opt.allow_unsound, "Exit 0 even when the truncation is not certified");

  auto* factor = app.add_subcommand("factor", "Factorization certificate");
  common(factor);
  factor->add_option("sequence", opt.sequence, "Sequence")->required();
  factor->add_option("--mode", opt.mode, "lp, lpM or dual")->check(CLI::IsMember({"lp", "lpM", "dual"}));

  auto* partition = app.add_subcommand("partition", "Block partition of a finitely supported sequence");
  common(partition);
  partition->add_option("sequence", opt.sequence, "Sequence")->required();

  auto* convexity = app.add_subcommand("convexity", "Sampled convexity moduli and the witness bound");
  common(convexity);
  convexity->add_option("--epsilon-list", opt.epsilon_list, "Comma-separated epsilons");
  convexity->add_option("--pairs,--samples", opt.samples, "Pairs per epsilon")->check(CLI::PositiveNumber);
  convexity->add_option("--constraint", opt.constraint, "sphere or geq-one")->check(CLI::IsMember({"sphere", "geq-one"}));
  convexity->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* dual = app.add_subcommand("dual-check", "Hoelder bound on random finitely supported pairs");
  common(dual);
  dual->add_option("--samples", opt.samples, "Number of pairs");

  auto* diagnose = app.add_subcommand("diagnose", "Membership and column-growth diagnostics (heuristic)");
  common(diagnose);
  diagnose->add_option("sequence", opt.sequence, "Sequence (default e_1)");

  auto* info = app.add_subcommand("matrix-info", "Structural flags and predicate checks of a matrix");
  common(info);

  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance battery");
  common(verify_cmd);
  verify_cmd->add_option("--filter", opt.filter, "Only criteria whose module or name contains this");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  }

  try {
    if (norm->parsed()) return cmd_norm(opt, out, err);
    if (factor->parsed()) return cmd_factor(opt, out, err);
    if (partition->parsed()) return cmd_partition(opt, out, err);
    if (convexity->parsed()) return cmd_convexity(opt, out, err);
    if (dual->parsed()) return cmd_dual_check(opt, out, err);
    if (diagnose->parsed()) return cmd_diagnose(opt, out, err);
    if (info->parsed()) return cmd_matrix_info(opt, out, err);
    if (verify_cmd->parsed()) return cmd_verify(opt, out, err);
  } catch (const Error& e) {
    err << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  return kParseError;
}

}  // namespace seqspace::cli
