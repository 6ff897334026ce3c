#include "csa/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "csa/audit.hpp"
#include "csa/multicopy.hpp"
#include "csa/qubit.hpp"
#include "csa/solver.hpp"
#include "csa/state_io.hpp"
#include "csa/sweep.hpp"

namespace csa::cli {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNotConverged = 2;
constexpr double kAgreementTolerance = 1e-4;

// Input error: reported on stderr, exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_decimal(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a number: '" + text + "'");
  return v;
}

struct RunConfig {
  std::optional<std::string> a, k, phi;
  std::string matrix_path;
  std::string set = "B3";
  std::string out_path;
  // sweep
  std::string fix;
  std::string grid = "41x41";
  std::string a_range, phi_range, k_range;
  // audit
  int audit_grid = 21;
  bool zero_region_only = false;
  int grid_oracle_resolution = 0;
  // multicopy
  int copies = 2;
  SolverOptions solver;
};

struct Target {
  DensityMatrix rho;
  std::optional<QubitParams> params;
};

Target load_target(const RunConfig& cfg) {
  const bool has_params = cfg.a || cfg.k || cfg.phi;
  if (has_params == !cfg.matrix_path.empty()) {
    throw InputError("give exactly one target: --a/--k/--phi or --matrix");
  }
  if (has_params) {
    const double a = cfg.a ? parse_real(*cfg.a) : 0.0;
    const double k = cfg.k ? parse_real(*cfg.k) : 0.0;
    const double phi = cfg.phi ? parse_real(*cfg.phi) : 0.0;
    const auto p = QubitParams::make(a, k, phi);
    return {qubit_from_params(p), p};
  }
  DensityMatrix rho = load_density(cfg.matrix_path);
  std::optional<QubitParams> params;
  if (rho.dim() == 2) params = qubit_params_from_density(rho);
  return {std::move(rho), params};
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

StateSet load_set(const std::string& name) {
  if (upper(name) == "B1") return pauli_b1_set();
  if (upper(name) == "B3") return pauli_b3_set();
  return load_state_set(name);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("failed writing " + path);
}

json weights_json(std::span<const double> w) { return std::vector<double>(w.begin(), w.end()); }

int cmd_approx(const RunConfig& cfg, std::ostream& out) {
  const Target target = load_target(cfg);
  const StateSet set = load_set(cfg.set);
  if (set.dim() != target.rho.dim()) throw InputError("state set and target dimensions differ");

  const auto result = minimize(target.rho, set, cfg.solver);
  const DensityMatrix approximant(mixture(set, result.weights.values()));

  json doc = to_json(result, set);
  doc["schema"] = kSchemaVersion;
  doc["kind"] = "approx";
  doc["set"] = cfg.set;
  doc["helstrom_probability"] = helstrom_probability(target.rho, approximant);
  doc["solver"] = to_json(cfg.solver);
  if (target.params) {
    doc["target"] = {{"a", target.params->a}, {"k", target.params->k}, {"phi", target.params->phi}};
  } else {
    doc["target"] = {{"matrix", matrix_to_json(target.rho.matrix())}};
  }

  if (target.params && upper(cfg.set) == "B1") {
    const auto b1 = b1_solution(*target.params);
    doc["analytic"] = {{"kind", "b1"},
                       {"claimed_distance", b1.distance},
                       {"claimed_weights", weights_json(b1.weights.values())},
                       {"agrees", std::abs(b1.distance - result.distance) <= kAgreementTolerance}};
  } else if (target.params && upper(cfg.set) == "B3") {
    const auto check = check_claim(*target.params, result);
    doc["analytic"] = {
        {"kind", "b3"},
        {"case_label", std::string(to_string(check.analytic.case_label))},
        {"claimed_distance", check.analytic.claimed_distance},
        {"claimed_weights", check.claimed_weights},
        {"achieved_distance", check.achieved_distance},
        {"flags", check.flags},
        {"agrees", check.flags.empty() &&
                       std::abs(check.analytic.claimed_distance - result.distance) <= kAgreementTolerance}};
  }

  const std::string text = doc.dump(2) + "\n";
  if (!cfg.out_path.empty()) write_file(cfg.out_path, text);
  out << text;
  return result.converged ? kExitOk : kExitNotConverged;
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "a") return SweepAxis::kA;
  if (name == "phi") return SweepAxis::kPhi;
  if (name == "k") return SweepAxis::kK;
  throw InputError("unknown sweep parameter '" + name + "' (expected a, phi or k)");
}

AxisRange parse_range(const std::string& text, SweepAxis axis, int points) {
  AxisRange r = default_range(axis, points);
  if (text.empty()) return r;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("range must look like lo:hi, got '" + text + "'");
  r.lo = parse_real(text.substr(0, colon));
  r.hi = parse_real(text.substr(colon + 1));
  return r;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto eq = cfg.fix.find('=');
  if (eq == std::string::npos) throw InputError("--fix must look like k=0.6667 or phi=pi/3");
  SweepConfig sc;
  sc.fixed = parse_axis(cfg.fix.substr(0, eq));
  sc.fixed_value = parse_real(cfg.fix.substr(eq + 1));
  sc.solver = cfg.solver;

  const auto x = cfg.grid.find_first_of("xX");
  if (x == std::string::npos) throw InputError("--grid must look like 41x41");
  int outer_points = 0;
  int inner_points = 0;
  try {
    outer_points = std::stoi(cfg.grid.substr(0, x));
    inner_points = std::stoi(cfg.grid.substr(x + 1));
  } catch (const std::exception&) {
    throw InputError("--grid must look like 41x41");
  }
  if (outer_points < 2 || inner_points < 2) throw InputError("grid resolutions must be >= 2");

  const auto [outer_axis, inner_axis] = free_axes(sc.fixed);
  auto range_text = [&](SweepAxis axis) -> const std::string& {
    return axis == SweepAxis::kA ? cfg.a_range : axis == SweepAxis::kPhi ? cfg.phi_range : cfg.k_range;
  };
  sc.outer = parse_range(range_text(outer_axis), outer_axis, outer_points);
  sc.inner = parse_range(range_text(inner_axis), inner_axis, inner_points);
  for (const auto& r : {sc.outer, sc.inner}) {
    if (!(r.lo <= r.hi)) throw InputError("ranges must satisfy lo <= hi");
  }
  // Every grid point must be a valid parameter triple.
  auto check_axis = [](SweepAxis axis, double lo, double hi) {
    if (axis == SweepAxis::kPhi) return;
    if (lo < 0.0 || hi > 1.0) throw InputError(std::string(to_string(axis)) + " must lie in [0, 1]");
  };
  check_axis(outer_axis, sc.outer.lo, sc.outer.hi);
  check_axis(inner_axis, sc.inner.lo, sc.inner.hi);
  check_axis(sc.fixed, sc.fixed_value, sc.fixed_value);

  const auto rows = run_sweep(sc);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, csv.str());
    std::size_t zero_rows = 0;
    for (const auto& r : rows) zero_rows += r.check.oracle_distance <= kAgreementTolerance;
    out << "rows: " << rows.size() << "\nzero-distance rows: " << zero_rows << "\n";
  } else {
    out << csv.str();
  }
  return kExitOk;
}

int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  if (cfg.audit_grid < 5) throw InputError("--grid must be >= 5");
  AuditOptions opts;
  opts.resolution = cfg.audit_grid;
  opts.zero_region_only = cfg.zero_region_only;
  opts.grid_oracle_resolution = cfg.grid_oracle_resolution;
  opts.solver = cfg.solver;
  const auto report = audit_analytic(opts);
  if (!cfg.out_path.empty()) write_file(cfg.out_path, to_json(report).dump(2) + "\n");

  out << "points: " << report.points.size() << "\n";
  out << "flagged points: " << report.flagged_points() << "\n";
  for (const char* flag :
       {audit_flags::kWeightsInfeasible, audit_flags::kInconsistent, audit_flags::kSuboptimal,
        audit_flags::kLiteralWeightsInfeasible, audit_flags::kLiteralInconsistent,
        audit_flags::kLiteralSuboptimal, audit_flags::kBeatsOracle, audit_flags::kOracleDisagreement}) {
    const auto it = report.flag_counts.find(flag);
    out << flag << ": " << (it == report.flag_counts.end() ? 0 : it->second) << "\n";
  }
  return kExitOk;
}

int cmd_multicopy(const RunConfig& cfg, std::ostream& out) {
  const Target target = load_target(cfg);
  const StateSet set = load_set(cfg.set);
  if (set.dim() != target.rho.dim()) throw InputError("state set and target dimensions differ");
  const MultiCopyProblem prob{target.rho, set, cfg.copies};
  ChainReport report = [&] {
    try {
      FactorizedOptions fopts;
      fopts.inner = cfg.solver;
      return inequality_chain_report(prob, cfg.solver, fopts);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  }();
  json doc = to_json(report);
  doc["solver"] = to_json(cfg.solver);
  if (!cfg.out_path.empty()) write_file(cfg.out_path, doc.dump(2) + "\n");
  char line[160];
  std::snprintf(line, sizeof line, "d_corr %.9g\nd_fact %.9g\nd_prod %.9g\n", report.d_corr,
                report.d_fact, report.d_prod);
  out << line;
  return kExitOk;
}

void add_target_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--a", cfg.a, "population of |1>, in [0, 1]");
  sub->add_option("--k", cfg.k, "coherence parameter, in [0, 1]");
  sub->add_option("--phi", cfg.phi, "phase in radians; accepts pi expressions such as pi/3");
  sub->add_option("--matrix", cfg.matrix_path, "target state JSON file");
  sub->add_option("--set", cfg.set, "B1, B3 or a state set JSON file");
}

void add_solver_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--seed", cfg.solver.seed, "restart seed");
  sub->add_option("--max-iterations", cfg.solver.max_iterations, "iterations per start")
      ->check(CLI::PositiveNumber);
  sub->add_option("--restarts", cfg.solver.random_restarts, "random restarts")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--polish-iterations", cfg.solver.polish_iterations, "Polyak polishing steps per start")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--step", cfg.solver.step_scale, "step scale c in c/sqrt(t)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

double parse_real(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) text += static_cast<char>(std::tolower(c));
  }
  const auto pos = text.find("pi");
  if (pos == std::string::npos) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return parse_decimal(text);
    const double denom = parse_decimal(text.substr(slash + 1));
    if (denom == 0.0) throw std::invalid_argument("division by zero in '" + raw + "'");
    return parse_decimal(text.substr(0, slash)) / denom;
  }

  std::string coeff = text.substr(0, pos);
  std::string rest = text.substr(pos + 2);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double value = std::numbers::pi;
  if (coeff == "-") {
    value = -value;
  } else if (!coeff.empty() && coeff != "+") {
    value *= parse_decimal(coeff);
  }
  if (!rest.empty()) {
    if (rest.front() != '/') throw std::invalid_argument("cannot parse '" + raw + "'");
    const double denom = parse_decimal(rest.substr(1));
    if (denom == 0.0) throw std::invalid_argument("division by zero in '" + raw + "'");
    value /= denom;
  }
  return value;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Optimal convex approximation of quantum states", "csa"};
  app.require_subcommand(1);

  auto* approx = app.add_subcommand("approx", "approximate one target state");
  add_target_options(approx, cfg);
  add_solver_options(approx, cfg);
  approx->add_option("--out", cfg.out_path, "write the JSON result here");

  auto* sweep = app.add_subcommand("sweep", "B3 distance over a two-parameter grid (CSV)");
  sweep->add_option("--fix", cfg.fix, "fixed parameter, e.g. k=0.6667 or phi=pi/3")->required();
  sweep->add_option("--grid", cfg.grid, "points per swept axis, e.g. 41x41");
  sweep->add_option("--a-range", cfg.a_range, "lo:hi for a (default 0:0.5)");
  sweep->add_option("--phi-range", cfg.phi_range, "lo:hi for phi (default 0:pi/2)");
  sweep->add_option("--k-range", cfg.k_range, "lo:hi for k (default 0:1)");
  sweep->add_option("--out", cfg.out_path, "write the CSV here instead of stdout");
  add_solver_options(sweep, cfg);

  auto* audit = app.add_subcommand("audit", "check the closed-form B3 solution against the solver");
  audit->add_option("--grid", cfg.audit_grid, "points per axis over the canonical region");
  audit->add_flag("--zero-region-only", cfg.zero_region_only,
                  "only grid points inside the exact-decomposition region");
  audit->add_option("--grid-oracle", cfg.grid_oracle_resolution,
                    "also run the brute-force grid oracle at this resolution");
  audit->add_option("--out", cfg.out_path, "write the JSON report here");
  add_solver_options(audit, cfg);

  auto* multicopy = app.add_subcommand("multicopy", "correlated / factorized / product distances");
  add_target_options(multicopy, cfg);
  multicopy->add_option("--copies", cfg.copies, "number of copies N")->check(CLI::PositiveNumber);
  multicopy->add_option("--out", cfg.out_path, "write the JSON report here");
  add_solver_options(multicopy, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (approx->parsed()) return cmd_approx(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (audit->parsed()) return cmd_audit(cfg, out);
    if (multicopy->parsed()) return cmd_multicopy(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace csa::cli
