#include "capsim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "capsim/capgeom.hpp"
#include "capsim/explorer.hpp"
#include "capsim/hilbert.hpp"
#include "capsim/protocol.hpp"

namespace capsim {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::uint64_t seed = 12345;
  int threads = 1;
  std::string format = "csv";
  std::string out;
};

// Shortest exact decimal representation is overkill for CSV; 17 significant
// digits round-trip any double.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + g.out);
  f << text;
}

// State specs: named kets (0, 1, +, -, i, -i), "theta,phi" Bloch angles in
// radians, or an amplitude list "re0,im0,re1,im1" (normalized on input).
PureState parse_state_spec(const std::string& spec) {
  const double r = std::numbers::sqrt2 / 2.0;
  if (spec == "0") return PureState::basis(2, 0);
  if (spec == "1") return PureState::basis(2, 1);
  if (spec == "+") return PureState({{r, 0.0}, {r, 0.0}});
  if (spec == "-") return PureState({{r, 0.0}, {-r, 0.0}});
  if (spec == "i") return PureState({{r, 0.0}, {0.0, r}});
  if (spec == "-i") return PureState({{r, 0.0}, {0.0, -r}});

  std::vector<double> vals;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument("");
      vals.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed state spec: '" + spec + "'");
    }
  }
  if (vals.size() == 2) {
    const double theta = vals[0], phi = vals[1];
    return PureState::normalized(
        {{std::cos(0.5 * theta), 0.0}, std::polar(std::sin(0.5 * theta), phi)});
  }
  if (vals.size() == 4) {
    return PureState::normalized({{vals[0], vals[1]}, {vals[2], vals[3]}});
  }
  throw std::invalid_argument(
      "malformed state spec: '" + spec +
      "' (expected a named ket, theta,phi angles, or re0,im0,re1,im1)");
}

// ---- bounds ----------------------------------------------------------------

int cmd_bounds(const GlobalOptions& g, unsigned n_max, double epsilon) {
  const auto rows = lower_bounds_table(n_max, epsilon);
  if (g.format == "csv") {
    std::ostringstream os;
    os << "n,N,log2_VN,real_bound_bits,complex_bound_bits,theorem2_bits,"
          "entanglement_bits,fw_log2,raig_log2,ref_2_pow_n_over_3\n";
    for (const auto& r : rows) {
      os << r.n << ',' << r.N << ',' << fmt(r.log2_VN) << ',' << fmt(r.real_bound_bits)
         << ',' << r.complex_bound_bits << ',' << fmt(r.theorem2_bits) << ','
         << r.entanglement_bits << ',' << fmt(r.fw_log2) << ',' << fmt(r.raig_log2)
         << ',' << fmt(r.ref_2_pow_n_over_3) << '\n';
    }
    emit(g, os.str());
  } else {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json row;
      row["n"] = r.n;
      row["N"] = r.N;
      row["log2_VN"] = r.log2_VN;
      row["real_bound_bits"] = r.real_bound_bits;
      row["complex_bound_bits"] = r.complex_bound_bits;
      row["theorem2_bits"] = r.theorem2_bits;
      row["entanglement_bits"] = r.entanglement_bits;
      row["fw_log2"] = r.fw_log2;
      row["raig_log2"] = r.raig_log2;
      row["ref_2_pow_n_over_3"] = r.ref_2_pow_n_over_3;
      arr.push_back(std::move(row));
    }
    emit(g, arr.dump(2) + "\n");
  }
  return kExitPass;
}

// ---- cap-volume ------------------------------------------------------------

int cmd_cap_volume(const GlobalOptions& g, const std::string& kind_name,
                   std::uint64_t dim, const std::string& method,
                   std::uint64_t trials) {
  const CapKind kind = kind_name == "real" ? CapKind::Real : CapKind::Complex;
  double value = 0.0, standard_error = 0.0;
  std::uint64_t used_trials = 0;
  if (method == "quadrature") {
    value = kind == CapKind::Real ? real_cap_volume(dim) : complex_cap_volume(dim);
  } else if (method == "closed") {
    value = kind == CapKind::Real ? real_cap_volume_beta(dim)
                                  : complex_cap_volume_closed(dim);
  } else if (method == "decomposed") {
    if (kind == CapKind::Real) {
      throw std::invalid_argument("method 'decomposed' applies to complex caps only");
    }
    value = complex_cap_volume_decomposed(dim);
  } else {  // montecarlo (choices restricted by CLI11)
    const auto est = monte_carlo_cap_volume(kind, dim, trials, RandomStream(g.seed), g.threads);
    value = est.estimate;
    standard_error = est.standard_error;
    used_trials = est.trials;
  }

  if (g.format == "csv") {
    std::ostringstream os;
    os << "kind,dim,method,value,standard_error,trials\n";
    os << kind_name << ',' << dim << ',' << method << ',' << fmt(value) << ','
       << fmt(standard_error) << ',' << used_trials << '\n';
    emit(g, os.str());
  } else {
    nlohmann::ordered_json j;
    j["kind"] = kind_name;
    j["dim"] = dim;
    j["method"] = method;
    j["value"] = value;
    j["standard_error"] = standard_error;
    j["trials"] = used_trials;
    emit(g, j.dump(2) + "\n");
  }
  return kExitPass;
}

// ---- simulate ----------------------------------------------------------------

int cmd_simulate(const GlobalOptions& g, const std::string& psi_spec,
                 const std::string& phi_spec, std::uint64_t trials) {
  const PureState psi = parse_state_spec(psi_spec);
  const PureState phi = parse_state_spec(phi_spec);
  const auto r = two_bit_simulate(psi, phi, trials, RandomStream(g.seed), g.threads);

  const double deviation = std::abs(r.frequency - r.born);
  // Null-hypothesis sigma: the larger of the Born-rule and empirical binomial
  // standard errors, so exact extremes (sigma = 0, deviation = 0) still pass.
  const double sigma = std::sqrt(
      std::max(r.born * (1.0 - r.born), r.frequency * (1.0 - r.frequency)) /
      static_cast<double>(trials));
  const bool pass = deviation <= 6.0 * sigma + 1e-12;

  if (g.format == "csv") {
    std::ostringstream os;
    os << "frequency,born,deviation,standard_error,trials,pass\n";
    os << fmt(r.frequency) << ',' << fmt(r.born) << ',' << fmt(deviation) << ','
       << fmt(r.standard_error) << ',' << r.trials << ',' << (pass ? 1 : 0) << '\n';
    emit(g, os.str());
  } else {
    nlohmann::ordered_json j;
    j["frequency"] = r.frequency;
    j["born"] = r.born;
    j["deviation"] = deviation;
    j["standard_error"] = r.standard_error;
    j["trials"] = r.trials;
    j["pass"] = pass;
    emit(g, j.dump(2) + "\n");
  }
  return pass ? kExitPass : kExitFail;
}

// ---- check-protocol ------------------------------------------------------------

struct CheckLine {
  std::string name;
  std::string status;  // pass | fail | warning
  std::string detail;
};

int cmd_check_protocol(const GlobalOptions& g, const std::string& path,
                       double tolerance, double orth_tol, double eps_supp) {
  // Load errors (unreadable file, parse error, schema violation) surface as
  // ProtocolValidationError and exit with the usage code; audit failures on a
  // well-formed file exit with the check-failed code.
  const TabulatedProtocol p = TabulatedProtocol::load(path);

  std::vector<CheckLine> lines;
  bool any_fail = false;

  try {
    p.validate();
    lines.push_back({"constraints", "pass", ""});
  } catch (const ProtocolValidationError& e) {
    lines.push_back({"constraints", "fail", e.what()});
    any_fail = true;
  }

  const auto lemma = lemma1_check(p, orth_tol, eps_supp);
  if (lemma.pass) {
    lines.push_back({"lemma1", "pass", ""});
  } else {
    any_fail = true;
    std::ostringstream d;
    const auto& v = lemma.violations.front();
    d << "orthogonal pair in support: shared[" << v.shared_index << "] message "
      << v.message << " states (" << v.state_a << ", " << v.state_b
      << ") overlap " << fmt(v.overlap) << "; " << lemma.violations.size()
      << " violation(s) total";
    lines.push_back({"lemma1", "fail", d.str()});
  }

  const auto cov = coverage_check(p, tolerance, eps_supp);
  {
    std::ostringstream d;
    for (std::size_t x = 0; x < cov.totals.size(); ++x) {
      if (x) d << ' ';
      d << "shared[" << x << "]=" << fmt(cov.totals[x]);
    }
    if (!cov.used_support_weights) d << " (no support_weights declared)";
    const char* s = cov.status == CheckStatus::Pass
                        ? "pass"
                        : (cov.status == CheckStatus::Fail ? "fail" : "warning");
    if (cov.status == CheckStatus::Fail) any_fail = true;
    lines.push_back({"coverage", s, d.str()});
  }

  const auto bound = message_bound_check(
      std::max<std::uint64_t>(p.message_count, 1), p.dimension, CapKind::Complex);
  {
    std::ostringstream d;
    d << "R=" << bound.messages << " volume=" << fmt(bound.volume)
      << " product=" << fmt(bound.product) << " bits_used=" << fmt(bound.bits_used)
      << " bits_required=" << fmt(bound.bits_required);
    if (!bound.pass) any_fail = true;
    lines.push_back({"message_bound", bound.pass ? "pass" : "fail", d.str()});
  }

  const auto eq = verify_equivalence(p, tolerance);
  if (eq.pass) {
    std::ostringstream d;
    d << "max_deviation=" << fmt(eq.max_deviation);
    lines.push_back({"equivalence", "pass", d.str()});
  } else {
    any_fail = true;
    std::ostringstream d;
    const auto& f = eq.flagged.front();
    d << "max_deviation=" << fmt(eq.max_deviation) << " first at state " << f.state
      << " measurement " << f.measurement << " (model " << fmt(f.model)
      << " vs quantum " << fmt(f.quantum) << "); " << eq.flagged.size()
      << " pair(s) flagged";
    lines.push_back({"equivalence", "fail", d.str()});
  }

  if (g.format == "csv") {
    std::ostringstream os;
    os << "check,status,detail\n";
    for (const auto& l : lines) {
      std::string quoted = l.detail;
      for (std::size_t pos = 0; (pos = quoted.find('"', pos)) != std::string::npos; pos += 2) {
        quoted.replace(pos, 1, "\"\"");
      }
      os << l.name << ',' << l.status << ",\"" << quoted << "\"\n";
    }
    emit(g, os.str());
  } else {
    nlohmann::ordered_json j;
    j["protocol"] = path;
    j["pass"] = !any_fail;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& l : lines) {
      nlohmann::ordered_json c;
      c["check"] = l.name;
      c["status"] = l.status;
      c["detail"] = l.detail;
      j["checks"].push_back(std::move(c));
    }
    emit(g, j.dump(2) + "\n");
  }
  return any_fail ? kExitFail : kExitPass;
}

// ---- explore --------------------------------------------------------------------

int cmd_explore(const GlobalOptions& g, const std::string& kind_name,
                std::uint64_t dim, std::uint64_t M, double delta_deg,
                std::uint64_t budget) {
  const CapKind kind = kind_name == "real" ? CapKind::Real : CapKind::Complex;
  const double delta = delta_deg * std::numbers::pi / 180.0;
  ExploreOptions options;
  options.anneal_iterations = budget;
  options.threads = g.threads;
  // Single-threaded runs promise byte-identical output, so wall time moves to
  // stderr and the report carries 0.
  options.suppress_timing = g.threads == 1;
  const SearchReport report = explore(kind, static_cast<std::size_t>(dim),
                                      static_cast<std::size_t>(M), delta, g.seed, options);
  emit(g, report.to_json() + "\n");
  if (options.suppress_timing) {
    std::cerr << "explore: best_density=" << fmt(report.best_density)
              << " target=" << fmt(report.target_volume) << " gap=" << fmt(report.gap)
              << "\n";
  }
  return report.feasible ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(int argc, char** argv) {
  GlobalOptions g;

  CLI::App app{"Double-cap volumes, communication lower bounds, and orthogonality-avoiding set search"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g.seed, "RNG seed (default 12345)");
  app.add_option("--threads", g.threads, "worker threads: 1 = serial reference, 0 = OpenMP default")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "output file (default stdout)");

  // bounds
  unsigned n_max = 20;
  double epsilon = 1e-6;
  auto* bounds = app.add_subcommand("bounds", "lower-bound table for n = 1..n_max qubits");
  bounds->add_option("--n-max", n_max, "largest qubit count (1..62)");
  bounds->add_option("--epsilon", epsilon, "epsilon in the Theorem-2 coefficient");

  // cap-volume
  std::string cv_kind = "real", cv_method = "quadrature";
  std::uint64_t cv_dim = 3, cv_trials = 1'000'000;
  auto* capvol = app.add_subcommand("cap-volume", "double-cap volume V_d or U_N");
  capvol->add_option("--kind", cv_kind, "real | complex")
      ->required()
      ->check(CLI::IsMember({"real", "complex"}));
  capvol->add_option("--dim", cv_dim, "dimension (real: ambient d, complex: Hilbert N)")
      ->required();
  capvol->add_option("--method", cv_method, "quadrature | closed | decomposed | montecarlo")
      ->check(CLI::IsMember({"quadrature", "closed", "decomposed", "montecarlo"}));
  capvol->add_option("--trials", cv_trials, "Monte Carlo sample count");

  // simulate
  std::string psi_spec = "0", phi_spec = "0";
  std::uint64_t sim_trials = 1'000'000;
  auto* simulate = app.add_subcommand("simulate", "run the 2-bit one-way qubit protocol");
  simulate->add_option("--psi", psi_spec, "prepared state (ket name, theta,phi, or amplitudes)");
  simulate->add_option("--phi", phi_spec, "measurement state (same formats)");
  simulate->add_option("--trials", sim_trials, "number of protocol runs");

  // check-protocol
  std::string protocol_path;
  double tolerance = 1e-9, orth_tol = 1e-9, eps_supp = 1e-12;
  auto* check = app.add_subcommand("check-protocol", "audit a tabulated protocol file");
  check->add_option("path", protocol_path, "protocol JSON file")->required();
  check->add_option("--tolerance", tolerance, "equivalence/coverage tolerance");
  check->add_option("--orth-tol", orth_tol, "orthogonality threshold for lemma1");
  check->add_option("--eps-supp", eps_supp, "support membership threshold");

  // explore
  std::string ex_kind = "real";
  std::uint64_t ex_dim = 3, ex_M = 4000, ex_budget = 1'000'000;
  double ex_delta_deg = 2.0;
  auto* explore_cmd = app.add_subcommand("explore", "search for dense orthogonality-avoiding sets");
  explore_cmd->add_option("--kind", ex_kind, "real | complex")
      ->check(CLI::IsMember({"real", "complex"}));
  explore_cmd->add_option("--dim", ex_dim, "dimension (>= 2)");
  explore_cmd->add_option("--M", ex_M, "number of sphere points");
  explore_cmd->add_option("--delta-deg", ex_delta_deg, "orthogonality tolerance, degrees (0 < delta < 45)");
  explore_cmd->add_option("--budget", ex_budget, "annealing iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitUsage;
  }

  try {
    if (bounds->parsed()) return cmd_bounds(g, n_max, epsilon);
    if (capvol->parsed()) return cmd_cap_volume(g, cv_kind, cv_dim, cv_method, cv_trials);
    if (simulate->parsed()) return cmd_simulate(g, psi_spec, phi_spec, sim_trials);
    if (check->parsed()) {
      return cmd_check_protocol(g, protocol_path, tolerance, orth_tol, eps_supp);
    }
    if (explore_cmd->parsed()) {
      return cmd_explore(g, ex_kind, ex_dim, ex_M, ex_delta_deg, ex_budget);
    }
  } catch (const ProtocolValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace capsim
