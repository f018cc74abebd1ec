// Command-line front end: certification, compound computation, simulation,
// sign-variation tracing, cone decomposition, and omega-limit
// classification.
//
// Exit codes: 0 success/pass, 1 input error, 2 certification failure,
// 3 numerical blow-up.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "kpos/certify.hpp"
#include "kpos/compound.hpp"
#include "kpos/dynamics.hpp"
#include "kpos/io.hpp"
#include "kpos/presets.hpp"
#include "kpos/signvar.hpp"

namespace {

using namespace kpos;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCertFail = 2;
constexpr int kExitBlowup = 3;

Tolerance default_tolerance() {
  Tolerance tol;
  if (const char* env = std::getenv("KPOS_ZERO_EPS")) {
    try {
      tol.zero_eps = std::stod(env);
    } catch (const std::exception&) {
      throw io::ParseError("KPOS_ZERO_EPS is not a number");
    }
  }
  return tol;
}

Eigen::VectorXd parse_inline_vector(const std::string& text) {
  if (!text.empty() && text[0] == '[') return io::parse_vector_json(text);
  // comma-separated list
  Eigen::VectorXd x;
  std::vector<double> vals;
  std::istringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    try {
      vals.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw io::ParseError("cannot parse initial state entry: " + cell);
    }
  }
  if (vals.empty()) throw io::ParseError("empty initial state");
  x.resize(static_cast<Eigen::Index>(vals.size()));
  for (size_t i = 0; i < vals.size(); ++i) x[static_cast<Eigen::Index>(i)] = vals[i];
  return x;
}

// A simulatable system plus a default initial state where the preset has
// one.
struct LoadedSystem {
  NonlinearSystem sys;
  std::optional<Eigen::VectorXd> default_x0;
};

LoadedSystem builtin_system(const std::string& name, int delta) {
  LoadedSystem out;
  if (name == "stable_linear") {
    out.sys = NonlinearSystem::from_linear(presets::stable_linear_matrix());
    Eigen::VectorXd x0(3);
    x0 << 1.0, 0.5, -0.25;
    out.default_x0 = x0;
  } else if (name == "cyclic_feedback") {
    out.sys = presets::cyclic_feedback(delta);
    out.default_x0 = presets::cyclic_feedback_x0();
  } else {
    throw io::ParseError("unknown builtin system: " + name);
  }
  return out;
}

LoadedSystem load_system(const std::string& input, int delta) {
  if (input == "stable_linear" || input == "cyclic_feedback")
    return builtin_system(input, delta);
  const std::string text = io::read_file(input);
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw io::ParseError(std::string("system spec parse error: ") + e.what());
  }
  if (spec.is_array()) {  // bare matrix file: constant linear system
    LoadedSystem out;
    out.sys = NonlinearSystem::from_linear(io::parse_matrix_json(text));
    return out;
  }
  const std::string type = spec.value("type", "");
  if (type == "constant") {
    LoadedSystem out;
    out.sys = NonlinearSystem::from_linear(
        io::parse_matrix_json(spec.at("matrix").dump()));
    return out;
  }
  if (type == "table") {
    std::vector<double> times = spec.at("times").get<std::vector<double>>();
    std::vector<Eigen::MatrixXd> mats;
    for (const auto& m : spec.at("matrices"))
      mats.push_back(io::parse_matrix_json(m.dump()));
    LinearSystem lin = LinearSystem::piecewise(times, mats);
    LoadedSystem out;
    out.sys.dim = lin.dim;
    out.sys.vector_field = [lin](double t, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return lin.matrix_at(t) * x;
    };
    out.sys.jacobian = [lin](double t, const Eigen::VectorXd&) { return lin.matrix_at(t); };
    return out;
  }
  if (type == "builtin")
    return builtin_system(spec.at("name").get<std::string>(), spec.value("delta", delta));
  if (type == "scalar_nonlinear") {
    LoadedSystem out;
    out.sys = presets::scalar_nonlinear(io::parse_matrix_json(spec.at("matrix").dump()));
    return out;
  }
  throw io::ParseError("unknown system spec type: " + type);
}

int cmd_certify(const std::string& matrix_path, const std::string& k_arg,
                const std::string& samples_path) {
  const Tolerance tol = default_tolerance();
  std::vector<Eigen::MatrixXd> samples;
  if (!samples_path.empty()) {
    samples = io::read_matrix_samples(samples_path);
  } else {
    samples.push_back(io::read_matrix(matrix_path));
  }
  const CertReport report = certify_system(samples, tol);

  auto describe = [&](int k) {
    std::cout << k << "-positive: " << (report.positive(k) ? "yes" : "no");
    if (report.verdicts.at(k) == Verdict::strongly_k_positive_candidate)
      std::cout << " (strong candidate)";
    const auto w = report.witnesses.find(k);
    if (w != report.witnesses.end()) {
      std::cout << " (witness a" << w->second.row << w->second.col << "="
                << w->second.value;
      if (samples.size() > 1) std::cout << " at sample " << w->second.sample;
      std::cout << ")";
    }
    std::cout << "\n";
  };

  bool pass = true;
  if (k_arg == "all") {
    for (int k = 1; k <= report.n; ++k) {
      describe(k);
      pass = pass && report.positive(k);
    }
  } else {
    const int k = std::stoi(k_arg);
    if (k < 1 || k > report.n) throw io::ParseError("--k out of range");
    describe(k);
    pass = report.positive(k);
  }
  std::cout << io::cert_report_json(report) << "\n";
  return pass ? kExitOk : kExitCertFail;
}

int cmd_compound(const std::string& matrix_path, int k, const std::string& kind,
                 const std::string& out_path) {
  const Eigen::MatrixXd A = io::read_matrix(matrix_path);
  const Eigen::MatrixXd C = (kind == "mult") ? mult_compound(A, k) : add_compound(A, k);
  const std::string text =
      io::format_labeled_compound(C, static_cast<int>(A.rows()), k);
  if (out_path.empty())
    std::cout << text;
  else
    io::write_file(out_path, text);
  return kExitOk;
}

int cmd_simulate(const std::string& input, const std::string& x0_arg, int delta,
                 double t0, double t1, double step, const std::string& trace_path) {
  const Tolerance tol = default_tolerance();
  LoadedSystem loaded = load_system(input, delta);
  Eigen::VectorXd x0;
  if (!x0_arg.empty())
    x0 = parse_inline_vector(x0_arg);
  else if (loaded.default_x0)
    x0 = *loaded.default_x0;
  else
    throw io::ParseError("--x0 is required for this system");

  const Trajectory traj = simulate(loaded.sys, x0, t0, t1, step);
  const std::string csv = io::trajectory_csv(traj, tol);
  if (trace_path.empty())
    std::cout << csv;
  else
    io::write_file(trace_path, csv);
  return kExitOk;
}

int cmd_classify(const std::string& input, const std::string& x0_arg, int delta,
                 double t1, double step, const OmegaOptions& opt) {
  const Tolerance tol = default_tolerance();
  Trajectory traj;
  std::optional<NonlinearSystem> sys;

  bool is_trajectory_csv = false;
  if (input != "stable_linear" && input != "cyclic_feedback") {
    const std::string text = io::read_file(input);
    const size_t pos = text.find_first_not_of(" \t\r\n");
    is_trajectory_csv = pos != std::string::npos && text.compare(pos, 2, "t,") == 0;
    if (is_trajectory_csv) traj = io::parse_trajectory_csv(text);
  }
  if (!is_trajectory_csv) {
    LoadedSystem loaded = load_system(input, delta);
    Eigen::VectorXd x0;
    if (!x0_arg.empty())
      x0 = parse_inline_vector(x0_arg);
    else if (loaded.default_x0)
      x0 = *loaded.default_x0;
    else
      throw io::ParseError("--x0 is required for this system");
    traj = simulate(loaded.sys, x0, 0.0, t1, step);
    sys = loaded.sys;
  }

  const OmegaVerdict verdict =
      classify_omega_limit(traj, sys ? &*sys : nullptr, tol, opt);
  std::cout << io::omega_verdict_json(verdict) << "\n";
  return kExitOk;
}

int cmd_decompose(const std::string& vector_path, int n, int k) {
  const Tolerance tol = default_tolerance();
  if (!vector_path.empty()) {
    const Eigen::VectorXd x = io::read_vector(vector_path);
    const auto label = classify_cone(x, tol);
    std::cout << (label ? io::cone_pretty(*label) : std::string("zero")) << "\n";
    return kExitOk;
  }
  if (n <= 0 || k <= 0) throw io::ParseError("decompose needs a vector file or --n and --k");
  for (const auto& v : enumerate_cones(n, k)) {
    std::cout << "v=(";
    for (size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v[i];
    std::cout << ")\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-positivity toolkit: certification, compounds, simulation, "
               "sign-variation tracing, omega-limit classification"};
  app.require_subcommand(1);

  std::string matrix_path, samples_path, k_arg = "all";
  auto* certify = app.add_subcommand("certify", "per-k positivity verdicts for a system matrix");
  certify->add_option("matrix", matrix_path, "matrix file (JSON or CSV)");
  certify->add_option("--k", k_arg, "order to check, or 'all'");
  certify->add_option("--samples", samples_path, "JSON array of matrix samples A(t_i)");

  std::string cmp_path, cmp_kind = "add", cmp_out;
  int cmp_k = 1;
  auto* compound = app.add_subcommand("compound", "multiplicative or additive compound matrix");
  compound->add_option("matrix", cmp_path, "matrix file")->required();
  compound->add_option("--k", cmp_k, "compound order")->required();
  compound->add_option("--kind", cmp_kind, "mult or add")->check(CLI::IsMember({"mult", "add"}));
  compound->add_option("--out", cmp_out, "output path (default stdout)");

  std::string sim_input, sim_x0, sim_trace;
  double sim_t0 = 0.0, sim_t1 = 2.5, sim_step = 0.01;
  int sim_delta = -1;
  auto* simulate_cmd = app.add_subcommand("simulate", "integrate a system and emit a signvar-annotated CSV trace");
  simulate_cmd->add_option("system", sim_input, "system spec file, matrix file, or builtin name")->required();
  simulate_cmd->add_option("--x0", sim_x0, "initial state (JSON array or comma list)");
  simulate_cmd->add_option("--t0", sim_t0, "start time");
  simulate_cmd->add_option("--t1", sim_t1, "end time");
  simulate_cmd->add_option("--step", sim_step, "integrator step");
  simulate_cmd->add_option("--delta", sim_delta, "cyclic feedback sign (+1 or -1)");
  simulate_cmd->add_option("--trace", sim_trace, "output CSV path (default stdout)");

  std::string cls_input, cls_x0;
  double cls_t1 = 200.0, cls_step = 0.01;
  int cls_delta = -1;
  OmegaOptions omega_opt;
  auto* classify = app.add_subcommand("classify", "classify the omega-limit set of a trajectory");
  classify->add_option("input", cls_input, "trajectory CSV, system spec, or builtin name")->required();
  classify->add_option("--x0", cls_x0, "initial state when simulating");
  classify->add_option("--t1", cls_t1, "simulation horizon");
  classify->add_option("--step", cls_step, "integrator step");
  classify->add_option("--delta", cls_delta, "cyclic feedback sign (+1 or -1)");
  classify->add_option("--transient", omega_opt.transient_fraction, "transient fraction to discard");
  classify->add_option("--eq-tol-scale", omega_opt.eq_tol_scale, "equilibrium tolerance scale");
  classify->add_option("--orbit-tol-scale", omega_opt.orbit_tol_scale, "near-return tolerance scale");

  std::string dec_path;
  int dec_n = 0, dec_k = 0;
  auto* decompose = app.add_subcommand("decompose", "cone label of a vector, or breakpoint enumeration");
  decompose->add_option("vector", dec_path, "vector file (JSON or single-column CSV)");
  decompose->add_option("--n", dec_n, "dimension for enumeration");
  decompose->add_option("--k", dec_k, "order for enumeration");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify->parsed()) return cmd_certify(matrix_path, k_arg, samples_path);
    if (compound->parsed()) return cmd_compound(cmp_path, cmp_k, cmp_kind, cmp_out);
    if (simulate_cmd->parsed())
      return cmd_simulate(sim_input, sim_x0, sim_delta, sim_t0, sim_t1, sim_step, sim_trace);
    if (classify->parsed())
      return cmd_classify(cls_input, cls_x0, cls_delta, cls_t1, cls_step, omega_opt);
    if (decompose->parsed()) return cmd_decompose(dec_path, dec_n, dec_k);
  } catch (const BlowupError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBlowup;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
