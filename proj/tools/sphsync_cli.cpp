// sphsync: generate instances, certify landscapes, solve, simulate and sweep.
//
// Exit codes: 0 success / benign, 2 inconclusive (or not second-order
// critical for `solve`), 1 error.

#include "sphsync/certificates.hpp"
#include "sphsync/circulant.hpp"
#include "sphsync/error.hpp"
#include "sphsync/harness.hpp"
#include "sphsync/kuramoto.hpp"
#include "sphsync/matrix_io.hpp"
#include "sphsync/models.hpp"
#include "sphsync/optimizer.hpp"
#include "sphsync/serialize.hpp"
#include "sphsync/sphere_ops.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace sphsync;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

struct Globals {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::optional<double> tol;
  std::string format = "json";
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::kIo, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::kParse, path + ": " + e.what());
  }
}

std::string scalar_text(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Prints a flat JSON object as JSON or as a two-line CSV (nested values dumped).
void emit(const Json& j, const Globals& g) {
  if (g.format == "csv") {
    std::string header;
    std::string values;
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (value.is_array() || value.is_object()) continue;
      header += (first ? "" : ",") + key;
      values += (first ? "" : ",") + scalar_text(value);
      first = false;
    }
    std::cout << header << '\n' << values << '\n';
  } else {
    std::cout << j.dump(2) << '\n';
  }
}

SignVector load_signs(const std::string& spec, Index n) {
  if (spec.empty() || spec == "ones") return SignVector::ones(n);
  SignVector z = read_signs(spec);
  require(z.n() == n, ErrorCode::kDimensionMismatch, "sign vector length differs from matrix size");
  return z;
}

std::optional<long> parse_twisted(const std::string& init) {
  const std::string prefix = "twisted:";
  if (init.rfind(prefix, 0) != 0) return std::nullopt;
  long q = 0;
  const char* first = init.data() + prefix.size();
  const char* last = init.data() + init.size();
  auto [ptr, ec] = std::from_chars(first, last, q);
  require(ec == std::errc() && ptr == last, ErrorCode::kInvalidArgument,
          "--init twisted:<q> needs an integer winding");
  return q;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string spec_file;
  std::string family;
  Index n = 0;
  double sigma = 0, p = 0, q = 0, delta = 0;
  std::string centering = "known";
  Index k = 0, d = 0;
  std::string ground_truth;
  std::string out;
  std::string z_out;
};

int cmd_gen(const GenArgs& a, const Globals& g) {
  ModelSpec spec;
  if (!a.spec_file.empty()) {
    Json j = read_json_file(a.spec_file);
    if (!j.contains("seed")) j["seed"] = g.seed;
    spec = model_spec_from_json(j);
  } else {
    require(!a.family.empty(), ErrorCode::kInvalidArgument, "gen needs --spec or --family");
    Json j = {{"family", a.family}, {"n", a.n}, {"seed", g.seed}};
    if (!a.ground_truth.empty()) j["ground_truth"] = a.ground_truth;
    const Family fam = parse_family(a.family);
    if (fam == Family::kGaussianZ2) j["sigma"] = a.sigma;
    if (fam == Family::kCensoredBlock || fam == Family::kSignedEr) {
      j["p"] = a.p;
      j["delta"] = a.delta;
    }
    if (fam == Family::kSbm) {
      j["p"] = a.p;
      j["q"] = a.q;
      j["centering"] = a.centering;
    }
    if (fam == Family::kCirculantKnn) j["k"] = a.k;
    if (fam == Family::kRandomRegular) j["d"] = a.d;
    spec = model_spec_from_json(j);
  }
  const Instance inst = generate(spec);
  if (a.out.empty() || a.out == "-") {
    write_cost(std::cout, inst.cost);
  } else {
    write_cost(std::filesystem::path(a.out), inst.cost);
  }
  if (!a.z_out.empty()) write_signs(std::filesystem::path(a.z_out), inst.z);
  return kExitOk;
}

// ---------------------------------------------------------------- certify

struct CertifyArgs {
  std::string matrix;
  std::string z = "ones";
  int r = 2;
  std::string preconditioner = "identity";
  bool complex = false;
  bool kuramoto = false;
  std::optional<double> d_bar;
};

int cmd_certify(const CertifyArgs& a, const Globals& g) {
  const SymmetricCost c = read_cost(a.matrix);
  const double tol = g.tol.value_or(kDefaultCertificateTol);
  if (a.kuramoto) {
    const SyncCheckReport rep = kuramoto_sync_check(c, tol);
    Json j = to_json(rep);
    if (g.format == "csv") {
      Json flat = to_json(rep.ordinary);
      flat["synchronizing"] = rep.synchronizing;
      flat["normalized_condition_number"] =
          rep.normalized ? number_json(rep.normalized->condition_number) : Json(nullptr);
      emit(flat, g);
    } else {
      emit(j, g);
    }
    return rep.synchronizing ? kExitOk : kExitInconclusive;
  }

  const SignVector z = load_signs(a.z, c.n());
  Preconditioner pre;
  if (a.preconditioner == "identity") {
    pre = Preconditioner::identity();
  } else if (a.preconditioner == "degree") {
    pre = Preconditioner::degree();
  } else {
    std::ifstream in(a.preconditioner);
    require(in.good(), ErrorCode::kIo,
            "--preconditioner must be identity, degree or a vector file: " + a.preconditioner);
    Index n = 0;
    in >> n;
    require(n == c.n(), ErrorCode::kDimensionMismatch, "preconditioner length differs from n");
    RealVector d(n);
    for (Index i = 0; i < n; ++i) {
      require(static_cast<bool>(in >> d[i]), ErrorCode::kParse, "preconditioner file too short");
    }
    pre = Preconditioner::from_vector(d);
  }

  const bool complex = a.complex || c.is_complex() || z.is_complex();
  auto check = [&](const Preconditioner& p) {
    return complex ? benign_landscape_check_complex(c, z, a.r, p, tol)
                   : benign_landscape_check(c, z, a.r, p, tol);
  };
  CertificateReport rep = check(pre);
  std::optional<RankOneReference> ref;
  if (a.d_bar && !complex) {
    ref = rank_one_bound(c, z, RankOneModel::uniform(*a.d_bar));
    rep.delta_c = ref->delta_c;
  }
  Json j = to_json(rep);
  if (ref) j["rank_one"] = to_json(*ref);
  if (pre.kind != PreconditionerKind::kIdentity) {
    j["identity"] = to_json(check(Preconditioner::identity()));
  } else if (!complex && degree_vector(c, z).minCoeff() > 0.0) {
    j["degree"] = to_json(check(Preconditioner::degree()));
  }
  emit(j, g);
  return rep.verdict == Verdict::kBenignForR ? kExitOk : kExitInconclusive;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string matrix;
  int r = 2;
  std::string z;
  std::string init = "random";
  int max_iters = SolveOptions{}.max_iters;
  double grad_tol = SolveOptions{}.grad_tol;
  int escape_attempts = SolveOptions{}.escape_attempts;
  double recovery_tol = SolveOptions{}.recovery_tol;
  std::string config_out;
  bool print_configuration = false;
};

int cmd_solve(const SolveArgs& a, const Globals& g) {
  const SymmetricCost c = read_cost(a.matrix);
  SolveOptions opts;
  opts.seed = g.seed;
  opts.max_iters = a.max_iters;
  opts.grad_tol = g.tol.value_or(a.grad_tol);
  opts.escape_attempts = a.escape_attempts;
  opts.recovery_tol = a.recovery_tol;
  std::optional<SignVector> z;
  if (!a.z.empty()) z = load_signs(a.z, c.n());

  std::optional<SphereConfig> y0;
  if (auto q = parse_twisted(a.init)) {
    require(a.r == 2 && !c.is_complex(), ErrorCode::kInvalidArgument,
            "--init twisted:<q> needs a real matrix and --r 2");
    y0 = twisted_state(c.n(), *q).to_sphere();
  } else if (a.init == "random") {
    y0 = random_init(c.n(), a.r, opts.seed, c.is_complex());
  } else {
    y0 = read_config(a.init);
    require(y0->r() == a.r, ErrorCode::kDimensionMismatch, "initial configuration rank differs from --r");
  }
  const SolveReport rep = solve_from(c, *y0, opts, z);
  if (!a.config_out.empty()) write_config(std::filesystem::path(a.config_out), rep.final_y);
  emit(to_json(rep, a.print_configuration && g.format == "json"), g);
  return rep.second_order_critical ? kExitOk : kExitInconclusive;
}

// ---------------------------------------------------------------- kuramoto

struct KuramotoArgs {
  std::string matrix;
  std::string init = "random";
  double dt = 0.0;
  double max_time = 0.0;
  std::string integrator = "rk4";
  double sync_tol = 1e-6;
  double stall_tol = 0.0;
  double coupling = 1.0;
  std::string trajectory;
  long stride = 1;
  bool print_angles = false;
};

int cmd_kuramoto(const KuramotoArgs& a, const Globals& g) {
  const SymmetricCost c = read_cost(a.matrix);
  SimOptions opts;
  opts.time_step = a.dt;
  opts.max_time = a.max_time;
  opts.sync_tol = g.tol.value_or(a.sync_tol);
  opts.stall_tol = a.stall_tol;
  opts.seed = g.seed;
  require(a.integrator == "rk4" || a.integrator == "euler", ErrorCode::kInvalidArgument,
          "--integrator must be rk4 or euler");
  opts.integrator = a.integrator == "rk4" ? Integrator::kRk4 : Integrator::kEuler;

  RealVector theta;
  if (auto q = parse_twisted(a.init)) {
    theta = twisted_state(c.n(), *q).angles();
  } else if (a.init == "random") {
    theta = random_phases(c.n(), g.seed).angles();
  } else if (a.init == "sync") {
    theta = RealVector::Zero(c.n());
  } else {
    fail(ErrorCode::kInvalidArgument, "--init must be random, sync or twisted:<q>");
  }
  const PhaseVector theta0(theta, a.coupling);
  std::ofstream traj;
  if (!a.trajectory.empty()) {
    traj.open(a.trajectory);
    require(traj.good(), ErrorCode::kIo, "cannot open " + a.trajectory);
  }
  const EquilibriumReport rep =
      simulate(c, theta0, opts, a.trajectory.empty() ? nullptr : &traj, a.stride);
  emit(to_json(rep, a.print_angles && g.format == "json"), g);
  return kExitOk;
}

// ---------------------------------------------------------------- circulant

int cmd_circulant(Index n, Index k, const Globals& g) {
  const CirculantSpectrum s = dft_spectrum(n, k);
  const FiniteSizeStability st = finite_size_stability(n, k);
  if (g.format == "json") {
    Json j = to_json(s);
    j["stability"] = to_json(st);
    j["critical_density"] = critical_density();
    j["density"] = 2.0 * static_cast<double>(k) / static_cast<double>(n);
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "m,h_a,h_l,h_ltilde\n";
  for (std::size_t m = 0; m < s.h_a.size(); ++m) {
    std::cout << m << ',' << scalar_text(number_json(s.h_a[m])) << ','
              << scalar_text(number_json(s.h_l[m])) << ','
              << scalar_text(number_json(s.h_ltilde[m])) << '\n';
  }
  std::cout << "\nn,k,density,condition_number,lambda2_twisted,twisted_min,predicts_spurious,"
               "condition_above_two,critical_density\n"
            << n << ',' << k << ','
            << scalar_text(number_json(2.0 * static_cast<double>(k) / static_cast<double>(n))) << ','
            << scalar_text(number_json(st.condition_number)) << ','
            << scalar_text(number_json(st.lambda2_twisted)) << ','
            << scalar_text(number_json(st.twisted_min)) << ',' << (st.predicts_spurious ? 1 : 0)
            << ',' << (st.condition_above_two ? 1 : 0) << ','
            << scalar_text(number_json(critical_density())) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- phase

struct PhaseArgs {
  std::string grid;
  std::string family;
  std::vector<Index> n;
  std::vector<double> margins;
  std::vector<std::string> params;
  std::optional<int> trials;
  std::optional<int> r;
  std::optional<std::uint64_t> master_seed;
  bool kuramoto = false;
  std::string out;
  bool no_timing = false;
  bool quiet = false;
};

Json parse_param_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    return text;  // bare strings such as centering=known
  }
}

int cmd_phase(const PhaseArgs& a, const Globals& g, bool seed_given) {
  Json j;
  if (!a.grid.empty()) {
    j = read_json_file(a.grid);
  } else {
    require(!a.family.empty() && !a.n.empty(), ErrorCode::kInvalidArgument,
            "phase needs --grid or --family with --n");
    j["family"] = a.family;
    j["n"] = a.n;
  }
  if (!a.margins.empty()) j["margin_factors"] = a.margins;
  for (const std::string& kv : a.params) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos, ErrorCode::kInvalidArgument, "--param expects key=value");
    j["params"][kv.substr(0, eq)] = parse_param_value(kv.substr(eq + 1));
  }
  if (a.trials) j["trials"] = *a.trials;
  if (a.r) j["r"] = *a.r;
  if (a.master_seed) {
    j["master_seed"] = *a.master_seed;
  } else if (seed_given || !j.contains("master_seed")) {
    j["master_seed"] = g.seed;
  }
  if (a.kuramoto) j["kuramoto"] = true;
  if (g.tol) j["tol"] = *g.tol;

  const PhaseGrid grid = parse_phase_grid(j);
  auto progress = [&](std::size_t done, std::size_t total) {
    if (!a.quiet) std::cerr << "\rphase: " << done << "/" << total << " trials" << std::flush;
  };
  const PhaseResult result = run_phase(grid, g.jobs, progress);
  if (!a.quiet) std::cerr << '\n';

  if (a.out.empty() || a.out == "-") {
    write_phase_csv(std::cout, result, !a.no_timing);
  } else {
    std::ofstream out(a.out);
    require(out.good(), ErrorCode::kIo, "cannot open " + a.out);
    write_phase_csv(out, result, !a.no_timing);
  }
  if (result.implication_violations > 0) {
    std::cerr << "sphsync: error: " << result.implication_violations
              << " trial(s) with a benign certificate were not recovered\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sphsync: landscape certificates, solvers and sweeps for synchronization on spheres"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "Seed (also the default phase master seed)");
  app.add_option("--jobs", g.jobs, "Worker threads for phase sweeps")->check(CLI::PositiveNumber);
  double tol_value = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_value,
                                 "Tolerance override: certificate tol (certify, phase), grad_tol "
                                 "(solve), sync_tol (kuramoto)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instance matrix");
  gen_cmd->add_option("--spec", gen.spec_file, "JSON model spec file");
  gen_cmd->add_option("--family", gen.family, "Model family");
  gen_cmd->add_option("--n", gen.n, "Size");
  gen_cmd->add_option("--sigma", gen.sigma);
  gen_cmd->add_option("--p", gen.p);
  gen_cmd->add_option("--q", gen.q);
  gen_cmd->add_option("--delta", gen.delta);
  gen_cmd->add_option("--centering", gen.centering);
  gen_cmd->add_option("--k", gen.k);
  gen_cmd->add_option("--d", gen.d);
  gen_cmd->add_option("--ground-truth", gen.ground_truth);
  gen_cmd->add_option("--out,-o", gen.out, "Matrix output path (default stdout)");
  gen_cmd->add_option("--z-out", gen.z_out, "Ground-truth sign vector output path");

  CertifyArgs cert;
  double d_bar = 0.0;
  auto* cert_cmd = app.add_subcommand("certify", "Landscape certificate for a matrix file");
  cert_cmd->add_option("matrix", cert.matrix)->required();
  cert_cmd->add_option("--z", cert.z, "Sign vector file or 'ones'");
  cert_cmd->add_option("--r", cert.r, "Relaxation rank")->check(CLI::PositiveNumber);
  cert_cmd->add_option("--preconditioner", cert.preconditioner, "identity, degree or a vector file");
  cert_cmd->add_flag("--complex", cert.complex, "Use the complex (Hermitian) criterion");
  cert_cmd->add_flag("--kuramoto", cert.kuramoto, "Kuramoto synchronization check (z = 1, r = 2)");
  auto* dbar_opt = cert_cmd->add_option("--d-bar", d_bar, "Also compute delta_C for C_bar = (d_bar/n) z z^T");

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Riemannian ascent with saddle escape");
  solve_cmd->add_option("matrix", solve_args.matrix)->required();
  solve_cmd->add_option("--r", solve_args.r)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--z", solve_args.z, "Ground truth for the recovery check");
  solve_cmd->add_option("--init", solve_args.init, "random, twisted:<q> or a configuration file");
  solve_cmd->add_option("--max-iters", solve_args.max_iters);
  solve_cmd->add_option("--grad-tol", solve_args.grad_tol);
  solve_cmd->add_option("--escape-attempts", solve_args.escape_attempts);
  solve_cmd->add_option("--recovery-tol", solve_args.recovery_tol);
  solve_cmd->add_option("--config-out", solve_args.config_out, "Write the final configuration");
  solve_cmd->add_flag("--print-configuration", solve_args.print_configuration);

  KuramotoArgs kur;
  auto* kur_cmd = app.add_subcommand("kuramoto", "Simulate the Kuramoto dynamics");
  kur_cmd->add_option("matrix", kur.matrix)->required();
  kur_cmd->add_option("--init", kur.init, "random, sync or twisted:<q>");
  kur_cmd->add_option("--dt", kur.dt, "Time step (default 0.05/|A|)");
  kur_cmd->add_option("--max-time", kur.max_time, "Time horizon (default 2000/|A|)");
  kur_cmd->add_option("--integrator", kur.integrator);
  kur_cmd->add_option("--sync-tol", kur.sync_tol);
  kur_cmd->add_option("--stall-tol", kur.stall_tol, "Velocity threshold (default 1e-9 |A|)");
  kur_cmd->add_option("--coupling", kur.coupling, "Global coupling K");
  kur_cmd->add_option("--trajectory", kur.trajectory, "CSV trajectory output path");
  kur_cmd->add_option("--stride", kur.stride, "Trajectory stride in steps");
  kur_cmd->add_flag("--print-angles", kur.print_angles);

  Index circ_n = 0;
  Index circ_k = 0;
  auto* circ_cmd = app.add_subcommand("circulant", "DFT spectra of the k-NN circulant graph");
  circ_cmd->add_option("--n", circ_n)->required();
  circ_cmd->add_option("--k", circ_k)->required();

  PhaseArgs ph;
  auto* phase_cmd = app.add_subcommand("phase", "Monte Carlo phase sweep to CSV");
  phase_cmd->add_option("--grid", ph.grid, "Grid JSON file");
  phase_cmd->add_option("--family", ph.family);
  phase_cmd->add_option("--n", ph.n);
  phase_cmd->add_option("--margins", ph.margins)->delimiter(',');
  phase_cmd->add_option("--param", ph.params, "Fixed model parameter key=value");
  phase_cmd->add_option("--trials", ph.trials);
  phase_cmd->add_option("--r", ph.r);
  phase_cmd->add_option("--master-seed", ph.master_seed);
  phase_cmd->add_flag("--kuramoto", ph.kuramoto, "Also simulate Kuramoto per trial");
  phase_cmd->add_option("--out,-o", ph.out, "CSV output path (default stdout)");
  phase_cmd->add_flag("--no-timing", ph.no_timing, "Leave wall_time_ms empty");
  phase_cmd->add_flag("--quiet", ph.quiet, "No progress on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }
  if (tol_opt->count() > 0) {
    if (!(tol_value > 0.0)) {
      std::cerr << "sphsync: error: --tol must be positive\n";
      return kExitError;
    }
    g.tol = tol_value;
  }
  if (g.format == "csv" && solve_cmd->parsed() && solve_args.print_configuration) {
    std::cerr << "sphsync: note: --print-configuration ignored for csv output\n";
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen(gen, g);
    if (cert_cmd->parsed()) {
      if (dbar_opt->count() > 0) cert.d_bar = d_bar;
      return cmd_certify(cert, g);
    }
    if (solve_cmd->parsed()) return cmd_solve(solve_args, g);
    if (kur_cmd->parsed()) return cmd_kuramoto(kur, g);
    if (circ_cmd->parsed()) return cmd_circulant(circ_n, circ_k, g);
    if (phase_cmd->parsed()) return cmd_phase(ph, g, seed_opt->count() > 0);
  } catch (const std::exception& e) {
    std::cerr << "sphsync: error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
