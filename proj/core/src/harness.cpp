#include "sphsync/harness.hpp"

#include "sphsync/error.hpp"
#include "sphsync/kuramoto.hpp"
#include "sphsync/rng.hpp"
#include "sphsync/sphere_ops.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

namespace sphsync {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::uint64_t kModelTag = 1;
constexpr std::uint64_t kSolverTag = 2;
constexpr std::uint64_t kKuramotoTag = 3;

[[noreturn]] void grid_error(const std::string& field, const std::string& what) {
  fail(ErrorCode::kParse, "grid field '" + field + "': " + what);
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

std::string fmt_bool(bool b) { return b ? "1" : "0"; }

// CSV field quoting for free-text columns.
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  out += '"';
  return out;
}

ModelSpec apply_overrides(const ModelSpec& base, const Json& overrides) {
  Json merged = to_json(base);
  for (const auto& [key, value] : overrides.items()) merged[key] = value;
  return model_spec_from_json(merged);
}

}  // namespace

PhaseGrid parse_phase_grid(const Json& j) {
  if (!j.is_object()) fail(ErrorCode::kParse, "grid must be a JSON object");
  static const std::set<std::string> known = {"family", "n",      "margin_factors", "params",
                                              "cells",  "trials", "r",              "master_seed",
                                              "kuramoto", "solver", "tol"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) grid_error(key, "unknown field");
  }
  PhaseGrid grid;
  if (!j.contains("family")) grid_error("family", "missing");
  if (!j.contains("n")) grid_error("n", "missing");

  Json base = j.contains("params") ? j.at("params") : Json::object();
  if (!base.is_object()) grid_error("params", "expected an object");
  base["family"] = j.at("family");
  const Json& sizes = j.at("n");
  if (sizes.is_number_integer()) {
    grid.sizes.push_back(sizes.get<Index>());
  } else if (sizes.is_array()) {
    for (const auto& s : sizes) {
      if (!s.is_number_integer()) grid_error("n", "expected integers");
      grid.sizes.push_back(s.get<Index>());
    }
  } else {
    grid_error("n", "expected an integer or a list of integers");
  }
  if (grid.sizes.empty()) grid_error("n", "empty list");
  base["n"] = grid.sizes.front();
  // Margin grids fill in the remaining parameters per cell, so the base
  // spec is only checked once expanded.
  grid.base = model_spec_from_json(base, false);

  if (j.contains("margin_factors")) {
    const Json& m = j.at("margin_factors");
    if (!m.is_array()) grid_error("margin_factors", "expected a list of numbers");
    for (const auto& x : m) {
      if (!x.is_number()) grid_error("margin_factors", "expected numbers");
      grid.margin_factors.push_back(x.get<double>());
    }
  }
  if (j.contains("cells")) {
    const Json& c = j.at("cells");
    if (!c.is_array()) grid_error("cells", "expected a list of objects");
    for (const auto& x : c) {
      if (!x.is_object()) grid_error("cells", "expected objects");
      grid.native_cells.push_back(x);
    }
  }
  if (!grid.margin_factors.empty() && !grid.native_cells.empty()) {
    grid_error("cells", "use either margin_factors or cells, not both");
  }
  if (grid.margin_factors.empty() && grid.native_cells.empty()) {
    grid.native_cells.push_back(Json::object());
  }
  if (j.contains("trials")) {
    if (!j.at("trials").is_number_integer()) grid_error("trials", "expected an integer");
    grid.trials = j.at("trials").get<int>();
  }
  if (grid.trials < 1) grid_error("trials", "must be >= 1");
  if (j.contains("r")) {
    if (!j.at("r").is_number_integer()) grid_error("r", "expected an integer");
    grid.r = j.at("r").get<int>();
  }
  if (grid.r < 1) grid_error("r", "must be >= 1");
  if (j.contains("master_seed")) {
    if (!j.at("master_seed").is_number_integer()) grid_error("master_seed", "expected an integer");
    grid.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  if (j.contains("kuramoto")) {
    if (!j.at("kuramoto").is_boolean()) grid_error("kuramoto", "expected a boolean");
    grid.kuramoto = j.at("kuramoto").get<bool>();
  }
  if (j.contains("tol")) {
    if (!j.at("tol").is_number()) grid_error("tol", "expected a number");
    grid.certificate_tol = j.at("tol").get<double>();
    if (!(grid.certificate_tol > 0.0)) grid_error("tol", "must be positive");
  }
  if (j.contains("solver")) apply_solve_options(j.at("solver"), grid.solver);
  expand_cells(grid);  // surface parameter errors at parse time
  return grid;
}

std::vector<PhaseCell> expand_cells(const PhaseGrid& grid) {
  std::vector<PhaseCell> cells;
  Index index = 0;
  for (Index n : grid.sizes) {
    ModelSpec sized = grid.base;
    sized.n = n;
    if (!grid.margin_factors.empty()) {
      for (double m : grid.margin_factors) {
        ModelSpec spec = spec_from_margin(sized, m);
        spec.validate();
        cells.push_back({index++, spec, m});
      }
    } else {
      for (const Json& overrides : grid.native_cells) {
        ModelSpec spec = apply_overrides(sized, overrides);
        cells.push_back({index++, spec, margin_of(spec)});
      }
    }
  }
  return cells;
}

std::uint64_t trial_seed(std::uint64_t master_seed, Index cell_index, int trial_index) {
  return derive_seed(derive_seed(master_seed, static_cast<std::uint64_t>(cell_index)),
                     static_cast<std::uint64_t>(trial_index));
}

TrialRecord run_trial(const PhaseGrid& grid, const PhaseCell& cell, int trial_index) {
  const auto start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.cell = cell.index;
  rec.trial_index = trial_index;
  rec.seed = trial_seed(grid.master_seed, cell.index, trial_index);
  rec.model = cell.spec;
  rec.model.seed = derive_seed(rec.seed, kModelTag);
  rec.margin_factor = cell.margin_factor;
  rec.r = grid.r;
  rec.delta_c = kNaN;
  rec.condition_number = kNaN;
  rec.objective = kNaN;
  rec.rho = kNaN;
  try {
    const Instance inst = generate(rec.model);
    const SymmetricCost& c = inst.cost;
    const SignVector& z = inst.z;

    // Certificate: the better of the identity and degree preconditioners.
    const CertificateReport ident =
        benign_landscape_check(c, z, grid.r, Preconditioner::identity(), grid.certificate_tol);
    const CertificateReport deg =
        benign_landscape_check(c, z, grid.r, Preconditioner::degree(), grid.certificate_tol);
    const bool ident_benign = ident.verdict == Verdict::kBenignForR;
    const bool deg_benign = deg.verdict == Verdict::kBenignForR;
    const CertificateReport* best = &ident;
    if (deg_benign && !ident_benign) {
      best = &deg;
    } else if (deg_benign == ident_benign && deg.verdict != Verdict::kInconclusive &&
               (ident.verdict == Verdict::kInconclusive ||
                deg.condition_number < ident.condition_number)) {
      best = &deg;
    }
    rec.condition_number = best->condition_number;
    rec.preconditioner = best->preconditioner;
    rec.verdict = best->verdict;

    const RealVector degrees = degree_vector(c, z);
    const double d_bar = expected_degree(rec.model).value_or(degrees.mean());
    if (d_bar > 0.0) rec.delta_c = rank_one_bound(c, z, RankOneModel::uniform(d_bar)).delta_c;

    SolveOptions opts = grid.solver;
    opts.seed = derive_seed(rec.seed, kSolverTag);
    const SolveReport sol = solve(c, grid.r, opts, z);
    rec.recovered = sol.recovered.value_or(false);
    rec.second_order_critical = sol.second_order_critical;
    rec.iterations = sol.iterations;
    rec.objective = sol.objective;
    rec.rho = sol.rho;
    if (rec.verdict == Verdict::kBenignForR && !rec.recovered) {
      rec.implication_violated = true;
      rec.error = "certificate benign but solver did not recover (" + sol.status + ")";
    }

    if (grid.kuramoto) {
      const RealVector& zr = z.real();
      const SymmetricCost gauged =
          SymmetricCost::from_real(zr.asDiagonal() * c.real() * zr.asDiagonal());
      const PhaseVector theta0 = random_phases(c.n(), derive_seed(rec.seed, kKuramotoTag));
      rec.kuramoto_synchronized = simulate(gauged, theta0).synchronized;
    }
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  rec.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

PhaseResult run_phase(const PhaseGrid& grid, int jobs,
                      const std::function<void(std::size_t, std::size_t)>& progress) {
  const std::vector<PhaseCell> cells = expand_cells(grid);
  const std::size_t per_cell = static_cast<std::size_t>(grid.trials);
  const std::size_t total = cells.size() * per_cell;

  PhaseResult result;
  result.trials.resize(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t job = next.fetch_add(1);
      if (job >= total) return;
      const PhaseCell& cell = cells[job / per_cell];
      result.trials[job] = run_trial(grid, cell, static_cast<int>(job % per_cell));
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(finished, total);
      }
    }
  };
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (const PhaseCell& cell : cells) {
    CellSummary s;
    s.cell = cell;
    int recovered = 0;
    int benign = 0;
    int synced = 0;
    int sync_count = 0;
    int delta_count = 0;
    double delta_sum = 0.0;
    for (std::size_t t = 0; t < per_cell; ++t) {
      const TrialRecord& rec = result.trials[static_cast<std::size_t>(cell.index) * per_cell + t];
      ++s.trials;
      s.wall_time_ms += rec.wall_time_ms;
      if (!rec.error.empty() && !rec.implication_violated) ++s.errors;
      if (rec.implication_violated) ++result.implication_violations;
      recovered += rec.recovered ? 1 : 0;
      benign += rec.verdict == Verdict::kBenignForR ? 1 : 0;
      if (rec.kuramoto_synchronized) {
        ++sync_count;
        synced += *rec.kuramoto_synchronized ? 1 : 0;
      }
      if (!std::isnan(rec.delta_c)) {  // +inf (no positive degree) propagates
        ++delta_count;
        delta_sum += rec.delta_c;
      }
    }
    s.recovery_freq = static_cast<double>(recovered) / s.trials;
    s.certificate_freq = static_cast<double>(benign) / s.trials;
    s.mean_delta_c = delta_count > 0 ? delta_sum / delta_count : kNaN;
    if (grid.kuramoto) s.sync_freq = sync_count > 0 ? static_cast<double>(synced) / sync_count : kNaN;
    result.cells.push_back(s);
  }
  return result;
}

const std::vector<std::string>& phase_csv_columns() {
  static const std::vector<std::string> columns = {
      "row_type", "cell", "trial", "seed", "family", "n", "margin_factor", "sigma", "p", "q",
      "delta", "centering", "k", "d", "r", "condition_number", "preconditioner", "verdict",
      "delta_c", "recovered", "second_order_critical", "iterations", "objective", "rho",
      "kuramoto_synchronized", "trials", "recovery_freq", "certificate_freq", "mean_delta_c",
      "sync_freq", "error", "wall_time_ms"};
  return columns;
}

namespace {

void write_model_fields(std::ostream& out, const ModelSpec& m, double margin, int r) {
  const bool sbm_like = m.family == Family::kSbm;
  out << to_string(m.family) << ',' << m.n << ',' << fmt(margin) << ','
      << (m.family == Family::kGaussianZ2 ? fmt(m.sigma) : "") << ','
      << (m.family == Family::kCensoredBlock || m.family == Family::kSignedEr || sbm_like ? fmt(m.p)
                                                                                          : "")
      << ',' << (sbm_like ? fmt(m.q) : "") << ','
      << (m.family == Family::kCensoredBlock || m.family == Family::kSignedEr ? fmt(m.delta) : "")
      << ',' << (sbm_like ? std::string(to_string(m.centering)) : "") << ','
      << (m.family == Family::kCirculantKnn ? std::to_string(m.k) : "") << ','
      << (m.family == Family::kRandomRegular ? std::to_string(m.d) : "") << ',' << r;
}

}  // namespace

void write_phase_csv(std::ostream& out, const PhaseResult& result, bool include_timing) {
  const auto& columns = phase_csv_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const TrialRecord& t : result.trials) {
    out << "trial," << t.cell << ',' << t.trial_index << ',' << t.seed << ',';
    write_model_fields(out, t.model, t.margin_factor, t.r);
    out << ',' << fmt(t.condition_number) << ',' << to_string(t.preconditioner) << ','
        << to_string(t.verdict) << ',' << fmt(t.delta_c) << ',' << fmt_bool(t.recovered) << ','
        << fmt_bool(t.second_order_critical) << ',' << t.iterations << ',' << fmt(t.objective)
        << ',' << fmt(t.rho) << ','
        << (t.kuramoto_synchronized ? fmt_bool(*t.kuramoto_synchronized) : "") << ",,,,,,"
        << quote(t.error) << ',' << (include_timing ? std::to_string(t.wall_time_ms) : "") << '\n';
  }
  for (const CellSummary& s : result.cells) {
    out << "cell," << s.cell.index << ",,,";
    write_model_fields(out, s.cell.spec, s.cell.margin_factor, result.trials.empty() ? 0 : result.trials.front().r);
    out << ",,,,,,,,,,," << s.trials << ',' << fmt(s.recovery_freq) << ','
        << fmt(s.certificate_freq) << ',' << fmt(s.mean_delta_c) << ','
        << (s.sync_freq ? fmt(*s.sync_freq) : "") << ','
        << (s.errors > 0 ? std::to_string(s.errors) + " trial errors" : "") << ','
        << (include_timing ? std::to_string(s.wall_time_ms) : "") << '\n';
  }
}

}  // namespace sphsync
