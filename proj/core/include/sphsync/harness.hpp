#pragma once

#include "sphsync/certificates.hpp"
#include "sphsync/models.hpp"
#include "sphsync/optimizer.hpp"
#include "sphsync/serialize.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sphsync {

/// A phase sweep: the cross product of sizes with either margin factors or
/// family-native parameter overrides, `trials` instances per cell.
struct PhaseGrid {
  ModelSpec base;
  std::vector<Index> sizes;
  std::vector<double> margin_factors;
  std::vector<Json> native_cells;  // parameter overrides, used when margin_factors is empty
  int trials = 1;
  int r = 2;
  std::uint64_t master_seed = 0;
  bool kuramoto = false;
  double certificate_tol = kDefaultCertificateTol;
  SolveOptions solver;
};

/// Grid file format (JSON):
///   {"family": "gaussian_z2", "n": [300], "margin_factors": [0.5, 2.0],
///    "params": {...fixed ModelSpec fields...}, "cells": [{...overrides...}],
///    "trials": 50, "r": 2, "master_seed": 1, "kuramoto": false, "solver": {...}}
PhaseGrid parse_phase_grid(const Json& j);

struct PhaseCell {
  Index index = 0;
  ModelSpec spec;
  double margin_factor = 0.0;  // NaN when the family has no margin
};

std::vector<PhaseCell> expand_cells(const PhaseGrid& grid);

/// Per-trial seed: derive_seed(derive_seed(master_seed, cell_index), trial_index).
/// The trial seed then keys the model (tag 1), the solver start (tag 2) and
/// the Kuramoto initial phases (tag 3) through derive_seed.
std::uint64_t trial_seed(std::uint64_t master_seed, Index cell_index, int trial_index);

struct TrialRecord {
  Index cell = 0;
  int trial_index = 0;
  std::uint64_t seed = 0;
  ModelSpec model;
  double margin_factor = 0.0;
  int r = 2;
  // certificate: the better of the identity and degree preconditioners
  double condition_number = 0.0;
  PreconditionerKind preconditioner = PreconditionerKind::kIdentity;
  Verdict verdict = Verdict::kInconclusive;
  double delta_c = 0.0;
  // solver
  bool recovered = false;
  bool second_order_critical = false;
  int iterations = 0;
  double objective = 0.0;
  double rho = 0.0;
  std::optional<bool> kuramoto_synchronized;
  std::string error;
  /// Certificate benign but solver did not recover.
  bool implication_violated = false;
  long long wall_time_ms = 0;
};

struct CellSummary {
  PhaseCell cell;
  int trials = 0;
  int errors = 0;
  double recovery_freq = 0.0;
  double certificate_freq = 0.0;
  double mean_delta_c = 0.0;  // over trials with a delta_c; +inf if any is infinite
  std::optional<double> sync_freq;
  long long wall_time_ms = 0;
};

struct PhaseResult {
  std::vector<TrialRecord> trials;  // cell-major, trial-index order
  std::vector<CellSummary> cells;
  int implication_violations = 0;
};

TrialRecord run_trial(const PhaseGrid& grid, const PhaseCell& cell, int trial_index);

/// Runs every trial with up to `jobs` worker threads. Results are ordered by
/// (cell, trial) regardless of completion order. `progress` (optional) is
/// called after each finished trial with (done, total).
PhaseResult run_phase(const PhaseGrid& grid, int jobs = 1,
                      const std::function<void(std::size_t, std::size_t)>& progress = {});

/// Fixed CSV column list, shared by trial and cell rows.
const std::vector<std::string>& phase_csv_columns();

/// Writes header, trial rows, then one row per cell. With include_timing =
/// false the wall_time_ms column is left empty.
void write_phase_csv(std::ostream& out, const PhaseResult& result, bool include_timing = true);

}  // namespace sphsync
