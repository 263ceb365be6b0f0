#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nulllab/estimator.hpp"
#include "nulllab/mixture.hpp"

namespace nulllab::mc {

enum class Pipeline { GemNull, GevNull, EpsKnown, EpsPlugin };

std::string pipeline_name(Pipeline p);
Pipeline pipeline_from_name(const std::string& name);

struct Plan {
  mix::MixtureSpec spec;
  std::vector<std::size_t> n_grid;
  std::vector<double> gamma_grid;
  std::vector<std::size_t> L_grid{0};
  // Proportion sweep; when empty the spec's own eps is used.
  std::vector<double> eps_grid;
  std::size_t reps = 100;
  std::uint64_t master_seed = 0;
  std::vector<Pipeline> pipelines{Pipeline::EpsPlugin};

  void validate() const;
};

// One record per (cell, pipeline, estimand). Estimator names are
// "u0", "sigma0_sq" and "eps"; errors are measured against the spec's true
// parameter values. mse = bias^2 + sd^2 (reps-1)/reps by construction.
struct CellRecord {
  double eps = 0.0;
  std::size_t n = 0;
  double gamma = 0.0;
  std::size_t L = 0;
  Pipeline pipeline = Pipeline::EpsPlugin;
  std::string estimator;
  double mse = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  std::size_t reps = 0;
};

struct Result {
  std::vector<CellRecord> records;
  std::uint64_t master_seed = 0;
  double failure_threshold = 0.05;
  double wall_seconds = 0.0;  // informational; never serialized
};

// Runs `reps` repetitions of one grid cell. Per-rep streams derive as
// hash(seed, rep), so results are bit-reproducible regardless of scheduling;
// all requested pipelines see identical data. Repetitions that raise a
// numeric error are dropped; the cell fails if more than failure_threshold
// of them do.
std::vector<CellRecord> run_cell(const mix::MixtureSpec& spec, std::size_t n, double gamma,
                                 std::size_t L, std::size_t reps, std::uint64_t seed,
                                 std::span<const Pipeline> pipelines, unsigned threads = 0);

// Iterates the full (eps, n, gamma, L) grid in deterministic order; cell
// seeds derive as hash(master_seed, cell index).
Result run_plan(const Plan& plan, unsigned threads = 0);

// The built-in experiment configurations:
//   example1  gamma sweep over a 5-value proportion grid
//   example2a gamma sweep, gamma-distributed mean shifts
//   example2b gamma sweep, gamma-distributed sigma (unbounded variance)
//   example3  growing n at gamma = 0.2
//   example4  block dependence sweep at gamma = 0.2
std::map<std::string, Plan> builtin_plans();

}  // namespace nulllab::mc
