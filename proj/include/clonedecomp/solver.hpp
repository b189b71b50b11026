#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "clonedecomp/core.hpp"

namespace clonedecomp {

enum class BirthSchedule { one_random_per_sweep, full_permutation_per_sweep };

struct SolverConfig {
  ModelConfig model;
  int max_sweeps = 500;
  double q_tol = 1e-10;      // relative Q-decrease threshold
  double w_step_tol = 1e-8;  // weight-row movement tolerance
  BirthSchedule birth_schedule = BirthSchedule::full_permutation_per_sweep;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct RestartEnsemble {
  std::vector<Solution> solutions;
  std::map<int, int> c_histogram;
  std::size_t best = 0;  // index of the minimal-Q solution (ties: lowest index)

  const Solution& best_solution() const { return solutions[best]; }
};

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::vector<double> v);

/// Exact minimizer of row s's fit over the genotype alphabet, by enumeration
/// when C <= c_max_enumerate and by cyclic single-coordinate descent beyond
/// that. Ties break toward the lexicographically smaller row.
std::vector<std::uint8_t> optimize_z_row(std::size_t s,
                                         const ReadCountMatrix& counts,
                                         const GenotypeMatrix& z,
                                         const WeightMatrix& w,
                                         const ModelConfig& cfg);

struct WRowResult {
  std::vector<double> row;
  bool converged = true;
  double fit = 0.0;  // row objective at `row`
};

/// Solves the convex weight subproblem for sample t by projected gradient
/// descent with backtracking, warm-started from the current row.
WRowResult optimize_w_row(std::size_t t, const ReadCountMatrix& counts,
                          const GenotypeMatrix& z, const WeightMatrix& w,
                          const SolverConfig& cfg);

/// Tries to add a feature containing only SNV s (dosage 1), re-optimizing
/// every weight row under the extended genotype matrix. Commits and returns
/// true iff the penalized objective drops by more than the relative q_tol.
bool attempt_birth(std::size_t s, const ReadCountMatrix& counts,
                   GenotypeMatrix& z, WeightMatrix& w,
                   const SolverConfig& cfg);

/// Removes all-zero genotype columns; their weight mass moves to the
/// background column.
void prune_empty_features(GenotypeMatrix& z, WeightMatrix& w);

/// One seeded FL-means run: random single-column initialization, then sweeps
/// of genotype-row, weight-row and birth moves until nothing changes.
Solution fl_means_solve(const ReadCountMatrix& counts,
                        const SolverConfig& cfg);

/// Independent seeded restarts; deterministic regardless of parallelism.
RestartEnsemble multi_restart(const ReadCountMatrix& counts,
                              const SolverConfig& cfg, int n_restarts,
                              unsigned parallelism = 1);

/// Post-hoc certificate: no single genotype-entry change and no weight-row
/// re-solve improves Q by more than the relative q_tol.
bool local_optimality_scan(const ReadCountMatrix& counts,
                           const Solution& solution, const SolverConfig& cfg);

}  // namespace clonedecomp
