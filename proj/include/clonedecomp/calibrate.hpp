#pragma once

#include <functional>
#include <vector>

#include "clonedecomp/solver.hpp"

namespace clonedecomp {

struct CalibrationRung {
  double lambda_sq = 0.0;
  int c_hat = 0;
  double min_max_weight = 0.0;  // min over features of max over samples
  bool all_substantial = true;
};

struct CalibrationTrace {
  std::vector<CalibrationRung> ladder;
  double selected_lambda_sq = 0.0;
  Solution selected_solution;
  bool first_rung_failed = false;  // already a weak feature at the top rung
  bool degenerate = false;         // no rung produced any feature
};

/// {50, 40, 30, 20, 10, 8, 6, 4, 2}
std::vector<double> default_lambda_ladder();

using ThresholdFn = std::function<double(int c_hat)>;

/// Walks the penalty ladder downward, solving each rung by multi-restart.
/// A feature is substantial when its largest weight across samples exceeds
/// threshold(c_hat) (default 1/c_hat); the walk stops at the first rung with
/// a weak feature and the last all-substantial rung is selected.
CalibrationTrace calibrate_lambda(const ReadCountMatrix& counts,
                                  const SolverConfig& base_cfg,
                                  const std::vector<double>& ladder,
                                  int restarts_per_rung,
                                  unsigned parallelism = 1,
                                  ThresholdFn threshold = {});

}  // namespace clonedecomp
