#include "clonedecomp/calibrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "clonedecomp/rng.hpp"

namespace clonedecomp {

std::vector<double> default_lambda_ladder() {
  return {50.0, 40.0, 30.0, 20.0, 10.0, 8.0, 6.0, 4.0, 2.0};
}

CalibrationTrace calibrate_lambda(const ReadCountMatrix& counts,
                                  const SolverConfig& base_cfg,
                                  const std::vector<double>& ladder,
                                  int restarts_per_rung, unsigned parallelism,
                                  ThresholdFn threshold) {
  base_cfg.validate();
  if (ladder.empty()) throw std::invalid_argument("ladder must be nonempty");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (!(ladder[i] > 0.0))
      throw std::invalid_argument("ladder values must be positive");
    if (i > 0 && !(ladder[i] < ladder[i - 1]))
      throw std::invalid_argument("ladder must be strictly decreasing");
  }
  if (restarts_per_rung < 1)
    throw std::invalid_argument("restarts_per_rung must be >= 1");
  if (!threshold)
    threshold = [](int c_hat) { return 1.0 / static_cast<double>(c_hat); };

  CalibrationTrace trace;
  std::vector<Solution> passing;  // solutions of all-substantial rungs, in order

  for (std::size_t r = 0; r < ladder.size(); ++r) {
    SolverConfig cfg = base_cfg;
    cfg.model.lambda_sq = ladder[r];
    cfg.rng_seed = derive_seed(base_cfg.rng_seed, "rung", r);
    const RestartEnsemble ensemble =
        multi_restart(counts, cfg, restarts_per_rung, parallelism);
    const Solution& best = ensemble.best_solution();

    CalibrationRung rung;
    rung.lambda_sq = ladder[r];
    rung.c_hat = best.c_hat;
    if (best.c_hat == 0) {
      rung.min_max_weight = std::numeric_limits<double>::quiet_NaN();
      rung.all_substantial = true;  // vacuously
    } else {
      double min_max = std::numeric_limits<double>::infinity();
      for (int c = 0; c < best.c_hat; ++c) {
        double max_w = 0.0;
        for (std::size_t t = 0; t < best.w_hat.n_samples(); ++t)
          max_w = std::max(max_w, best.w_hat(t, c + 1));
        min_max = std::min(min_max, max_w);
      }
      rung.min_max_weight = min_max;
      rung.all_substantial = min_max > threshold(best.c_hat);
    }
    trace.ladder.push_back(rung);

    if (!rung.all_substantial) {
      if (r == 0) {
        trace.first_rung_failed = true;
        trace.selected_lambda_sq = ladder[0];
        trace.selected_solution = best;
        return trace;
      }
      break;
    }
    passing.push_back(best);
  }

  // last all-substantial rung with at least one feature, else the walk was
  // degenerate and the first rung is reported
  for (std::size_t i = passing.size(); i-- > 0;) {
    if (passing[i].c_hat >= 1) {
      trace.selected_lambda_sq = ladder[i];
      trace.selected_solution = passing[i];
      return trace;
    }
  }
  trace.degenerate = true;
  trace.selected_lambda_sq = ladder[0];
  trace.selected_solution = passing.front();
  return trace;
}

}  // namespace clonedecomp
