#include "clonedecomp/cli.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clonedecomp/calibrate.hpp"
#include "clonedecomp/io.hpp"
#include "clonedecomp/parallel.hpp"
#include "clonedecomp/simulate.hpp"
#include "clonedecomp/solver.hpp"
#include "clonedecomp/uncertainty.hpp"

namespace clonedecomp {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class PhaseTimer {
 public:
  void start(const std::string& phase) {
    finish();
    phase_ = phase;
    begin_ = std::chrono::steady_clock::now();
  }
  void finish() {
    if (phase_.empty()) return;
    const auto elapsed = std::chrono::steady_clock::now() - begin_;
    timings_[phase_] =
        std::chrono::duration<double, std::milli>(elapsed).count();
    phase_.clear();
  }
  json to_json() {
    finish();
    json j = json::object();
    for (const auto& [k, v] : timings_) j[k] = v;
    return j;
  }

 private:
  std::string phase_;
  std::chrono::steady_clock::time_point begin_;
  std::map<std::string, double> timings_;
};

struct CommonFlags {
  std::string mode = "haplotype";
  double p0 = 0.01;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: fall back to CLONEDECOMP_THREADS, then 1
  std::string out_dir;

  unsigned effective_threads() const {
    return threads > 0 ? threads : default_thread_count();
  }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_threads) {
  cmd->add_option("--mode", flags.mode, "haplotype or subclone")
      ->check(CLI::IsMember({"haplotype", "subclone"}));
  cmd->add_option("--p0", flags.p0, "background relative frequency")
      ->check(CLI::Range(1e-12, 0.999999));
  cmd->add_option("--seed", flags.seed, "base RNG seed");
  if (with_threads)
    cmd->add_option("--threads", flags.threads,
                    "restart parallelism (default CLONEDECOMP_THREADS or 1)");
  cmd->add_option("--out-dir", flags.out_dir, "output directory")->required();
}

void ensure_out_dir(const std::string& out_dir) {
  fs::create_directories(out_dir);
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// the manifest is diagnostic metadata (it carries wall-clock timings) and is
// the one output that is not byte-reproducible
void write_manifest(const std::string& out_dir, const std::string& subcommand,
                    const std::string& input, std::uint64_t seed,
                    const json& config, PhaseTimer& timer,
                    const std::vector<std::string>& outputs) {
  json manifest{{"schema", "clonedecomp.manifest/1"},
                {"tool_version", kToolVersion},
                {"subcommand", subcommand},
                {"input", input},
                {"out_dir", out_dir},
                {"seed", seed},
                {"config", config},
                {"timings_ms", timer.to_json()},
                {"outputs", outputs}};
  write_text_atomic(join_path(out_dir, "manifest.json"),
                    manifest.dump(2) + "\n");
}

int cmd_simulate(const CommonFlags& flags, std::size_t n_snvs,
                 std::size_t n_samples, int depth, double het_prob) {
  PhaseTimer timer;
  timer.start("compute");
  const GenotypeMode mode = mode_from_string(flags.mode);
  const SimData data =
      mode == GenotypeMode::haplotype
          ? simulate_haplotype(flags.seed, n_snvs, n_samples, depth, flags.p0)
          : simulate_subclone(flags.seed, n_snvs, n_samples, depth, flags.p0,
                              het_prob);
  timer.start("write");
  ensure_out_dir(flags.out_dir);
  write_text_atomic(join_path(flags.out_dir, "counts.tsv"),
                    counts_to_tsv(data.counts));
  write_text_atomic(join_path(flags.out_dir, "truth.json"),
                    truth_to_json(data.truth).dump(2) + "\n");
  timer.finish();
  write_manifest(flags.out_dir, "simulate", "", flags.seed,
                 json{{"mode", flags.mode},
                      {"snvs", n_snvs},
                      {"samples", n_samples},
                      {"depth", depth},
                      {"p0", flags.p0},
                      {"het_prob", het_prob}},
                 timer, {"counts.tsv", "truth.json"});
  return kExitOk;
}

int cmd_solve(const CommonFlags& flags, const std::string& input,
              double lambda_sq, int restarts) {
  PhaseTimer timer;
  timer.start("parse");
  const ReadCountMatrix counts = read_counts_tsv(input);
  timer.start("compute");
  SolverConfig cfg;
  cfg.model =
      make_model_config(mode_from_string(flags.mode), lambda_sq, flags.p0);
  cfg.rng_seed = flags.seed;
  const RestartEnsemble ensemble =
      multi_restart(counts, cfg, restarts, flags.effective_threads());
  const Solution& best = ensemble.best_solution();
  timer.start("write");
  ensure_out_dir(flags.out_dir);
  write_text_atomic(join_path(flags.out_dir, "solution.json"),
                    solution_to_json(best, cfg.model, counts.snv_labels(),
                                     counts.sample_labels())
                            .dump(2) +
                        "\n");
  write_text_atomic(join_path(flags.out_dir, "z_hat.csv"),
                    genotype_csv(best.z_hat, counts.snv_labels()));
  write_text_atomic(join_path(flags.out_dir, "c_histogram.csv"),
                    histogram_csv(ensemble.c_histogram));
  write_text_atomic(join_path(flags.out_dir, "restart_q.csv"),
                    restart_q_csv(ensemble));
  timer.finish();
  write_manifest(
      flags.out_dir, "solve", input, flags.seed,
      json{{"mode", flags.mode},
           {"lambda_sq", lambda_sq},
           {"p0", flags.p0},
           {"restarts", restarts},
           {"threads", flags.effective_threads()}},
      timer, {"solution.json", "z_hat.csv", "c_histogram.csv", "restart_q.csv"});
  if (!best.converged) {
    std::cerr << "warning: best solution hit max_sweeps without converging\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_calibrate(const CommonFlags& flags, const std::string& input,
                  std::vector<double> ladder, int restarts) {
  PhaseTimer timer;
  timer.start("parse");
  const ReadCountMatrix counts = read_counts_tsv(input);
  timer.start("compute");
  SolverConfig cfg;
  cfg.model = make_model_config(mode_from_string(flags.mode),
                                ladder.empty() ? 1.0 : ladder.front(),
                                flags.p0);
  cfg.rng_seed = flags.seed;
  if (ladder.empty()) ladder = default_lambda_ladder();
  const CalibrationTrace trace = calibrate_lambda(
      counts, cfg, ladder, restarts, flags.effective_threads());
  timer.start("write");
  ensure_out_dir(flags.out_dir);
  ModelConfig selected_model = cfg.model;
  selected_model.lambda_sq = trace.selected_lambda_sq;
  write_text_atomic(join_path(flags.out_dir, "ladder_trace.csv"),
                    ladder_trace_csv(trace));
  write_text_atomic(
      join_path(flags.out_dir, "solution.json"),
      solution_to_json(trace.selected_solution, selected_model,
                       counts.snv_labels(), counts.sample_labels())
              .dump(2) +
          "\n");
  write_text_atomic(
      join_path(flags.out_dir, "z_hat.csv"),
      genotype_csv(trace.selected_solution.z_hat, counts.snv_labels()));
  timer.finish();
  write_manifest(flags.out_dir, "calibrate", input, flags.seed,
                 json{{"mode", flags.mode},
                      {"ladder", ladder},
                      {"p0", flags.p0},
                      {"restarts", restarts},
                      {"threads", flags.effective_threads()},
                      {"selected_lambda_sq", trace.selected_lambda_sq},
                      {"first_rung_failed", trace.first_rung_failed},
                      {"degenerate", trace.degenerate}},
                 timer, {"ladder_trace.csv", "solution.json", "z_hat.csv"});
  if (trace.degenerate)
    std::cerr << "warning: no rung produced any feature (degenerate data)\n";
  if (trace.first_rung_failed)
    std::cerr << "warning: a weak feature already at the largest lambda_sq\n";
  if (!trace.selected_solution.converged) {
    std::cerr << "warning: selected solution hit max_sweeps\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_uncertainty(const CommonFlags& flags, const std::string& input,
                    const std::string& solution_path, int iterations,
                    int burn_in) {
  PhaseTimer timer;
  timer.start("parse");
  const ReadCountMatrix counts = read_counts_tsv(input);
  const LoadedSolution loaded =
      solution_from_json(json::parse(read_text(solution_path)));
  timer.start("compute");
  McmcConfig cfg;
  cfg.iterations = iterations;
  cfg.burn_in = burn_in;
  cfg.rng_seed = flags.seed;
  const UncertaintyMatrix u =
      conditional_mcmc(counts, loaded.solution, cfg, loaded.model);
  timer.start("write");
  ensure_out_dir(flags.out_dir);
  write_text_atomic(join_path(flags.out_dir, "p_bar.csv"),
                    p_bar_csv(u, counts.snv_labels()));
  timer.finish();
  write_manifest(flags.out_dir, "uncertainty", input, flags.seed,
                 json{{"solution", solution_path},
                      {"iterations", iterations},
                      {"burn_in", burn_in}},
                 timer, {"p_bar.csv"});
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Feature-allocation decomposition of variant read counts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  CommonFlags sim_flags, solve_flags, cal_flags, unc_flags;

  auto* sim = app.add_subcommand("simulate", "generate synthetic count data");
  std::size_t sim_snvs = 80, sim_samples = 25;
  int sim_depth = 50;
  double sim_het_prob = 0.7;
  add_common(sim, sim_flags, false);
  sim->add_option("--snvs", sim_snvs, "number of SNV rows")
      ->check(CLI::PositiveNumber);
  sim->add_option("--samples", sim_samples, "number of sample columns")
      ->check(CLI::PositiveNumber);
  sim->add_option("--depth", sim_depth, "total read count per cell")
      ->check(CLI::PositiveNumber);
  sim->add_option("--het-prob", sim_het_prob,
                  "heterozygous probability (subclone mode)")
      ->check(CLI::Range(0.0, 1.0));

  auto* solve = app.add_subcommand("solve", "multi-restart FL-means solve");
  std::string solve_input;
  double solve_lambda = 8.0;
  int solve_restarts = 100;
  solve->add_option("input", solve_input, "counts TSV")->required();
  add_common(solve, solve_flags, true);
  solve->add_option("--lambda-sq", solve_lambda, "feature penalty")
      ->check(CLI::PositiveNumber);
  solve->add_option("--restarts", solve_restarts, "number of seeded restarts")
      ->check(CLI::PositiveNumber);

  auto* cal = app.add_subcommand("calibrate", "penalty ladder calibration");
  std::string cal_input;
  std::vector<double> cal_ladder;
  int cal_restarts = 100;
  cal->add_option("input", cal_input, "counts TSV")->required();
  add_common(cal, cal_flags, true);
  cal->add_option("--ladder", cal_ladder,
                  "comma-separated decreasing lambda_sq values")
      ->delimiter(',');
  cal->add_option("--restarts", cal_restarts, "restarts per rung")
      ->check(CLI::PositiveNumber);

  auto* unc = app.add_subcommand("uncertainty", "conditional-posterior MCMC");
  std::string unc_input, unc_solution;
  int unc_iterations = 1000, unc_burn_in = 0;
  unc->add_option("input", unc_input, "counts TSV")->required();
  add_common(unc, unc_flags, false);
  unc->add_option("--solution", unc_solution, "solution JSON from solve")
      ->required();
  unc->add_option("--iterations", unc_iterations, "MCMC iterations");
  unc->add_option("--burn-in", unc_burn_in, "iterations to discard");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("clonedecomp");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(sim_flags, sim_snvs, sim_samples, sim_depth,
                          sim_het_prob);
    if (solve->parsed())
      return cmd_solve(solve_flags, solve_input, solve_lambda, solve_restarts);
    if (cal->parsed())
      return cmd_calibrate(cal_flags, cal_input, cal_ladder, cal_restarts);
    if (unc->parsed())
      return cmd_uncertainty(unc_flags, unc_input, unc_solution,
                             unc_iterations, unc_burn_in);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace clonedecomp
