#include "clonedecomp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "clonedecomp/bregman.hpp"
#include "clonedecomp/parallel.hpp"
#include "clonedecomp/rng.hpp"

namespace clonedecomp {

namespace {

constexpr std::size_t kMaxEnumerated = std::size_t{1} << 22;

double dose_of(GenotypeMode mode) {
  return mode == GenotypeMode::subclone ? 0.5 : 1.0;
}

double rel_scale(double q) { return std::max(1.0, std::abs(q)); }

// ---------------------------------------------------------------------------
// Per-sample fit with rows aggregated by identical genotype rows. Within a
// pattern only the summed counts matter:
//   sum_s -n log p - (N-n) log(1-p)  =  -A log p - B log(1-p).
// ---------------------------------------------------------------------------
struct PatternFit {
  std::size_t n_samples = 0;
  std::vector<std::vector<std::uint8_t>> patterns;
  std::vector<int> pattern_of_row;
  // aggregated counts, indexed [k * T + t]
  std::vector<double> var_sum;    // A
  std::vector<double> ref_sum;    // B
};

PatternFit build_pattern_fit(const ReadCountMatrix& counts,
                             const GenotypeMatrix& z) {
  const std::size_t S = counts.n_snvs();
  const std::size_t T = counts.n_samples();
  PatternFit pf;
  pf.n_samples = T;
  pf.pattern_of_row.resize(S);
  std::map<std::vector<std::uint8_t>, int> index;
  for (std::size_t s = 0; s < S; ++s) {
    auto row = z.row(s);
    auto [it, inserted] = index.try_emplace(row, int(pf.patterns.size()));
    if (inserted) pf.patterns.push_back(row);
    pf.pattern_of_row[s] = it->second;
  }
  pf.var_sum.assign(pf.patterns.size() * T, 0.0);
  pf.ref_sum.assign(pf.patterns.size() * T, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    const int k = pf.pattern_of_row[s];
    for (std::size_t t = 0; t < T; ++t) {
      pf.var_sum[k * T + t] += counts.variant(s, t);
      pf.ref_sum[k * T + t] += counts.total(s, t) - counts.variant(s, t);
    }
  }
  return pf;
}

double pattern_vaf(const std::vector<std::uint8_t>& pattern,
                   const double* w_row, double p0, double dose) {
  double p = w_row[0] * p0;
  for (std::size_t c = 0; c < pattern.size(); ++c)
    p += w_row[c + 1] * (dose * pattern[c]);
  return p;
}

// Row objective and gradient for sample t. Cells pushed outside the clamp
// window contribute a constant, so their gradient is zero.
struct RowEval {
  double fit = 0.0;
  std::vector<double> grad;
};

double eval_row_fit(const PatternFit& pf, std::size_t t,
                    const std::vector<double>& w_row, const ModelConfig& m,
                    double dose) {
  double fit = 0.0;
  const std::size_t T = pf.n_samples;
  for (std::size_t k = 0; k < pf.patterns.size(); ++k) {
    const double A = pf.var_sum[k * T + t];
    const double B = pf.ref_sum[k * T + t];
    const double p =
        clamp_vaf(pattern_vaf(pf.patterns[k], w_row.data(), m.p0, dose),
                  m.p_clamp_eps);
    if (A != 0.0) fit -= A * std::log(p);
    if (B != 0.0) fit -= B * std::log1p(-p);
  }
  return fit;
}

RowEval eval_row(const PatternFit& pf, std::size_t t,
                 const std::vector<double>& w_row, const ModelConfig& m,
                 double dose) {
  RowEval out;
  out.grad.assign(w_row.size(), 0.0);
  const std::size_t T = pf.n_samples;
  for (std::size_t k = 0; k < pf.patterns.size(); ++k) {
    const double A = pf.var_sum[k * T + t];
    const double B = pf.ref_sum[k * T + t];
    const double raw = pattern_vaf(pf.patterns[k], w_row.data(), m.p0, dose);
    const double p = clamp_vaf(raw, m.p_clamp_eps);
    if (A != 0.0) out.fit -= A * std::log(p);
    if (B != 0.0) out.fit -= B * std::log1p(-p);
    if (raw < m.p_clamp_eps || raw > 1.0 - m.p_clamp_eps) continue;
    const double dkdp = -A / p + B / (1.0 - p);
    out.grad[0] += dkdp * m.p0;
    const auto& pattern = pf.patterns[k];
    for (std::size_t c = 0; c < pattern.size(); ++c)
      if (pattern[c] != 0) out.grad[c + 1] += dkdp * (dose * pattern[c]);
  }
  return out;
}

// Projected gradient descent on the simplex with backtracking line search
// and a Frank-Wolfe-gap stopping certificate. Inner cap 200 iterations.
WRowResult pgd_w_row(const PatternFit& pf, std::size_t t,
                     std::vector<double> w_row, const ModelConfig& m,
                     double dose, double w_step_tol) {
  WRowResult res;
  if (w_row.size() == 1) {
    res.row = {1.0};
    res.fit = eval_row_fit(pf, t, res.row, m, dose);
    return res;
  }
  double step = 1.0;
  RowEval cur = eval_row(pf, t, w_row, m, dose);
  res.converged = false;
  for (int iter = 0; iter < 200; ++iter) {
    double dot_gw = 0.0;
    double min_g = cur.grad[0];
    for (std::size_t j = 0; j < w_row.size(); ++j) {
      dot_gw += cur.grad[j] * w_row[j];
      min_g = std::min(min_g, cur.grad[j]);
    }
    const double gap = dot_gw - min_g;  // bounds f(w) - f* from above
    if (gap <= 1e-12 * rel_scale(cur.fit)) {
      res.converged = true;
      break;
    }
    step = std::min(step * 4.0, 1e12);
    bool accepted = false;
    std::vector<double> trial;
    double trial_fit = 0.0;
    double movement = 0.0;
    for (int ls = 0; ls < 80; ++ls) {
      std::vector<double> shifted(w_row.size());
      for (std::size_t j = 0; j < w_row.size(); ++j)
        shifted[j] = w_row[j] - step * cur.grad[j];
      trial = project_to_simplex(std::move(shifted));
      double dist2 = 0.0;
      movement = 0.0;
      for (std::size_t j = 0; j < w_row.size(); ++j) {
        const double d = trial[j] - w_row[j];
        dist2 += d * d;
        movement += std::abs(d);
      }
      if (dist2 <= 1e-32) break;  // projection returned the same point
      trial_fit = eval_row_fit(pf, t, trial, m, dose);
      if (trial_fit <= cur.fit - 0.25 * dist2 / step) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      res.converged = true;  // no descent step at machine resolution
      break;
    }
    const double decrease = cur.fit - trial_fit;
    w_row = std::move(trial);
    cur = eval_row(pf, t, w_row, m, dose);
    cur.fit = trial_fit;
    if (movement < w_step_tol && decrease <= 1e-13 * rel_scale(trial_fit)) {
      res.converged = true;
      break;
    }
  }
  res.row = std::move(w_row);
  res.fit = eval_row_fit(pf, t, res.row, m, dose);
  return res;
}

// ---------------------------------------------------------------------------
// Genotype-row step: per-candidate VAF log tables shared across rows.
// Candidate index counts in base 2 (or 3) with column 0 as the most
// significant digit, so ascending index is ascending lexicographic order.
// ---------------------------------------------------------------------------
struct CandidateTable {
  std::size_t n_cands = 1;
  std::size_t n_samples = 0;
  int base = 2;
  std::size_t n_features = 0;
  // indexed [cand * T + t]
  std::vector<double> log_p;
  std::vector<double> log_1mp;
};

std::vector<std::uint8_t> decode_candidate(std::size_t cand, int base,
                                           std::size_t n_features) {
  std::vector<std::uint8_t> row(n_features, 0);
  for (std::size_t c = n_features; c-- > 0;) {
    row[c] = static_cast<std::uint8_t>(cand % base);
    cand /= base;
  }
  return row;
}

CandidateTable build_candidate_table(const WeightMatrix& w,
                                     const ModelConfig& m, double dose) {
  CandidateTable table;
  table.n_samples = w.n_samples();
  table.n_features = w.n_features();
  table.base = m.mode == GenotypeMode::subclone ? 3 : 2;
  table.n_cands = 1;
  for (std::size_t c = 0; c < table.n_features; ++c)
    table.n_cands *= table.base;
  table.log_p.resize(table.n_cands * table.n_samples);
  table.log_1mp.resize(table.n_cands * table.n_samples);
  for (std::size_t cand = 0; cand < table.n_cands; ++cand) {
    const auto row = decode_candidate(cand, table.base, table.n_features);
    for (std::size_t t = 0; t < table.n_samples; ++t) {
      const double p =
          clamp_vaf(pattern_vaf(row, w.row_ptr(t), m.p0, dose), m.p_clamp_eps);
      table.log_p[cand * table.n_samples + t] = std::log(p);
      table.log_1mp[cand * table.n_samples + t] = std::log1p(-p);
    }
  }
  return table;
}

std::size_t best_candidate_for_row(const CandidateTable& table,
                                   const ReadCountMatrix& counts,
                                   std::size_t s) {
  const std::size_t T = table.n_samples;
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t best = 0;
  for (std::size_t cand = 0; cand < table.n_cands; ++cand) {
    double cost = 0.0;
    const double* lp = &table.log_p[cand * T];
    const double* lq = &table.log_1mp[cand * T];
    for (std::size_t t = 0; t < T; ++t) {
      const double n = counts.variant(s, t);
      const double r = counts.total(s, t) - counts.variant(s, t);
      cost -= n * lp[t] + r * lq[t];
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = cand;
    }
  }
  return best;
}

double direct_row_cost(std::size_t s, const ReadCountMatrix& counts,
                       const std::vector<std::uint8_t>& row,
                       const WeightMatrix& w, const ModelConfig& m,
                       double dose) {
  double cost = 0.0;
  for (std::size_t t = 0; t < counts.n_samples(); ++t) {
    const double p =
        clamp_vaf(pattern_vaf(row, w.row_ptr(t), m.p0, dose), m.p_clamp_eps);
    cost += binom_kernel(counts.variant(s, t), counts.total(s, t), p);
  }
  return cost;
}

// Cyclic coordinate descent to a flip-optimal row; used above the
// enumeration cap. Ties prefer the smaller entry value.
std::vector<std::uint8_t> descend_row(std::size_t s,
                                      const ReadCountMatrix& counts,
                                      std::vector<std::uint8_t> row,
                                      const WeightMatrix& w,
                                      const ModelConfig& m, double dose) {
  const int top = m.mode == GenotypeMode::subclone ? 2 : 1;
  double cost = direct_row_cost(s, counts, row, w, m, dose);
  for (int pass = 0; pass < 200; ++pass) {
    bool changed = false;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::uint8_t original = row[c];
      std::uint8_t best_value = original;
      double best_cost = cost;
      for (int v = 0; v <= top; ++v) {
        if (v == original) continue;
        row[c] = static_cast<std::uint8_t>(v);
        const double trial = direct_row_cost(s, counts, row, w, m, dose);
        if (trial < best_cost ||
            (trial == best_cost && v < best_value)) {
          best_cost = trial;
          best_value = static_cast<std::uint8_t>(v);
        }
      }
      row[c] = best_value;
      if (best_value != original) {
        cost = best_cost;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return row;
}

// ---------------------------------------------------------------------------
// Birth step with a convexity-based rejection screen. For each sample the
// Frank-Wolfe gap at the current weights bounds the best possible fit
// improvement under the extended genotype matrix; if the total cannot beat
// the lambda_sq penalty the attempt is rejected without touching the
// weights. Cells sitting outside the clamp window get their full remaining
// kernel drop added, which keeps the bound valid where the clamped
// objective loses convexity.
// ---------------------------------------------------------------------------
struct BirthContext {
  std::vector<double> dkdp;         // [s*T + t], 0 for clamped cells
  std::vector<double> dot_gw;       // per t, over existing columns
  std::vector<double> min_grad;     // per t, over existing columns
  std::vector<double> clamp_slack;  // per t
  std::vector<double> fit;          // per t
};

BirthContext build_birth_context(const ReadCountMatrix& counts,
                                 const GenotypeMatrix& z,
                                 const WeightMatrix& w, const ModelConfig& m) {
  const std::size_t S = counts.n_snvs();
  const std::size_t T = counts.n_samples();
  const double dose = dose_of(m.mode);
  BirthContext ctx;
  ctx.dkdp.assign(S * T, 0.0);
  ctx.dot_gw.assign(T, 0.0);
  ctx.min_grad.assign(T, 0.0);
  ctx.clamp_slack.assign(T, 0.0);
  ctx.fit.assign(T, 0.0);
  const Grid<double> p = expected_vaf(z, w, m.p0);
  std::vector<std::vector<double>> grad(T,
                                        std::vector<double>(w.n_columns(), 0.0));
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      const double n = counts.variant(s, t);
      const double N = counts.total(s, t);
      const double raw = p(s, t);
      const double pc = clamp_vaf(raw, m.p_clamp_eps);
      ctx.fit[t] += binom_kernel(counts.variant(s, t), counts.total(s, t), pc);
      if (raw < m.p_clamp_eps || raw > 1.0 - m.p_clamp_eps) {
        const double best_p = clamp_vaf(n / N, m.p_clamp_eps);
        ctx.clamp_slack[t] +=
            binom_kernel(counts.variant(s, t), counts.total(s, t), pc) -
            binom_kernel(counts.variant(s, t), counts.total(s, t), best_p);
        continue;
      }
      const double d = -n / pc + (N - n) / (1.0 - pc);
      ctx.dkdp[s * T + t] = d;
      grad[t][0] += d * m.p0;
      for (std::size_t c = 0; c < z.n_features(); ++c)
        if (z(s, c) != 0) grad[t][c + 1] += d * (dose * z(s, c));
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    double dot = 0.0;
    double mn = grad[t][0];
    for (std::size_t j = 0; j < w.n_columns(); ++j) {
      dot += grad[t][j] * w(t, j);
      mn = std::min(mn, grad[t][j]);
    }
    ctx.dot_gw[t] = dot;
    ctx.min_grad[t] = mn;
  }
  return ctx;
}

struct BirthOutcome {
  bool accepted = false;
  bool w_warning = false;
};

BirthOutcome try_birth(std::size_t s, const ReadCountMatrix& counts,
                       GenotypeMatrix& z, WeightMatrix& w,
                       const SolverConfig& cfg, BirthContext& ctx) {
  const ModelConfig& m = cfg.model;
  const std::size_t T = counts.n_samples();
  const double dose = dose_of(m.mode);
  const double q_fit = std::accumulate(ctx.fit.begin(), ctx.fit.end(), 0.0);
  const double q_total =
      q_fit + static_cast<double>(z.n_features()) * m.lambda_sq;
  const double margin = cfg.q_tol * rel_scale(q_total);

  std::vector<double> row_gap(T);
  double bound = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const double g_new = ctx.dkdp[s * T + t] * dose;
    const double gap =
        ctx.dot_gw[t] - std::min(ctx.min_grad[t], g_new);
    row_gap[t] = std::max(0.0, gap) + ctx.clamp_slack[t];
    bound += row_gap[t];
  }
  BirthOutcome out;
  if (bound <= m.lambda_sq + margin) return out;

  // full evaluation: extend Z with the single-SNV column and re-solve the
  // weight rows from the zero-mass warm start. Rows whose gap bound is zero
  // are already optimal for the extended problem and keep their weights.
  GenotypeMatrix z_ext = z;
  std::vector<std::uint8_t> column(counts.n_snvs(), 0);
  column[s] = 1;
  z_ext.append_column(column);
  const PatternFit pf = build_pattern_fit(counts, z_ext);
  std::vector<std::vector<double>> rows(T);
  std::vector<double> new_fit(T);
  double fit_ext = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    if (row_gap[t] <= 1e-14 * rel_scale(ctx.fit[t])) {
      rows[t] = w.row(t);
      rows[t].push_back(0.0);
      new_fit[t] = ctx.fit[t];
      fit_ext += ctx.fit[t];
      continue;
    }
    std::vector<double> start = w.row(t);
    start.push_back(0.0);
    WRowResult r = pgd_w_row(pf, t, std::move(start), m, dose, cfg.w_step_tol);
    out.w_warning = out.w_warning || !r.converged;
    rows[t] = std::move(r.row);
    new_fit[t] = r.fit;
    fit_ext += r.fit;
  }
  const double q_ext =
      fit_ext + static_cast<double>(z_ext.n_features()) * m.lambda_sq;
  if (q_ext < q_total - margin) {
    out.accepted = true;
    z = std::move(z_ext);
    w.append_zero_column();
    for (std::size_t t = 0; t < T; ++t) w.set_row(t, rows[t]);
    ctx = build_birth_context(counts, z, w, m);
  }
  return out;
}

// Init and birth-order randomness is keyed by row/sample label so that
// permuting the input rows permutes the run.
std::uint64_t row_key(std::uint64_t seed, std::string_view stream,
                      std::uint64_t salt, const std::string& label) {
  return derive_seed(seed ^ fnv1a(label), stream, salt);
}

std::vector<std::size_t> birth_order(const ReadCountMatrix& counts,
                                     const SolverConfig& cfg, int sweep) {
  const std::size_t S = counts.n_snvs();
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(S);
  for (std::size_t s = 0; s < S; ++s)
    keyed[s] = {row_key(cfg.rng_seed, "birth", sweep, counts.snv_labels()[s]),
                s};
  if (cfg.birth_schedule == BirthSchedule::one_random_per_sweep) {
    auto it = std::min_element(keyed.begin(), keyed.end());
    return {it->second};
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> order(S);
  for (std::size_t i = 0; i < S; ++i) order[i] = keyed[i].second;
  return order;
}

}  // namespace

void SolverConfig::validate() const {
  model.validate();
  if (max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
  if (!(q_tol > 0.0)) throw std::invalid_argument("q_tol must be positive");
  if (!(w_step_tol > 0.0))
    throw std::invalid_argument("w_step_tol must be positive");
}

std::vector<double> project_to_simplex(std::vector<double> v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double tau = 0.0;
  std::size_t support = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    running += u[j];
    const double candidate = (running - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) {
      tau = candidate;
      support = j + 1;
    }
  }
  if (support == 0) {  // all mass collapses to the largest coordinate
    tau = (running - 1.0) / static_cast<double>(u.size());
  }
  for (double& x : v) x = std::max(0.0, x - tau);
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

std::vector<std::uint8_t> optimize_z_row(std::size_t s,
                                         const ReadCountMatrix& counts,
                                         const GenotypeMatrix& z,
                                         const WeightMatrix& w,
                                         const ModelConfig& cfg) {
  cfg.validate();
  if (w.n_features() != z.n_features())
    throw DimensionError("features", z.n_features(), w.n_features());
  const std::size_t C = z.n_features();
  if (C == 0) return {};
  const double dose = dose_of(cfg.mode);
  const int base = cfg.mode == GenotypeMode::subclone ? 3 : 2;
  std::size_t n_cands = 1;
  bool overflow = false;
  for (std::size_t c = 0; c < C; ++c) {
    n_cands *= base;
    if (n_cands > kMaxEnumerated) {
      overflow = true;
      break;
    }
  }
  if (C <= static_cast<std::size_t>(cfg.c_max_enumerate) && !overflow) {
    const CandidateTable table = build_candidate_table(w, cfg, dose);
    const std::size_t best = best_candidate_for_row(table, counts, s);
    return decode_candidate(best, base, C);
  }
  return descend_row(s, counts, z.row(s), w, cfg, dose);
}

WRowResult optimize_w_row(std::size_t t, const ReadCountMatrix& counts,
                          const GenotypeMatrix& z, const WeightMatrix& w,
                          const SolverConfig& cfg) {
  cfg.validate();
  if (w.n_features() != z.n_features())
    throw DimensionError("features", z.n_features(), w.n_features());
  const PatternFit pf = build_pattern_fit(counts, z);
  return pgd_w_row(pf, t, w.row(t), cfg.model, dose_of(cfg.model.mode),
                   cfg.w_step_tol);
}

bool attempt_birth(std::size_t s, const ReadCountMatrix& counts,
                   GenotypeMatrix& z, WeightMatrix& w,
                   const SolverConfig& cfg) {
  cfg.validate();
  BirthContext ctx = build_birth_context(counts, z, w, cfg.model);
  return try_birth(s, counts, z, w, cfg, ctx).accepted;
}

void prune_empty_features(GenotypeMatrix& z, WeightMatrix& w) {
  if (w.n_features() != z.n_features())
    throw DimensionError("features", z.n_features(), w.n_features());
  for (std::size_t c = z.n_features(); c-- > 0;) {
    if (z.column_is_empty(c)) {
      z.remove_column(c);
      w.fold_column_into_background(c + 1);
    }
  }
}

Solution fl_means_solve(const ReadCountMatrix& counts,
                        const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t S = counts.n_snvs();
  const std::size_t T = counts.n_samples();
  const ModelConfig& m = cfg.model;
  const double dose = dose_of(m.mode);

  // C=1 start: one Bernoulli(1/2) column, flat Dirichlet weight rows
  GenotypeMatrix z(m.mode, Grid<std::uint8_t>(S, 1, 0));
  for (std::size_t s = 0; s < S; ++s) {
    const std::uint64_t bits =
        row_key(cfg.rng_seed, "init", 0, counts.snv_labels()[s]);
    if (unit_from_bits(bits) < 0.5) z.set(s, 0, 1);
  }
  Grid<double> w0(T, 2);
  for (std::size_t t = 0; t < T; ++t) {
    Rng rng(row_key(cfg.rng_seed, "init", 1, counts.sample_labels()[t]));
    const auto row = rng.dirichlet({1.0, 1.0});
    w0(t, 0) = row[0];
    w0(t, 1) = row[1];
  }
  WeightMatrix w(std::move(w0));
  prune_empty_features(z, w);

  double q = objective_q(counts, z, w, m);
  std::vector<double> trace{q};
  bool converged = false;
  bool w_warning = false;
  int sweeps = 0;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    sweeps = sweep;
    const GenotypeMatrix z_before = z;

    // step 1: genotype rows (rows are independent given the weights)
    if (z.n_features() > 0) {
      const std::size_t C = z.n_features();
      std::size_t n_cands = 1;
      bool overflow = false;
      const int base = m.mode == GenotypeMode::subclone ? 3 : 2;
      for (std::size_t c = 0; c < C; ++c) {
        n_cands *= base;
        if (n_cands > kMaxEnumerated) {
          overflow = true;
          break;
        }
      }
      if (C <= static_cast<std::size_t>(m.c_max_enumerate) && !overflow) {
        const CandidateTable table = build_candidate_table(w, m, dose);
        for (std::size_t s = 0; s < S; ++s) {
          const std::size_t best = best_candidate_for_row(table, counts, s);
          z.set_row(s, decode_candidate(best, base, C));
        }
      } else {
        for (std::size_t s = 0; s < S; ++s)
          z.set_row(s, descend_row(s, counts, z.row(s), w, m, dose));
      }
    }

    prune_empty_features(z, w);

    // step 2: weight rows (independent given Z)
    {
      const PatternFit pf = build_pattern_fit(counts, z);
      for (std::size_t t = 0; t < T; ++t) {
        WRowResult r = pgd_w_row(pf, t, w.row(t), m, dose, cfg.w_step_tol);
        w_warning = w_warning || !r.converged;
        w.set_row(t, r.row);
      }
    }

    // step 3: births. At most one acceptance per sweep, mirroring the one
    // birth move per iteration of the base algorithm; candidates keep being
    // attempted (in seeded order) until one is accepted or all are rejected,
    // which keeps "all births rejected" well-defined for termination.
    int accepted = 0;
    {
      BirthContext ctx = build_birth_context(counts, z, w, m);
      for (std::size_t s : birth_order(counts, cfg, sweep)) {
        const BirthOutcome outcome = try_birth(s, counts, z, w, cfg, ctx);
        w_warning = w_warning || outcome.w_warning;
        if (outcome.accepted) {
          ++accepted;
          break;
        }
      }
    }

    const double q_new = objective_q(counts, z, w, m);
    trace.push_back(q_new);
    const double rel_decrease = (q - q_new) / rel_scale(q);
    q = q_new;
    if (z == z_before && accepted == 0 && rel_decrease < cfg.q_tol) {
      converged = true;
      break;
    }
  }

  Solution sol;
  sol.c_hat = static_cast<int>(z.n_features());
  sol.z_hat = std::move(z);
  sol.w_hat = std::move(w);
  sol.q_value = q;
  sol.iterations = sweeps;
  sol.seed = cfg.rng_seed;
  sol.q_trace = std::move(trace);
  sol.converged = converged;
  sol.w_warning = w_warning;
  return sol;
}

RestartEnsemble multi_restart(const ReadCountMatrix& counts,
                              const SolverConfig& cfg, int n_restarts,
                              unsigned parallelism) {
  cfg.validate();
  if (n_restarts < 1)
    throw std::invalid_argument("n_restarts must be >= 1");
  RestartEnsemble ensemble;
  ensemble.solutions.resize(n_restarts);
  parallel_for(static_cast<std::size_t>(n_restarts), parallelism,
               [&](std::size_t i) {
                 SolverConfig local = cfg;
                 local.rng_seed = derive_seed(cfg.rng_seed, "restart", i);
                 ensemble.solutions[i] = fl_means_solve(counts, local);
               });
  for (std::size_t i = 0; i < ensemble.solutions.size(); ++i) {
    ensemble.c_histogram[ensemble.solutions[i].c_hat] += 1;
    if (ensemble.solutions[i].q_value <
        ensemble.solutions[ensemble.best].q_value)
      ensemble.best = i;
  }
  return ensemble;
}

bool local_optimality_scan(const ReadCountMatrix& counts,
                           const Solution& solution,
                           const SolverConfig& cfg) {
  cfg.validate();
  const ModelConfig& m = cfg.model;
  const GenotypeMatrix& z = solution.z_hat;
  const WeightMatrix& w = solution.w_hat;
  const double dose = dose_of(m.mode);
  const double q = objective_q(counts, z, w, m);
  const double threshold = cfg.q_tol * rel_scale(q);

  // single-entry genotype changes
  const Grid<double> p = expected_vaf(z, w, m.p0);
  const int top = m.mode == GenotypeMode::subclone ? 2 : 1;
  for (std::size_t s = 0; s < counts.n_snvs(); ++s) {
    for (std::size_t c = 0; c < z.n_features(); ++c) {
      const int current = z(s, c);
      for (int v = 0; v <= top; ++v) {
        if (v == current) continue;
        double delta = 0.0;
        for (std::size_t t = 0; t < counts.n_samples(); ++t) {
          const double p_new = p(s, t) + w(t, c + 1) * dose * (v - current);
          delta += binom_kernel(counts.variant(s, t), counts.total(s, t),
                                clamp_vaf(p_new, m.p_clamp_eps)) -
                   binom_kernel(counts.variant(s, t), counts.total(s, t),
                                clamp_vaf(p(s, t), m.p_clamp_eps));
        }
        if (delta < -threshold) return false;
      }
    }
  }

  // weight-row re-solves
  const PatternFit pf = build_pattern_fit(counts, z);
  for (std::size_t t = 0; t < counts.n_samples(); ++t) {
    const double before = eval_row_fit(pf, t, w.row(t), m, dose);
    const WRowResult r =
        pgd_w_row(pf, t, w.row(t), m, dose, cfg.w_step_tol);
    if (before - r.fit > threshold) return false;
  }
  return true;
}

}  // namespace clonedecomp
