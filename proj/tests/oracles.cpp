#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "clonedecomp/rng.hpp"

namespace clonedecomp::oracles {

namespace {

double clampv(double p, double eps) {
  return std::min(std::max(p, eps), 1.0 - eps);
}

double cell_cost(int n, int N, double p) {
  double c = 0.0;
  if (n != 0) c -= n * std::log(p);
  if (N - n != 0) c -= (N - n) * std::log1p(-p);
  return c;
}

// enumerate grid points with (dims) nonnegative integers summing to total
void for_each_composition(int dims, int total,
                          const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> coords(dims, 0);
  std::function<void(int, int)> rec = [&](int d, int remaining) {
    if (d == dims - 1) {
      coords[d] = remaining;
      fn(coords);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      coords[d] = k;
      rec(d + 1, remaining - k);
    }
  };
  rec(0, total);
}

double logsumexp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

}  // namespace

double direct_binom_pmf(int n, int total, double p) {
  const double log_coeff = std::lgamma(total + 1.0) - std::lgamma(n + 1.0) -
                           std::lgamma(total - n + 1.0);
  double logp = log_coeff;
  if (n != 0) logp += n * std::log(p);
  if (total - n != 0) logp += (total - n) * std::log1p(-p);
  return std::exp(logp);
}

double column_cost(const ReadCountMatrix& counts, std::size_t t,
                   const std::vector<std::uint8_t>& z_rows_bits,
                   std::size_t n_features, const std::vector<double>& w_row,
                   double p0, double clamp_eps) {
  double cost = 0.0;
  for (std::size_t s = 0; s < counts.n_snvs(); ++s) {
    double p = w_row[0] * p0;
    for (std::size_t c = 0; c < n_features; ++c)
      if (z_rows_bits[s] & (1u << c)) p += w_row[c + 1];
    cost += cell_cost(counts.variant(s, t), counts.total(s, t),
                      clampv(p, clamp_eps));
  }
  return cost;
}

GridMinimum grid_min_q(const ReadCountMatrix& counts, double p0,
                       double lambda_sq, double clamp_eps, int c_max,
                       double fine_step) {
  const std::size_t S = counts.n_snvs();
  const std::size_t T = counts.n_samples();
  const int fine_div = static_cast<int>(std::lround(1.0 / fine_step));

  GridMinimum best;
  best.q = std::numeric_limits<double>::infinity();

  for (int C = 0; C <= c_max; ++C) {
    if (C == 0) {
      double fit = 0.0;
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t t = 0; t < T; ++t)
          fit += cell_cost(counts.variant(s, t), counts.total(s, t),
                           clampv(p0, clamp_eps));
      if (fit < best.q) best = GridMinimum{fit, 0, fit};
      continue;
    }

    const int n_patterns = 1 << C;
    std::size_t n_z = 1;
    for (std::size_t s = 0; s < S; ++s) n_z *= n_patterns;
    std::vector<std::vector<int>> pattern_of(n_z, std::vector<int>(S));
    for (std::size_t z = 0; z < n_z; ++z) {
      std::size_t v = z;
      for (std::size_t s = 0; s < S; ++s) {
        pattern_of[z][s] = static_cast<int>(v % n_patterns);
        v /= n_patterns;
      }
    }

    const int coarse_div = C == 1 ? fine_div : 200;
    const int ratio = fine_div / coarse_div;

    // per sample: coarse minimum and its grid point for every Z
    std::vector<std::vector<double>> fit_min(
        T, std::vector<double>(n_z, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<std::vector<int>>> argpoint(
        T, std::vector<std::vector<int>>(n_z));

    std::vector<double> pattern_lp(n_patterns), pattern_lq(n_patterns);
    std::vector<double> row_cost(S * n_patterns);

    for (std::size_t t = 0; t < T; ++t) {
      for_each_composition(C + 1, coarse_div, [&](const std::vector<int>& k) {
        const double inv = 1.0 / coarse_div;
        for (int pi = 0; pi < n_patterns; ++pi) {
          double p = k[0] * inv * p0;
          for (int c = 0; c < C; ++c)
            if (pi & (1 << c)) p += k[c + 1] * inv;
          p = clampv(p, clamp_eps);
          pattern_lp[pi] = std::log(p);
          pattern_lq[pi] = std::log1p(-p);
        }
        for (std::size_t s = 0; s < S; ++s) {
          const double n = counts.variant(s, t);
          const double r = counts.total(s, t) - counts.variant(s, t);
          for (int pi = 0; pi < n_patterns; ++pi)
            row_cost[s * n_patterns + pi] =
                -n * pattern_lp[pi] - r * pattern_lq[pi];
        }
        for (std::size_t z = 0; z < n_z; ++z) {
          double cost = 0.0;
          for (std::size_t s = 0; s < S; ++s)
            cost += row_cost[s * n_patterns + pattern_of[z][s]];
          if (cost < fit_min[t][z]) {
            fit_min[t][z] = cost;
            argpoint[t][z] = k;
          }
        }
      });

      if (ratio > 1) {
        // refine each Z's coarse argmin on the fine grid
        const int window = 4 * ratio;
        for (std::size_t z = 0; z < n_z; ++z) {
          std::vector<int> center(C + 1);
          for (int d = 0; d <= C; ++d) center[d] = argpoint[t][z][d] * ratio;
          std::vector<int> lo(C), hi(C);
          std::vector<int> k(C + 1, 0);
          std::function<void(int, int)> rec = [&](int d, int used) {
            if (d == C) {
              const int last = fine_div - used;
              if (last < 0) return;
              k[C] = last;
              // coordinates ordered (features..., background last) here;
              // evaluate with background = k[C]
              double cost = 0.0;
              const double inv = 1.0 / fine_div;
              for (int pi = 0; pi < n_patterns; ++pi) {
                double p = k[C] * inv * p0;
                for (int c = 0; c < C; ++c)
                  if (pi & (1 << c)) p += k[c] * inv;
                p = clampv(p, clamp_eps);
                pattern_lp[pi] = std::log(p);
                pattern_lq[pi] = std::log1p(-p);
              }
              for (std::size_t s = 0; s < S; ++s) {
                const double n = counts.variant(s, t);
                const double r = counts.total(s, t) - counts.variant(s, t);
                cost += -n * pattern_lp[pattern_of[z][s]] -
                        r * pattern_lq[pattern_of[z][s]];
              }
              fit_min[t][z] = std::min(fit_min[t][z], cost);
              return;
            }
            for (int v = lo[d]; v <= hi[d]; ++v) {
              k[d] = v;
              rec(d + 1, used + v);
            }
          };
          // center the feature coordinates; background takes the remainder
          std::vector<int> feat_center(C);
          for (int d = 0; d < C; ++d) feat_center[d] = center[d + 1];
          for (int d = 0; d < C; ++d) {
            lo[d] = std::max(0, feat_center[d] - window);
            hi[d] = std::min(fine_div, feat_center[d] + window);
          }
          rec(0, 0);
        }
      }
    }

    for (std::size_t z = 0; z < n_z; ++z) {
      double fit = 0.0;
      for (std::size_t t = 0; t < T; ++t) fit += fit_min[t][z];
      const double q = fit + C * lambda_sq;
      if (q < best.q) best = GridMinimum{q, C, fit};
    }
  }
  return best;
}

std::pair<double, std::vector<double>> w_row_grid_min(
    const ReadCountMatrix& counts, const GenotypeMatrix& z, std::size_t t,
    double p0, double clamp_eps, double step) {
  const int divisions = static_cast<int>(std::lround(1.0 / step));
  const std::size_t C = z.n_features();
  const double dose = z.mode() == GenotypeMode::subclone ? 0.5 : 1.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_row;
  for_each_composition(static_cast<int>(C) + 1, divisions,
                       [&](const std::vector<int>& k) {
                         std::vector<double> w(C + 1);
                         for (std::size_t j = 0; j <= C; ++j)
                           w[j] = static_cast<double>(k[j]) / divisions;
                         double cost = 0.0;
                         for (std::size_t s = 0; s < counts.n_snvs(); ++s) {
                           double p = w[0] * p0;
                           for (std::size_t c = 0; c < C; ++c)
                             p += w[c + 1] * (dose * z(s, c));
                           cost += cell_cost(counts.variant(s, t),
                                             counts.total(s, t),
                                             clampv(p, clamp_eps));
                         }
                         if (cost < best) {
                           best = cost;
                           best_row = w;
                         }
                       });
  return {best, best_row};
}

double ibp_mc_probability(const Grid<std::uint8_t>& target, double gamma,
                          int n_draws, std::uint64_t seed) {
  const std::size_t S = target.rows();
  const std::size_t C_target = target.cols();
  Rng rng(seed);
  long hits = 0;
  std::vector<std::vector<std::uint8_t>> cols;
  std::vector<int> msum;
  for (int draw = 0; draw < n_draws; ++draw) {
    cols.clear();
    msum.clear();
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        const double prob =
            static_cast<double>(msum[c]) / static_cast<double>(s + 1);
        if (rng.bernoulli(prob)) {
          cols[c][s] = 1;
          ++msum[c];
        }
      }
      const int fresh = rng.poisson(gamma / static_cast<double>(s + 1));
      for (int j = 0; j < fresh; ++j) {
        cols.emplace_back(S, 0);
        cols.back()[s] = 1;
        msum.push_back(1);
      }
    }
    if (cols.size() != C_target) continue;
    const auto perm = rng.permutation(cols.size());
    bool equal = true;
    for (std::size_t c = 0; c < C_target && equal; ++c)
      for (std::size_t s = 0; s < S; ++s)
        if (cols[perm[c]][s] != target(s, c)) {
          equal = false;
          break;
        }
    if (equal) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n_draws);
}

std::vector<double> exact_agreement_1d(const ReadCountMatrix& counts,
                                       const std::vector<std::uint8_t>& z_ref,
                                       double p0, double clamp_eps, double a0,
                                       double a, int quad_points) {
  if (counts.n_samples() != 1)
    throw std::invalid_argument("quadrature oracle handles one sample");
  const std::size_t S = counts.n_snvs();
  if (S > 16) throw std::invalid_argument("too many rows to enumerate");
  if (quad_points % 2 == 0) ++quad_points;  // Simpson needs an even interval count
  const int intervals = quad_points - 1;
  const double h = 1.0 / intervals;
  const double log_beta_norm =
      std::lgamma(a0 + a) - std::lgamma(a0) - std::lgamma(a);

  const std::size_t n_assign = std::size_t{1} << S;
  std::vector<double> log_integral(n_assign);
  std::vector<double> log_terms(quad_points);
  for (std::size_t assign = 0; assign < n_assign; ++assign) {
    for (int i = 0; i < quad_points; ++i) {
      const double w0 = i * h;
      const double w1 = 1.0 - w0;
      double ll = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        const int zs = (assign >> s) & 1;
        const double p = clampv(w0 * p0 + w1 * zs, clamp_eps);
        const int n = counts.variant(s, 0);
        const int N = counts.total(s, 0);
        if (n != 0) ll += n * std::log(p);
        if (N - n != 0) ll += (N - n) * std::log1p(-p);
      }
      double log_prior = log_beta_norm;
      if (a0 != 1.0) log_prior += (a0 - 1.0) * std::log(std::max(w0, 1e-300));
      if (a != 1.0) log_prior += (a - 1.0) * std::log(std::max(w1, 1e-300));
      const double simpson =
          (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      log_terms[i] = ll + log_prior + std::log(simpson * h / 3.0);
    }
    log_integral[assign] = logsumexp(log_terms);
  }
  const double log_z = logsumexp(log_integral);

  std::vector<double> agreement(S, 0.0);
  for (std::size_t assign = 0; assign < n_assign; ++assign) {
    const double post = std::exp(log_integral[assign] - log_z);
    for (std::size_t s = 0; s < S; ++s)
      if (((assign >> s) & 1) == z_ref[s]) agreement[s] += post;
  }
  return agreement;
}

}  // namespace clonedecomp::oracles
