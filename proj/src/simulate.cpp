#include "clonedecomp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "clonedecomp/rng.hpp"

namespace clonedecomp {

namespace {

constexpr double kFeatureConcentration[4] = {1.0, 5.0, 6.0, 10.0};
constexpr double kBackgroundConcentration = 0.2;

std::vector<std::string> numbered(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::string(prefix) + std::to_string(i + 1));
  return out;
}

GenotypeMatrix block_genotypes(GenotypeMode mode, std::size_t n_snvs) {
  const auto ends = haplotype_block_ends(n_snvs);
  Grid<std::uint8_t> z(n_snvs, ends.size(), 0);
  for (std::size_t c = 0; c < ends.size(); ++c)
    for (std::size_t s = 0; s < ends[c]; ++s) z(s, c) = 1;
  return GenotypeMatrix(mode, std::move(z));
}

WeightMatrix draw_weights(Rng& rng, std::size_t n_samples) {
  Grid<double> w(n_samples, 5);
  for (std::size_t t = 0; t < n_samples; ++t) {
    const auto perm = rng.permutation(4);
    std::vector<double> alpha{kBackgroundConcentration};
    for (std::size_t c = 0; c < 4; ++c)
      alpha.push_back(kFeatureConcentration[perm[c]]);
    const auto row = rng.dirichlet(alpha);
    for (std::size_t c = 0; c < 5; ++c) w(t, c) = row[c];
  }
  return WeightMatrix(std::move(w));
}

SimData finish(Rng& rng, GenotypeMatrix z, WeightMatrix w, std::uint64_t seed,
               std::size_t n_snvs, std::size_t n_samples, int depth,
               double p0) {
  const Grid<double> p = expected_vaf(z, w, p0);
  Grid<int> variant(n_snvs, n_samples);
  Grid<int> total(n_snvs, n_samples, depth);
  for (std::size_t s = 0; s < n_snvs; ++s)
    for (std::size_t t = 0; t < n_samples; ++t)
      variant(s, t) = rng.binomial(depth, p(s, t));
  ReadCountMatrix counts(std::move(variant), std::move(total),
                         numbered("snv", n_snvs), numbered("sample", n_samples));
  SimTruth truth{std::move(z), std::move(w), p0, depth, seed};
  return SimData{std::move(counts), std::move(truth)};
}

}  // namespace

std::vector<std::size_t> haplotype_block_ends(std::size_t n_snvs) {
  if (n_snvs < 1) throw std::invalid_argument("need at least one SNV");
  const double scale = static_cast<double>(n_snvs) / 80.0;
  std::vector<std::size_t> ends;
  for (double canonical : {10.0, 25.0, 40.0, 60.0}) {
    const auto end = static_cast<std::size_t>(std::llround(canonical * scale));
    ends.push_back(std::min(std::max<std::size_t>(end, 1), n_snvs));
  }
  return ends;
}

SimData simulate_haplotype(std::uint64_t seed, std::size_t n_snvs,
                           std::size_t n_samples, int depth, double p0) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  Rng rng(derive_seed(seed, "sim"));
  GenotypeMatrix z = block_genotypes(GenotypeMode::haplotype, n_snvs);
  WeightMatrix w = draw_weights(rng, n_samples);
  return finish(rng, std::move(z), std::move(w), seed, n_snvs, n_samples,
                depth, p0);
}

SimData simulate_subclone(std::uint64_t seed, std::size_t n_snvs,
                          std::size_t n_samples, int depth, double p0,
                          double het_prob) {
  if (n_samples < 1) throw std::invalid_argument("need at least one sample");
  if (depth < 1) throw std::invalid_argument("depth must be positive");
  if (!(het_prob >= 0.0 && het_prob <= 1.0))
    throw std::invalid_argument("het_prob must lie in [0,1]");
  Rng rng(derive_seed(seed, "sim"));
  const GenotypeMatrix binary = block_genotypes(GenotypeMode::subclone, n_snvs);
  GenotypeMatrix z(GenotypeMode::subclone,
                   Grid<std::uint8_t>(n_snvs, binary.n_features(), 0));
  for (std::size_t s = 0; s < n_snvs; ++s)
    for (std::size_t c = 0; c < binary.n_features(); ++c)
      if (binary(s, c) != 0)
        z.set(s, c, rng.bernoulli(het_prob) ? 1 : 2);
  WeightMatrix w = draw_weights(rng, n_samples);
  return finish(rng, std::move(z), std::move(w), seed, n_snvs, n_samples,
                depth, p0);
}

namespace {

long column_hamming(const GenotypeMatrix& a, std::size_t ca,
                    const GenotypeMatrix& b, std::size_t cb) {
  long d = 0;
  for (std::size_t s = 0; s < a.n_snvs(); ++s)
    if (a(s, ca) != b(s, cb)) ++d;
  return d;
}

// branch-and-bound over injective assignments of truth columns to estimated
// columns; skips are allowed only when the estimated side is smaller
void assign_columns(const std::vector<std::vector<long>>& dist,
                    std::size_t truth_col, int skips_left, long cost_so_far,
                    std::vector<int>& current, std::vector<bool>& used,
                    long& best_cost, std::vector<int>& best) {
  const std::size_t n_truth = dist.size();
  if (cost_so_far >= best_cost) return;
  if (truth_col == n_truth) {
    best_cost = cost_so_far;
    best = current;
    return;
  }
  const std::size_t n_est = dist[0].size();
  for (std::size_t e = 0; e < n_est; ++e) {
    if (used[e]) continue;
    used[e] = true;
    current[truth_col] = static_cast<int>(e);
    assign_columns(dist, truth_col + 1, skips_left,
                   cost_so_far + dist[truth_col][e], current, used, best_cost,
                   best);
    used[e] = false;
  }
  if (skips_left > 0) {
    current[truth_col] = -1;
    assign_columns(dist, truth_col + 1, skips_left - 1, cost_so_far, current,
                   used, best_cost, best);
  }
  current[truth_col] = -1;
}

}  // namespace

ColumnMatch match_columns(const GenotypeMatrix& estimated,
                          const GenotypeMatrix& truth) {
  if (estimated.n_snvs() != truth.n_snvs())
    throw DimensionError("snvs", truth.n_snvs(), estimated.n_snvs());
  const std::size_t n_truth = truth.n_features();
  const std::size_t n_est = estimated.n_features();
  ColumnMatch out;
  out.assignment.assign(n_truth, -1);
  if (n_truth == 0 || n_est == 0) {
    out.matched = n_truth == n_est;
    out.unmatched_estimated = static_cast<int>(n_est);
    return out;
  }
  std::vector<std::vector<long>> dist(n_truth, std::vector<long>(n_est));
  for (std::size_t i = 0; i < n_truth; ++i)
    for (std::size_t e = 0; e < n_est; ++e)
      dist[i][e] = column_hamming(truth, i, estimated, e);
  const int skips = static_cast<int>(
      n_truth > n_est ? n_truth - n_est : 0);
  std::vector<int> current(n_truth, -1);
  std::vector<bool> used(n_est, false);
  long best_cost = std::numeric_limits<long>::max();
  assign_columns(dist, 0, skips, 0, current, used, best_cost, out.assignment);
  out.hamming = best_cost;
  std::size_t assigned = 0;
  for (int e : out.assignment)
    if (e >= 0) ++assigned;
  out.unmatched_estimated = static_cast<int>(n_est - assigned);
  out.matched = (n_truth == n_est) && best_cost == 0;
  return out;
}

}  // namespace clonedecomp
