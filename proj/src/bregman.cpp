#include "clonedecomp/bregman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clonedecomp {

namespace {

double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0 / static_cast<double>(i);
  return h;
}

double log_factorial(std::size_t n) {
  return std::lgamma(static_cast<double>(n) + 1.0);
}

}  // namespace

double CanonicalBinomial::mean() const {
  const double e = std::exp(eta);
  return total * e / (1.0 + e);
}

double CanonicalBinomial::variance() const {
  const double e = std::exp(eta);
  return total * e / ((1.0 + e) * (1.0 + e));
}

double CanonicalBinomial::psi() const { return total * std::log1p(std::exp(eta)); }

ScalingConfig ScalingConfig::coupled(double beta, double lambda_sq) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(lambda_sq > 0.0))
    throw std::invalid_argument("lambda_sq must be positive");
  return ScalingConfig{beta, std::exp(-beta * lambda_sq)};
}

bool ScalingConfig::is_coupled(double lambda_sq, double tol) const {
  return std::abs(gamma - std::exp(-beta * lambda_sq)) <= tol;
}

double clamp_vaf(double p, double eps) {
  return std::min(std::max(p, eps), 1.0 - eps);
}

double binom_kernel(int n, int total, double p) {
  if (n < 0 || n > total)
    throw std::domain_error("variant count outside [0, total]");
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("binom_kernel needs p in (0,1)");
  return -xlogy(n, p) - xlogy(total - n, 1.0 - p);
}

double log_binom_coeff(int total, int n) {
  if (n < 0 || n > total)
    throw std::domain_error("variant count outside [0, total]");
  return log_factorial(total) - log_factorial(n) - log_factorial(total - n);
}

double binomial_phi(double x, int total) {
  if (!(x >= 0.0 && x <= total))
    throw std::domain_error("phi argument outside [0, N]");
  const double N = total;
  return xlogy(x, x / N) + xlogy(N - x, (N - x) / N);
}

double bregman_divergence(double n, double mu, int total) {
  if (!(mu > 0.0 && mu < total))
    throw std::domain_error("bregman divergence needs mu in (0, N)");
  if (!(n >= 0.0 && n <= total))
    throw std::domain_error("bregman divergence needs n in [0, N]");
  const double grad = std::log(mu / (total - mu));
  return binomial_phi(n, total) - binomial_phi(mu, total) - (n - mu) * grad;
}

double binom_pmf_via_bregman(int n, int total, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("binom_pmf_via_bregman needs p in (0,1)");
  const double mu = total * p;
  const double h1 = -log_binom_coeff(total, n);
  const double f_phi = std::exp(binomial_phi(n, total) - h1);
  return std::exp(-bregman_divergence(n, mu, total)) * f_phi;
}

std::pair<double, double> scaled_moments(double eta, int total, double beta) {
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  const CanonicalBinomial canon{total, eta};
  return {canon.mean(), canon.variance() / beta};
}

double log_ibp_prior(const GenotypeMatrix& z, double gamma) {
  if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
  const std::size_t S = z.n_snvs();
  const std::size_t C = z.n_features();
  double logp = C * std::log(gamma) - gamma * harmonic(S) -
                log_factorial(C);
  const auto sums = z.column_sums();
  for (std::size_t c = 0; c < C; ++c) {
    const std::size_t m = sums[c];
    if (m == 0)
      throw std::domain_error("IBP density undefined for an all-zero column");
    logp += log_factorial(S - m) + log_factorial(m - 1) - log_factorial(S);
  }
  return logp;
}

double log_ibp_prior(const GenotypeMatrix& z, double gamma,
                     const std::vector<double>& pi) {
  if (z.mode() != GenotypeMode::subclone)
    throw std::invalid_argument("pi-weighted IBP prior is for subclone mode");
  if (pi.size() != z.n_features())
    throw DimensionError("features", z.n_features(), pi.size());
  double logp = log_ibp_prior(z, gamma);
  for (std::size_t c = 0; c < z.n_features(); ++c) {
    if (!(pi[c] > 0.0 && pi[c] < 1.0))
      throw std::domain_error("pi values must lie in (0,1)");
    std::size_t het = 0, nonzero = 0;
    for (std::size_t s = 0; s < z.n_snvs(); ++s) {
      if (z(s, c) > 0) ++nonzero;
      if (z(s, c) == 1) ++het;
    }
    logp += het * std::log(pi[c]) +
            (nonzero - het) * std::log(1.0 - pi[c]);
  }
  return logp;
}

double objective_q(const ReadCountMatrix& counts, const GenotypeMatrix& z,
                   const WeightMatrix& w, const ModelConfig& cfg) {
  cfg.validate();
  if (z.n_snvs() != counts.n_snvs())
    throw DimensionError("snvs", counts.n_snvs(), z.n_snvs());
  if (w.n_samples() != counts.n_samples())
    throw DimensionError("samples", counts.n_samples(), w.n_samples());
  if (z.mode() != cfg.mode)
    throw std::invalid_argument("genotype mode disagrees with the config");
  const Grid<double> p = expected_vaf(z, w, cfg.p0);
  double fit = 0.0;
  for (std::size_t s = 0; s < counts.n_snvs(); ++s)
    for (std::size_t t = 0; t < counts.n_samples(); ++t)
      fit += binom_kernel(counts.variant(s, t), counts.total(s, t),
                          clamp_vaf(p(s, t), cfg.p_clamp_eps));
  return fit + static_cast<double>(z.n_features()) * cfg.lambda_sq;
}

}  // namespace clonedecomp
