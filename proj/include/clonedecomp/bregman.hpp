#pragma once

#include <utility>
#include <vector>

#include "clonedecomp/core.hpp"

namespace clonedecomp {

/// Binomial in canonical form: eta = log(p/(1-p)), psi(eta) = N log(1+e^eta).
struct CanonicalBinomial {
  int total = 1;     // N
  double eta = 0.0;  // natural parameter

  double mean() const;      // N e^eta / (1+e^eta)
  double variance() const;  // N e^eta / (1+e^eta)^2
  double psi() const;       // N log(1+e^eta)
};

/// Scale parameter and IBP mass, coupled as gamma = exp(-beta*lambda_sq)
/// in the asymptotic construction. Only the identity tests use this; the
/// solver sees lambda_sq alone.
struct ScalingConfig {
  double beta = 1.0;
  double gamma = 1.0;

  static ScalingConfig coupled(double beta, double lambda_sq);
  bool is_coupled(double lambda_sq, double tol = 1e-12) const;
};

/// p clamped into [eps, 1-eps].
double clamp_vaf(double p, double eps);

/// -n log p - (N-n) log(1-p). p must lie in (0,1); clamping is the caller's
/// job. The n=0 and n=N boundary terms drop out exactly.
double binom_kernel(int n, int total, double p);

/// log C(N,n); h1(n) = -log_binom_coeff(N,n).
double log_binom_coeff(int total, int n);

/// phi(x) = x log(x/N) + (N-x) log((N-x)/N), with 0 log 0 = 0.
double binomial_phi(double x, int total);

/// d_phi(n, mu) = phi(n) - phi(mu) - (n-mu) log(mu/(N-mu)). Requires
/// 0 < mu < N; n in [0,N] with the 0 log 0 convention at the edges.
double bregman_divergence(double n, double mu, int total);

/// Binomial pmf evaluated through the Bregman factorization
/// exp{-d_phi(n, Np)} * f_phi(n), f_phi(n) = exp{phi(n) - h1(n)}.
double binom_pmf_via_bregman(int n, int total, double p);

/// (mean, variance) of the power-scaled binomial: mean is beta-invariant,
/// variance shrinks by 1/beta.
std::pair<double, double> scaled_moments(double eta, int total, double beta);

/// Log IBP density without the left-order constraint:
///   C log gamma - gamma H_S - log C! + sum_c log[(S-m_c)!(m_c-1)!/S!].
/// Any all-zero column is a domain error.
double log_ibp_prior(const GenotypeMatrix& z, double gamma);

/// Trinary variant: adds m_c1 log pi_c + (m_c - m_c1) log(1-pi_c) per column.
double log_ibp_prior(const GenotypeMatrix& z, double gamma,
                     const std::vector<double>& pi);

/// FL-means objective: sum_st binom_kernel(n, N, clamp(p_st)) + C*lambda_sq.
double objective_q(const ReadCountMatrix& counts, const GenotypeMatrix& z,
                   const WeightMatrix& w, const ModelConfig& cfg);

}  // namespace clonedecomp
