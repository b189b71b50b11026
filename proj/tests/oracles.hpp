#pragma once

// Test-only oracles, kept independent of the solver/MCMC implementation
// paths they check: kernels are written out locally, minima come from
// exhaustive enumeration plus simplex grids, and probabilities come from
// generative Monte Carlo or quadrature.

#include <cstdint>
#include <vector>

#include "clonedecomp/core.hpp"

namespace clonedecomp::oracles {

/// log C(N,n) + n log p + (N-n) log(1-p), the direct pmf route.
double direct_binom_pmf(int n, int total, double p);

/// Fit cost of one sample column for a fixed genotype assignment and weight
/// row, written out independently of bregman.cpp.
double column_cost(const ReadCountMatrix& counts, std::size_t t,
                   const std::vector<std::uint8_t>& z_rows_bits,
                   std::size_t n_features, const std::vector<double>& w_row,
                   double p0, double clamp_eps);

struct GridMinimum {
  double q = 0.0;              // penalized objective at the grid minimum
  int c = 0;                   // feature count attaining it
  double fit = 0.0;            // unpenalized part
};

/// Exhaustive minimum of the penalized objective over all binary genotype
/// matrices with up to c_max features and per-sample weight rows on a
/// simplex grid with the given resolution (coarse pass plus local
/// refinement at fine_step for C >= 2).
GridMinimum grid_min_q(const ReadCountMatrix& counts, double p0,
                       double lambda_sq, double clamp_eps, int c_max,
                       double fine_step = 1e-3);

/// Minimum of one sample's fit over a step-resolution simplex grid for a
/// fixed genotype matrix; returns the best row found.
std::pair<double, std::vector<double>> w_row_grid_min(
    const ReadCountMatrix& counts, const GenotypeMatrix& z, std::size_t t,
    double p0, double clamp_eps, double step);

/// Monte Carlo estimate of P(Z = target) under the generative buffet-process
/// construction with mass gamma and a uniform column permutation.
double ibp_mc_probability(const Grid<std::uint8_t>& target, double gamma,
                          int n_draws, std::uint64_t seed);

/// Exact agreement probabilities P(z_s = z_ref_s | counts) for a one-sample,
/// one-feature model, marginalizing the weight row over Dir(a0, a) by
/// quadrature and enumerating all 2^S genotype columns.
std::vector<double> exact_agreement_1d(const ReadCountMatrix& counts,
                                       const std::vector<std::uint8_t>& z_ref,
                                       double p0, double clamp_eps, double a0,
                                       double a, int quad_points = 20001);

}  // namespace clonedecomp::oracles
