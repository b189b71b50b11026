#pragma once

#include <cstdint>
#include <vector>

#include "clonedecomp/core.hpp"

namespace clonedecomp {

struct McmcConfig {
  int iterations = 1000;
  int burn_in = 0;  // the chain starts at the MAP, so none by default
  double a0 = 1.0;  // Dirichlet prior weight of the background column
  double a = 1.0;   // Dirichlet prior weight of each feature column
  double mh_step_concentration = 100.0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Agreement probabilities p_bar[s][c] = P(z_sc equals the MAP value | C).
struct UncertaintyMatrix {
  Grid<double> p_bar;
};

/// Prior over a single genotype entry at fixed C; flat by default. Isolated
/// so an alternative fixed-C prior can be swapped in.
class GenotypeEntryPrior {
 public:
  virtual ~GenotypeEntryPrior() = default;
  virtual double log_weight(std::size_t /*feature*/, int /*value*/) const {
    return 0.0;
  }
};

/// Subclone-mode entry prior weighting heterozygous vs homozygous calls:
/// value 1 has weight pi_c, value 2 has weight 1-pi_c, value 0 is flat.
class PiWeightedPrior : public GenotypeEntryPrior {
 public:
  explicit PiWeightedPrior(std::vector<double> pi);
  double log_weight(std::size_t feature, int value) const override;

 private:
  std::vector<double> log_pi_;
  std::vector<double> log_1mpi_;
};

/// Conditional-posterior MCMC at fixed C, initialized at the MAP: Gibbs
/// updates for genotype entries and Dirichlet-proposal Metropolis-Hastings
/// for weight rows. Returns the fraction of post-burn-in sweeps on which
/// each entry equals its MAP value. Deterministic given rng_seed.
UncertaintyMatrix conditional_mcmc(const ReadCountMatrix& counts,
                                   const Solution& solution,
                                   const McmcConfig& cfg,
                                   const ModelConfig& model,
                                   const GenotypeEntryPrior* prior = nullptr);

}  // namespace clonedecomp
