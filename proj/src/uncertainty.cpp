#include "clonedecomp/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clonedecomp/bregman.hpp"
#include "clonedecomp/rng.hpp"

namespace clonedecomp {

namespace {

constexpr double kInteriorFloor = 1e-8;     // keeps chain states off the boundary
constexpr double kProposalFloor = 0.05;     // added to every proposal concentration

double log_dirichlet_pdf(const std::vector<double>& x,
                         const std::vector<double>& alpha) {
  double sum_alpha = 0.0;
  double logp = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    sum_alpha += alpha[j];
    logp += (alpha[j] - 1.0) * std::log(x[j]) - std::lgamma(alpha[j]);
  }
  return logp + std::lgamma(sum_alpha);
}

std::vector<double> interior(std::vector<double> row) {
  double sum = 0.0;
  for (double& v : row) {
    v = std::max(v, kInteriorFloor);
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

// log-likelihood of sample t's column under weight row w (additive constants
// dropped): sum_s n log p + (N-n) log(1-p)
double column_loglik(const ReadCountMatrix& counts, const GenotypeMatrix& z,
                     const std::vector<double>& w_row, std::size_t t,
                     const ModelConfig& m, double dose) {
  double ll = 0.0;
  for (std::size_t s = 0; s < counts.n_snvs(); ++s) {
    double p = w_row[0] * m.p0;
    for (std::size_t c = 0; c < z.n_features(); ++c)
      p += w_row[c + 1] * (dose * z(s, c));
    p = clamp_vaf(p, m.p_clamp_eps);
    ll += counts.variant(s, t) * std::log(p) +
          (counts.total(s, t) - counts.variant(s, t)) * std::log1p(-p);
  }
  return ll;
}

}  // namespace

void McmcConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (burn_in < 0) throw std::invalid_argument("burn_in must be >= 0");
  if (iterations <= burn_in)
    throw std::invalid_argument("iterations must exceed burn_in");
  if (!(a0 > 0.0) || !(a > 0.0))
    throw std::invalid_argument("Dirichlet prior weights must be positive");
  if (!(mh_step_concentration > 0.0))
    throw std::invalid_argument("mh_step_concentration must be positive");
}

PiWeightedPrior::PiWeightedPrior(std::vector<double> pi) {
  log_pi_.reserve(pi.size());
  log_1mpi_.reserve(pi.size());
  for (double v : pi) {
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument("pi values must lie in (0,1)");
    log_pi_.push_back(std::log(v));
    log_1mpi_.push_back(std::log(1.0 - v));
  }
}

double PiWeightedPrior::log_weight(std::size_t feature, int value) const {
  if (feature >= log_pi_.size())
    throw std::out_of_range("pi prior has no such feature");
  if (value == 1) return log_pi_[feature];
  if (value == 2) return log_1mpi_[feature];
  return 0.0;
}

UncertaintyMatrix conditional_mcmc(const ReadCountMatrix& counts,
                                   const Solution& solution,
                                   const McmcConfig& cfg,
                                   const ModelConfig& model,
                                   const GenotypeEntryPrior* prior) {
  cfg.validate();
  model.validate();
  if (solution.c_hat < 1)
    throw std::invalid_argument(
        "conditional MCMC needs at least one feature to assess");
  const std::size_t S = counts.n_snvs();
  const std::size_t T = counts.n_samples();
  const std::size_t C = solution.z_hat.n_features();
  if (solution.z_hat.n_snvs() != S)
    throw DimensionError("snvs", S, solution.z_hat.n_snvs());
  if (solution.w_hat.n_samples() != T)
    throw DimensionError("samples", T, solution.w_hat.n_samples());
  const double dose = model.mode == GenotypeMode::subclone ? 0.5 : 1.0;
  const int top = model.mode == GenotypeMode::subclone ? 2 : 1;
  const GenotypeEntryPrior flat;
  if (prior == nullptr) prior = &flat;

  Rng rng(derive_seed(cfg.rng_seed, "mcmc"));

  GenotypeMatrix z = solution.z_hat;
  std::vector<std::vector<double>> w(T);
  for (std::size_t t = 0; t < T; ++t) w[t] = interior(solution.w_hat.row(t));

  // current expected VAFs, updated in place as entries and rows move
  Grid<double> p(S, T);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t t = 0; t < T; ++t) {
      double v = w[t][0] * model.p0;
      for (std::size_t c = 0; c < C; ++c) v += w[t][c + 1] * (dose * z(s, c));
      p(s, t) = v;
    }

  std::vector<double> prior_alpha(C + 1, cfg.a);
  prior_alpha[0] = cfg.a0;
  std::vector<double> col_ll(T);
  for (std::size_t t = 0; t < T; ++t)
    col_ll[t] = column_loglik(counts, z, w[t], t, model, dose);

  Grid<double> agree(S, C, 0.0);
  const int kept = cfg.iterations - cfg.burn_in;

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    // Gibbs pass over genotype entries; each full conditional is a small
    // discrete distribution over the entry alphabet
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t c = 0; c < C; ++c) {
        const int current = z(s, c);
        double log_weights[3];
        double max_lw = -std::numeric_limits<double>::infinity();
        for (int v = 0; v <= top; ++v) {
          double lw = prior->log_weight(c, v);
          for (std::size_t t = 0; t < T; ++t) {
            const double pv =
                clamp_vaf(p(s, t) + w[t][c + 1] * dose * (v - current),
                          model.p_clamp_eps);
            lw += counts.variant(s, t) * std::log(pv) +
                  (counts.total(s, t) - counts.variant(s, t)) *
                      std::log1p(-pv);
          }
          log_weights[v] = lw;
          max_lw = std::max(max_lw, lw);
        }
        double total = 0.0;
        for (int v = 0; v <= top; ++v) {
          log_weights[v] = std::exp(log_weights[v] - max_lw);
          total += log_weights[v];
        }
        const double u = rng.uniform01() * total;
        int drawn = top;
        double acc = 0.0;
        for (int v = 0; v <= top; ++v) {
          acc += log_weights[v];
          if (u < acc) {
            drawn = v;
            break;
          }
        }
        if (drawn != current) {
          for (std::size_t t = 0; t < T; ++t)
            p(s, t) += w[t][c + 1] * dose * (drawn - current);
          z.set(s, c, static_cast<std::uint8_t>(drawn));
        }
      }
    }
    // the Gibbs pass moved p; refresh the cached column log-likelihoods
    for (std::size_t t = 0; t < T; ++t)
      col_ll[t] = column_loglik(counts, z, w[t], t, model, dose);

    // Metropolis-Hastings pass over weight rows with a Dirichlet proposal
    // centered at the current row; the floor keeps all concentrations
    // sampleable and both proposal densities enter the ratio
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<double> alpha_fwd(C + 1);
      for (std::size_t j = 0; j <= C; ++j)
        alpha_fwd[j] = cfg.mh_step_concentration * w[t][j] + kProposalFloor;
      std::vector<double> proposal = interior(rng.dirichlet(alpha_fwd));
      std::vector<double> alpha_rev(C + 1);
      for (std::size_t j = 0; j <= C; ++j)
        alpha_rev[j] = cfg.mh_step_concentration * proposal[j] + kProposalFloor;
      const double ll_new = column_loglik(counts, z, proposal, t, model, dose);
      const double log_ratio =
          ll_new - col_ll[t] +
          log_dirichlet_pdf(proposal, prior_alpha) -
          log_dirichlet_pdf(w[t], prior_alpha) +
          log_dirichlet_pdf(w[t], alpha_rev) -
          log_dirichlet_pdf(proposal, alpha_fwd);
      const double u = rng.uniform01();
      if (std::log(std::max(u, 1e-300)) < log_ratio) {
        for (std::size_t s = 0; s < S; ++s) {
          double v = proposal[0] * model.p0;
          for (std::size_t c = 0; c < C; ++c)
            v += proposal[c + 1] * (dose * z(s, c));
          p(s, t) = v;
        }
        w[t] = std::move(proposal);
        col_ll[t] = ll_new;
      }
    }

    if (iter >= cfg.burn_in) {
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t c = 0; c < C; ++c)
          if (z(s, c) == solution.z_hat(s, c)) agree(s, c) += 1.0;
    }
  }

  UncertaintyMatrix out;
  out.p_bar = Grid<double>(S, C);
  for (std::size_t s = 0; s < S; ++s)
    for (std::size_t c = 0; c < C; ++c)
      out.p_bar(s, c) = agree(s, c) / static_cast<double>(kept);
  return out;
}

}  // namespace clonedecomp
