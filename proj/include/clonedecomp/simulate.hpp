#pragma once

#include <cstdint>
#include <vector>

#include "clonedecomp/core.hpp"

namespace clonedecomp {

/// Ground truth behind a simulated dataset.
struct SimTruth {
  GenotypeMatrix z_true;
  WeightMatrix w_true;
  double p0 = 0.01;
  int depth = 50;  // constant total read count
  std::uint64_t seed = 0;
};

struct SimData {
  ReadCountMatrix counts;
  SimTruth truth;
};

/// Four nested haplotype blocks covering the first {10,25,40,60} SNVs at
/// S=80 (scaled proportionally otherwise); per sample the weight row is
/// Dirichlet(0.2, perm(1,5,6,10)) with a fresh permutation, and counts are
/// Binomial(depth, p_st). Deterministic per seed.
SimData simulate_haplotype(std::uint64_t seed, std::size_t n_snvs = 80,
                           std::size_t n_samples = 25, int depth = 50,
                           double p0 = 0.01);

/// Same block structure with each presence lifted to heterozygous (prob
/// het_prob) or homozygous; the VAF uses half the trinary dosage.
SimData simulate_subclone(std::uint64_t seed, std::size_t n_snvs = 80,
                          std::size_t n_samples = 25, int depth = 50,
                          double p0 = 0.01, double het_prob = 0.7);

/// Column block ends used by the generators, scaled to n_snvs.
std::vector<std::size_t> haplotype_block_ends(std::size_t n_snvs);

/// Best injective column assignment between two genotype matrices under
/// total Hamming distance. Columns of the smaller side are all assigned;
/// unassigned columns are not counted.
struct ColumnMatch {
  bool matched = false;          // equal column counts and zero distance
  std::vector<int> assignment;   // truth column -> estimated column, -1 if none
  long hamming = 0;              // total over assigned pairs
  int unmatched_estimated = 0;   // estimated columns left unassigned
};

ColumnMatch match_columns(const GenotypeMatrix& estimated,
                          const GenotypeMatrix& truth);

}  // namespace clonedecomp
