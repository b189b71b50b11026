#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "clonedecomp/rng.hpp"
#include "clonedecomp/simulate.hpp"

using namespace clonedecomp;

TEST_CASE("haplotype truth has the nested block structure") {
  const SimData sim = simulate_haplotype(7);
  const auto& z = sim.truth.z_true;
  REQUIRE(z.n_features() == 4);
  REQUIRE(z.n_snvs() == 80);
  // rows 1-10 present in all four columns, rows 61-80 in none
  for (std::size_t s = 0; s < 10; ++s)
    for (std::size_t c = 0; c < 4; ++c) CHECK(z(s, c) == 1);
  for (std::size_t s = 60; s < 80; ++s)
    for (std::size_t c = 0; c < 4; ++c) CHECK(z(s, c) == 0);
  // block ends 10, 25, 40, 60
  CHECK(haplotype_block_ends(80) ==
        std::vector<std::size_t>{10, 25, 40, 60});
  CHECK(z(10, 0) == 0);
  CHECK(z(24, 1) == 1);
  CHECK(z(25, 1) == 0);
  CHECK(z(39, 2) == 1);
  CHECK(z(59, 3) == 1);
  // counts respect their bounds
  for (std::size_t s = 0; s < 80; ++s)
    for (std::size_t t = 0; t < 25; ++t) {
      CHECK(sim.counts.variant(s, t) >= 0);
      CHECK(sim.counts.variant(s, t) <= sim.counts.total(s, t));
      CHECK(sim.counts.total(s, t) == 50);
    }
}

TEST_CASE("block ends scale with the number of SNVs") {
  CHECK(haplotype_block_ends(40) == std::vector<std::size_t>{5, 13, 20, 30});
  const SimData sim = simulate_haplotype(3, 40, 6);
  CHECK(sim.truth.z_true.n_snvs() == 40);
  for (std::size_t s = 30; s < 40; ++s)
    for (std::size_t c = 0; c < 4; ++c) CHECK(sim.truth.z_true(s, c) == 0);
}

TEST_CASE("same seed reproduces the dataset bit for bit") {
  const SimData a = simulate_haplotype(99);
  const SimData b = simulate_haplotype(99);
  CHECK(a.counts == b.counts);
  CHECK(a.truth.z_true == b.truth.z_true);
  CHECK(a.truth.w_true == b.truth.w_true);
  const SimData c = simulate_haplotype(100);
  CHECK(a.counts.variant_grid() == b.counts.variant_grid());
  CHECK(!(a.counts.variant_grid() == c.counts.variant_grid()));
}

TEST_CASE("background rows match the analytic Dirichlet mean") {
  // VAF on rows outside every haplotype has mean p0 * E[w_t0], with
  // E[w_t0] = 0.2 / 22.2 under Dirichlet(0.2, perm(1,5,6,10))
  const double expected = 0.01 * (0.2 / 22.2);
  std::vector<double> sample_means;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SimData sim = simulate_haplotype(seed);
    for (std::size_t t = 0; t < 25; ++t) {
      double acc = 0.0;
      for (std::size_t s = 60; s < 80; ++s)
        acc += double(sim.counts.variant(s, t)) / sim.counts.total(s, t);
      sample_means.push_back(acc / 20.0);
    }
  }
  double mean = 0.0;
  for (double m : sample_means) mean += m;
  mean /= sample_means.size();
  double var = 0.0;
  for (double m : sample_means) var += (m - mean) * (m - mean);
  var /= (sample_means.size() - 1);
  const double se = std::sqrt(var / sample_means.size());
  CHECK(std::abs(mean - expected) <= 3.0 * se + 1e-12);
}

TEST_CASE("fully shared rows dominate background rows in every sample") {
  for (std::uint64_t seed = 200; seed < 205; ++seed) {
    const SimData sim = simulate_haplotype(seed);
    for (std::size_t t = 0; t < 25; ++t) {
      double shared = 0.0, background = 0.0;
      for (std::size_t s = 0; s < 10; ++s)
        shared += double(sim.counts.variant(s, t)) / sim.counts.total(s, t);
      for (std::size_t s = 60; s < 80; ++s)
        background +=
            double(sim.counts.variant(s, t)) / sim.counts.total(s, t);
      CHECK(shared / 10.0 > background / 20.0);
    }
  }
}

TEST_CASE("subclone lift: het_prob one reproduces the binary truth") {
  const SimData sub = simulate_subclone(55, 80, 25, 50, 0.01, 1.0);
  REQUIRE(sub.truth.z_true.mode() == GenotypeMode::subclone);
  for (std::size_t s = 0; s < 80; ++s)
    for (std::size_t c = 0; c < 4; ++c)
      CHECK(sub.truth.z_true(s, c) <= 1);  // no homozygous entries
}

TEST_CASE("subclone lift matches the het probability") {
  long het = 0, hom = 0;
  for (std::uint64_t seed = 300; seed < 320; ++seed) {
    const SimData sub = simulate_subclone(seed);
    for (std::size_t s = 0; s < 80; ++s)
      for (std::size_t c = 0; c < 4; ++c) {
        if (sub.truth.z_true(s, c) == 1) ++het;
        if (sub.truth.z_true(s, c) == 2) ++hom;
      }
  }
  const double n = static_cast<double>(het + hom);
  const double fraction = het / n;
  const double sigma = std::sqrt(0.7 * 0.3 / n);
  CHECK(std::abs(fraction - 0.7) <= 3.0 * sigma);
}

TEST_CASE("subclone expected VAF uses half dosage") {
  const SimData sub = simulate_subclone(12, 80, 5, 50, 0.01, 1.0);
  const auto p = expected_vaf(sub.truth.z_true, sub.truth.w_true, 0.01);
  // all entries heterozygous: row 0 carries every feature, so its VAF is
  // half the feature mass plus background
  for (std::size_t t = 0; t < 5; ++t) {
    double feature_mass = 0.0;
    for (std::size_t c = 1; c <= 4; ++c) feature_mass += sub.truth.w_true(t, c);
    const double expected =
        sub.truth.w_true(t, 0) * 0.01 + 0.5 * feature_mass;
    CHECK(p(0, t) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("match_columns: permuted copies match exactly") {
  const SimData sim = simulate_haplotype(5);
  const auto& z = sim.truth.z_true;
  GenotypeMatrix shuffled(GenotypeMode::haplotype,
                          Grid<std::uint8_t>(z.n_snvs(), 4));
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  for (std::size_t s = 0; s < z.n_snvs(); ++s)
    for (std::size_t c = 0; c < 4; ++c)
      shuffled.set(s, c, z(s, perm[c]));
  const auto match = match_columns(shuffled, z);
  CHECK(match.matched);
  CHECK(match.hamming == 0);
  // the assignment must invert the shuffle
  for (std::size_t c = 0; c < 4; ++c)
    CHECK(perm[static_cast<std::size_t>(match.assignment[c])] == c);
}

TEST_CASE("match_columns: single flipped bit costs one") {
  const SimData sim = simulate_haplotype(6);
  GenotypeMatrix z2 = sim.truth.z_true;
  z2.set(12, 1, z2(12, 1) == 1 ? 0 : 1);
  const auto match = match_columns(z2, sim.truth.z_true);
  CHECK(!match.matched);
  CHECK(match.hamming == 1);
}

TEST_CASE("match_columns: extra estimated column is reported unmatched") {
  const SimData sim = simulate_haplotype(8);
  GenotypeMatrix z5 = sim.truth.z_true;
  std::vector<std::uint8_t> junk(80, 0);
  junk[3] = 1;
  junk[17] = 1;
  z5.append_column(junk);
  const auto match = match_columns(z5, sim.truth.z_true);
  CHECK(!match.matched);
  CHECK(match.hamming == 0);
  CHECK(match.unmatched_estimated == 1);
  for (int c = 0; c < 4; ++c) CHECK(match.assignment[c] >= 0);
}

TEST_CASE("match_columns is invariant to joint row permutations") {
  const SimData sim = simulate_haplotype(9);
  GenotypeMatrix est = sim.truth.z_true;
  est.set(30, 2, est(30, 2) == 1 ? 0 : 1);
  est.set(55, 3, est(55, 3) == 1 ? 0 : 1);
  const auto before = match_columns(est, sim.truth.z_true);

  Rng rng(77);
  const auto perm = rng.permutation(80);
  GenotypeMatrix est_p(GenotypeMode::haplotype, Grid<std::uint8_t>(80, 4));
  GenotypeMatrix truth_p(GenotypeMode::haplotype, Grid<std::uint8_t>(80, 4));
  for (std::size_t s = 0; s < 80; ++s)
    for (std::size_t c = 0; c < 4; ++c) {
      est_p.set(s, c, est(perm[s], c));
      truth_p.set(s, c, sim.truth.z_true(perm[s], c));
    }
  const auto after = match_columns(est_p, truth_p);
  CHECK(after.hamming == before.hamming);
  CHECK(after.matched == before.matched);
}
