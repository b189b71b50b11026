#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "clonedecomp/core.hpp"
#include "clonedecomp/io.hpp"
#include "clonedecomp/rng.hpp"

using namespace clonedecomp;

namespace {

ReadCountMatrix tiny_counts(int S, int T, int n, int N) {
  return ReadCountMatrix(Grid<int>(S, T, n), Grid<int>(S, T, N));
}

WeightMatrix weight_rows(std::size_t T, std::vector<double> row) {
  Grid<double> w(T, row.size());
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t c = 0; c < row.size(); ++c) w(t, c) = row[c];
  return WeightMatrix(std::move(w));
}

}  // namespace

TEST_CASE("expected_vaf background-only feature column") {
  GenotypeMatrix z(GenotypeMode::haplotype, Grid<std::uint8_t>(3, 1, 0));
  const auto p = expected_vaf(z, weight_rows(2, {0.4, 0.6}), 0.01);
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t t = 0; t < 2; ++t)
      CHECK(p(s, t) == doctest::Approx(0.004).epsilon(1e-12));
}

TEST_CASE("expected_vaf all-one haplotype column") {
  GenotypeMatrix z(GenotypeMode::haplotype, Grid<std::uint8_t>(4, 1, 1));
  const auto p = expected_vaf(z, weight_rows(1, {0.2, 0.8}), 0.01);
  CHECK(p(0, 0) == doctest::Approx(0.802).epsilon(1e-12));
}

TEST_CASE("expected_vaf subclone homozygous column uses half dosage") {
  GenotypeMatrix z(GenotypeMode::subclone, Grid<std::uint8_t>(2, 1, 2));
  const auto p = expected_vaf(z, weight_rows(1, {0.2, 0.8}), 0.01);
  CHECK(p(0, 0) == doctest::Approx(0.802).epsilon(1e-12));
}

TEST_CASE("expected_vaf rejects feature-count mismatch with the axis name") {
  GenotypeMatrix z(GenotypeMode::haplotype, Grid<std::uint8_t>(2, 2, 1));
  try {
    expected_vaf(z, weight_rows(1, {0.5, 0.5}), 0.01);
    FAIL("expected a DimensionError");
  } catch (const DimensionError& e) {
    CHECK(e.axis() == "features");
  }
}

TEST_CASE("expected_vaf is affine and monotone in feature weights") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t S = 3, C = 2;
    Grid<std::uint8_t> zg(S, C);
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t c = 0; c < C; ++c)
        zg(s, c) = rng.bernoulli(0.5) ? 1 : 0;
    GenotypeMatrix z(GenotypeMode::haplotype, std::move(zg));
    auto base = rng.dirichlet({1.0, 1.0, 1.0});
    const auto p0v = 0.01;
    const auto p1 = expected_vaf(z, weight_rows(1, base), p0v);
    // move mass delta from background to feature c: p must not decrease when
    // z_sc = 1, and the change must be exactly delta * (z_sc - p0)
    const double delta = 0.5 * base[0];
    for (std::size_t c = 0; c < C; ++c) {
      auto moved = base;
      moved[0] -= delta;
      moved[c + 1] += delta;
      const auto p2 = expected_vaf(z, weight_rows(1, moved), p0v);
      for (std::size_t s = 0; s < S; ++s) {
        const double expected = delta * (double(z(s, c)) - p0v);
        CHECK(p2(s, 0) - p1(s, 0) == doctest::Approx(expected).epsilon(1e-9));
        if (z(s, c) == 1) CHECK(p2(s, 0) >= p1(s, 0) - 1e-12);
      }
    }
  }
}

TEST_CASE("haplotype expected_vaf stays within [0,1] on the simplex") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t S = 4, C = 3;
    Grid<std::uint8_t> zg(S, C);
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t c = 0; c < C; ++c)
        zg(s, c) = rng.bernoulli(0.5) ? 1 : 0;
    GenotypeMatrix z(GenotypeMode::haplotype, std::move(zg));
    const auto row = rng.dirichlet({0.4, 1.0, 2.0, 0.7});
    const auto p = expected_vaf(z, weight_rows(1, row), 0.3);
    for (std::size_t s = 0; s < S; ++s) {
      CHECK(p(s, 0) >= 0.0);
      CHECK(p(s, 0) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("read count invariants") {
  CHECK_THROWS_AS(tiny_counts(1, 1, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(tiny_counts(1, 1, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(
      ReadCountMatrix(Grid<int>(2, 1, 1), Grid<int>(1, 1, 2)), DimensionError);
  const auto counts = tiny_counts(2, 3, 1, 5);
  CHECK(counts.n_snvs() == 2);
  CHECK(counts.n_samples() == 3);
  CHECK(counts.snv_labels().size() == 2);
}

TEST_CASE("genotype alphabet is enforced by mode") {
  GenotypeMatrix z(GenotypeMode::haplotype, 3);
  CHECK(z.n_features() == 0);
  z.append_column({0, 1, 0});
  CHECK_THROWS_AS(z.set(0, 0, 2), std::invalid_argument);
  GenotypeMatrix zs(GenotypeMode::subclone, 3);
  zs.append_column({0, 1, 2});
  CHECK(zs(2, 0) == 2);
  CHECK_THROWS_AS(zs.set(0, 0, 3), std::invalid_argument);
}

TEST_CASE("genotype column add/remove bookkeeping") {
  GenotypeMatrix z(GenotypeMode::haplotype, 2);
  z.append_column({1, 0});
  z.append_column({0, 1});
  CHECK(z.column_sums() == std::vector<std::size_t>{1, 1});
  z.remove_column(0);
  CHECK(z.n_features() == 1);
  CHECK(z(1, 0) == 1);
}

TEST_CASE("weight rows must sit on the simplex") {
  CHECK_THROWS_AS(weight_rows(1, {0.5, 0.6}), std::invalid_argument);
  CHECK_THROWS_AS(weight_rows(1, {-0.1, 1.1}), std::invalid_argument);
  auto w = weight_rows(2, {0.25, 0.75});
  CHECK_THROWS_AS(w.set_row(0, {0.9, 0.2}), std::invalid_argument);
  w.fold_column_into_background(1);
  CHECK(w.n_features() == 0);
  CHECK(w(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("model config validation") {
  CHECK_THROWS_AS(make_model_config(GenotypeMode::haplotype, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_model_config(GenotypeMode::haplotype, 1.0, 1.5),
                  std::invalid_argument);
  const auto hap = make_model_config(GenotypeMode::haplotype, 8.0);
  CHECK(hap.c_max_enumerate == 15);
  const auto sub = make_model_config(GenotypeMode::subclone, 8.0);
  CHECK(sub.c_max_enumerate == 9);
}

TEST_CASE("counts TSV round-trip is bit-exact") {
  Rng rng(23);
  Grid<int> variant(5, 3);
  Grid<int> total(5, 3);
  for (std::size_t s = 0; s < 5; ++s)
    for (std::size_t t = 0; t < 3; ++t) {
      total(s, t) = rng.uniform_int(1, 200);
      variant(s, t) = rng.uniform_int(0, total(s, t));
    }
  const ReadCountMatrix counts(std::move(variant), std::move(total));
  std::istringstream in(counts_to_tsv(counts));
  const ReadCountMatrix back = parse_counts_tsv(in);
  CHECK(back == counts);
}

TEST_CASE("solution JSON round-trip preserves genotype and weights bit-exactly") {
  Rng rng(31);
  Grid<std::uint8_t> zg(4, 2);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t c = 0; c < 2; ++c) zg(s, c) = rng.bernoulli(0.5);
  Grid<double> wg(3, 3);
  for (std::size_t t = 0; t < 3; ++t) {
    const auto row = rng.dirichlet({0.3, 1.7, 2.9});
    for (std::size_t c = 0; c < 3; ++c) wg(t, c) = row[c];
  }
  Solution sol;
  sol.c_hat = 2;
  sol.z_hat = GenotypeMatrix(GenotypeMode::haplotype, zg);
  sol.w_hat = WeightMatrix(wg);
  sol.q_value = 123.456789012345678;
  sol.iterations = 7;
  sol.seed = 0xdeadbeefcafef00dULL;
  sol.q_trace = {200.0, 150.5, 123.456789012345678};
  const auto model = make_model_config(GenotypeMode::haplotype, 8.0);
  const auto j = solution_to_json(sol, model, {"a", "b", "c", "d"},
                                  {"x", "y", "z"});
  const auto back = solution_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.solution.z_hat == sol.z_hat);
  CHECK(back.solution.w_hat == sol.w_hat);
  CHECK(back.solution.q_value == sol.q_value);
  CHECK(back.solution.seed == sol.seed);
  CHECK(back.model.lambda_sq == model.lambda_sq);
  CHECK(back.snv_labels == std::vector<std::string>{"a", "b", "c", "d"});
}
