#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace clonedecomp {

/// splitmix64 step; also the mixer behind seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

/// FNV-1a hash of a string, used to key randomness by row/sample label.
std::uint64_t fnv1a(std::string_view text);

/// Derives an independent stream seed from a base seed, a stream name and an
/// index. Same inputs always give the same seed.
std::uint64_t derive_seed(std::uint64_t base, std::string_view stream,
                          std::uint64_t index = 0);

/// One uniform in [0,1) straight from a 64-bit word.
double unit_from_bits(std::uint64_t bits);

/// mt19937_64 engine with hand-rolled distributions. The std:: distribution
/// adaptors are implementation-defined, so all sampling logic lives here and
/// draws are reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }
  double uniform01();  // [0,1)
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
  bool bernoulli(double p);
  double normal01();
  double gamma(double shape);  // unit scale
  double exponential();
  std::vector<double> dirichlet(const std::vector<double>& alpha);
  int binomial(int trials, double p);
  int poisson(double mean);
  std::vector<std::size_t> permutation(std::size_t n);

 private:
  std::mt19937_64 eng_;
};

}  // namespace clonedecomp
