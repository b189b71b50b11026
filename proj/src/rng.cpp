#include "clonedecomp/rng.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace clonedecomp {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view stream,
                          std::uint64_t index) {
  std::uint64_t state = base ^ fnv1a(stream);
  splitmix64(state);
  state ^= index * 0x9e3779b97f4a7c15ULL;
  splitmix64(state);
  return splitmix64(state);
}

double unit_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

double Rng::uniform01() { return unit_from_bits(eng_()); }

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

int Rng::uniform_int(int lo, int hi) {
  // rejection-free modulo bias is negligible for the small ranges used here,
  // but do it properly anyway
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = eng_();
  } while (x >= limit);
  return lo + static_cast<int>(x % span);
}

bool Rng::bernoulli(double p) { return uniform01() < p; }

double Rng::normal01() {
  // Box-Muller; both uniforms drawn, second value discarded so that the
  // number of engine calls per draw is fixed
  double u1 = uniform01();
  double u2 = uniform01();
  while (u1 <= 0.0) u1 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double Rng::exponential() {
  double u = uniform01();
  while (u <= 0.0) u = uniform01();
  return -std::log(u);
}

double Rng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma shape must be > 0");
  if (shape < 1.0) {
    // boost to shape+1, then scale back (Marsaglia & Tsang)
    double u = uniform01();
    while (u <= 0.0) u = uniform01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal01();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v;
  }
}

std::vector<double> Rng::dirichlet(const std::vector<double>& alpha) {
  std::vector<double> out(alpha.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    out[i] = gamma(alpha[i]);
    sum += out[i];
  }
  if (sum <= 0.0) {
    // all gammas underflowed; fall back to the flat point
    for (double& v : out) v = 1.0 / static_cast<double>(out.size());
    return out;
  }
  for (double& v : out) v /= sum;
  return out;
}

int Rng::binomial(int trials, double p) {
  int hits = 0;
  for (int i = 0; i < trials; ++i)
    if (uniform01() < p) ++hits;
  return hits;
}

int Rng::poisson(double mean) {
  // multiplication method; fine for the small means used here
  const double limit = std::exp(-mean);
  int k = 0;
  double prod = uniform01();
  while (prod > limit) {
    ++k;
    prod *= uniform01();
  }
  return k;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> out(n);
  std::iota(out.begin(), out.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<int>(i) - 1));
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

}  // namespace clonedecomp
