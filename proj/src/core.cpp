#include "clonedecomp/core.hpp"

#include <cmath>

namespace clonedecomp {

namespace {

constexpr double kRowSumTol = 1e-9;

std::vector<std::string> default_labels(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(std::string(prefix) + std::to_string(i + 1));
  return out;
}

}  // namespace

const char* to_string(GenotypeMode mode) {
  return mode == GenotypeMode::haplotype ? "haplotype" : "subclone";
}

GenotypeMode mode_from_string(const std::string& text) {
  if (text == "haplotype") return GenotypeMode::haplotype;
  if (text == "subclone") return GenotypeMode::subclone;
  throw std::invalid_argument("unknown mode '" + text +
                              "' (expected haplotype or subclone)");
}

DimensionError::DimensionError(std::string axis, std::size_t expected,
                               std::size_t got)
    : std::invalid_argument("dimension mismatch on axis '" + axis +
                            "': expected " + std::to_string(expected) +
                            ", got " + std::to_string(got)),
      axis_(std::move(axis)) {}

ReadCountMatrix::ReadCountMatrix(Grid<int> variant, Grid<int> total,
                                 std::vector<std::string> snv_labels,
                                 std::vector<std::string> sample_labels)
    : variant_(std::move(variant)), total_(std::move(total)) {
  if (variant_.rows() == 0)
    throw std::invalid_argument("read counts need at least one SNV row");
  if (variant_.cols() == 0)
    throw std::invalid_argument("read counts need at least one sample column");
  if (total_.rows() != variant_.rows())
    throw DimensionError("snvs", variant_.rows(), total_.rows());
  if (total_.cols() != variant_.cols())
    throw DimensionError("samples", variant_.cols(), total_.cols());
  for (std::size_t s = 0; s < variant_.rows(); ++s) {
    for (std::size_t t = 0; t < variant_.cols(); ++t) {
      const int n = variant_(s, t);
      const int N = total_(s, t);
      if (N < 1)
        throw std::invalid_argument("total read count must be positive at (" +
                                    std::to_string(s) + "," +
                                    std::to_string(t) + ")");
      if (n < 0 || n > N)
        throw std::invalid_argument(
            "variant count outside [0, total] at (" + std::to_string(s) + "," +
            std::to_string(t) + ")");
    }
  }
  snv_labels_ = snv_labels.empty() ? default_labels("s", variant_.rows())
                                   : std::move(snv_labels);
  sample_labels_ = sample_labels.empty()
                       ? default_labels("t", variant_.cols())
                       : std::move(sample_labels);
  if (snv_labels_.size() != variant_.rows())
    throw DimensionError("snv_labels", variant_.rows(), snv_labels_.size());
  if (sample_labels_.size() != variant_.cols())
    throw DimensionError("sample_labels", variant_.cols(),
                         sample_labels_.size());
}

ReadCountMatrix ReadCountMatrix::permuted_rows(
    const std::vector<std::size_t>& rows) const {
  if (rows.size() != n_snvs())
    throw DimensionError("snvs", n_snvs(), rows.size());
  Grid<int> v(n_snvs(), n_samples());
  Grid<int> N(n_snvs(), n_samples());
  std::vector<std::string> labels(n_snvs());
  for (std::size_t s = 0; s < n_snvs(); ++s) {
    const std::size_t src = rows[s];
    for (std::size_t t = 0; t < n_samples(); ++t) {
      v(s, t) = variant_(src, t);
      N(s, t) = total_(src, t);
    }
    labels[s] = snv_labels_[src];
  }
  return ReadCountMatrix(std::move(v), std::move(N), std::move(labels),
                         sample_labels_);
}

GenotypeMatrix::GenotypeMatrix(GenotypeMode mode, Grid<std::uint8_t> entries)
    : mode_(mode), entries_(std::move(entries)) {
  for (std::size_t s = 0; s < entries_.rows(); ++s)
    for (std::size_t c = 0; c < entries_.cols(); ++c)
      check_value(entries_(s, c));
}

void GenotypeMatrix::check_value(std::uint8_t value) const {
  if (value > max_value())
    throw std::invalid_argument(
        std::string("genotype entry ") + std::to_string(int(value)) +
        " outside the " + to_string(mode_) + " alphabet");
}

void GenotypeMatrix::set(std::size_t s, std::size_t c, std::uint8_t value) {
  check_value(value);
  entries_(s, c) = value;
}

void GenotypeMatrix::set_row(std::size_t s,
                             const std::vector<std::uint8_t>& row) {
  if (row.size() != entries_.cols())
    throw DimensionError("features", entries_.cols(), row.size());
  for (std::uint8_t v : row) check_value(v);
  for (std::size_t c = 0; c < row.size(); ++c) entries_(s, c) = row[c];
}

void GenotypeMatrix::append_column(const std::vector<std::uint8_t>& column) {
  if (column.size() != entries_.rows())
    throw DimensionError("snvs", entries_.rows(), column.size());
  for (std::uint8_t v : column) check_value(v);
  Grid<std::uint8_t> next(entries_.rows(), entries_.cols() + 1);
  for (std::size_t s = 0; s < entries_.rows(); ++s) {
    for (std::size_t c = 0; c < entries_.cols(); ++c)
      next(s, c) = entries_(s, c);
    next(s, entries_.cols()) = column[s];
  }
  entries_ = std::move(next);
}

void GenotypeMatrix::remove_column(std::size_t c) {
  if (c >= entries_.cols())
    throw DimensionError("features", entries_.cols(), c);
  Grid<std::uint8_t> next(entries_.rows(), entries_.cols() - 1);
  for (std::size_t s = 0; s < entries_.rows(); ++s) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < entries_.cols(); ++j)
      if (j != c) next(s, out++) = entries_(s, j);
  }
  entries_ = std::move(next);
}

std::vector<std::size_t> GenotypeMatrix::column_sums() const {
  std::vector<std::size_t> sums(entries_.cols(), 0);
  for (std::size_t s = 0; s < entries_.rows(); ++s)
    for (std::size_t c = 0; c < entries_.cols(); ++c)
      if (entries_(s, c) > 0) ++sums[c];
  return sums;
}

bool GenotypeMatrix::column_is_empty(std::size_t c) const {
  for (std::size_t s = 0; s < entries_.rows(); ++s)
    if (entries_(s, c) > 0) return false;
  return true;
}

void WeightMatrix::check_row(const std::vector<double>& row) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0))
      throw std::invalid_argument("weight entries must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kRowSumTol)
    throw std::invalid_argument("weight row sums to " + std::to_string(sum) +
                                ", not 1 within 1e-9");
}

WeightMatrix::WeightMatrix(Grid<double> weights)
    : weights_(std::move(weights)) {
  if (weights_.cols() == 0)
    throw std::invalid_argument("weight matrix needs a background column");
  for (std::size_t t = 0; t < weights_.rows(); ++t) check_row(weights_.row(t));
}

WeightMatrix WeightMatrix::background_only(std::size_t n_samples) {
  return WeightMatrix(Grid<double>(n_samples, 1, 1.0));
}

void WeightMatrix::set_row(std::size_t t, const std::vector<double>& row) {
  if (row.size() != weights_.cols())
    throw DimensionError("weight columns", weights_.cols(), row.size());
  check_row(row);
  for (std::size_t c = 0; c < row.size(); ++c) weights_(t, c) = row[c];
}

void WeightMatrix::append_zero_column() {
  Grid<double> next(weights_.rows(), weights_.cols() + 1, 0.0);
  for (std::size_t t = 0; t < weights_.rows(); ++t)
    for (std::size_t c = 0; c < weights_.cols(); ++c)
      next(t, c) = weights_(t, c);
  weights_ = std::move(next);
}

void WeightMatrix::fold_column_into_background(std::size_t c) {
  if (c == 0 || c >= weights_.cols())
    throw std::invalid_argument("cannot fold column " + std::to_string(c));
  Grid<double> next(weights_.rows(), weights_.cols() - 1);
  for (std::size_t t = 0; t < weights_.rows(); ++t) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < weights_.cols(); ++j)
      if (j != c) next(t, out++) = weights_(t, j);
    next(t, 0) += weights_(t, c);
  }
  weights_ = std::move(next);
}

void ModelConfig::validate() const {
  if (!(p0 > 0.0 && p0 < 1.0))
    throw std::invalid_argument("p0 must lie in (0,1)");
  if (!(lambda_sq > 0.0))
    throw std::invalid_argument("lambda_sq must be positive");
  if (!(p_clamp_eps > 0.0 && p_clamp_eps < 0.5))
    throw std::invalid_argument("p_clamp_eps must lie in (0, 0.5)");
  if (c_max_enumerate < 1)
    throw std::invalid_argument("c_max_enumerate must be >= 1");
}

ModelConfig make_model_config(GenotypeMode mode, double lambda_sq, double p0) {
  ModelConfig cfg;
  cfg.mode = mode;
  cfg.lambda_sq = lambda_sq;
  cfg.p0 = p0;
  cfg.c_max_enumerate = mode == GenotypeMode::haplotype ? 15 : 9;
  cfg.validate();
  return cfg;
}

Grid<double> expected_vaf(const GenotypeMatrix& z, const WeightMatrix& w,
                          double p0) {
  if (w.n_features() != z.n_features())
    throw DimensionError("features", z.n_features(), w.n_features());
  const std::size_t S = z.n_snvs();
  const std::size_t T = w.n_samples();
  const std::size_t C = z.n_features();
  const double dose = z.mode() == GenotypeMode::subclone ? 0.5 : 1.0;
  Grid<double> p(S, T);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t t = 0; t < T; ++t) {
      double v = w(t, 0) * p0;
      for (std::size_t c = 0; c < C; ++c)
        v += w(t, c + 1) * (dose * z(s, c));
      p(s, t) = v;
    }
  }
  return p;
}

}  // namespace clonedecomp
