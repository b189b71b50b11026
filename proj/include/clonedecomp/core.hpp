#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "clonedecomp/grid.hpp"

namespace clonedecomp {

enum class GenotypeMode { haplotype, subclone };

const char* to_string(GenotypeMode mode);
GenotypeMode mode_from_string(const std::string& text);

/// Thrown when matrix shapes disagree; carries the offending axis name.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(std::string axis, std::size_t expected, std::size_t got);
  const std::string& axis() const { return axis_; }

 private:
  std::string axis_;
};

/// Observed variant / total read counts for S SNVs across T samples.
/// Immutable after construction; safe to share read-only across workers.
class ReadCountMatrix {
 public:
  ReadCountMatrix(Grid<int> variant, Grid<int> total,
                  std::vector<std::string> snv_labels = {},
                  std::vector<std::string> sample_labels = {});

  std::size_t n_snvs() const { return variant_.rows(); }
  std::size_t n_samples() const { return variant_.cols(); }
  int variant(std::size_t s, std::size_t t) const { return variant_(s, t); }
  int total(std::size_t s, std::size_t t) const { return total_(s, t); }
  const Grid<int>& variant_grid() const { return variant_; }
  const Grid<int>& total_grid() const { return total_; }
  const std::vector<std::string>& snv_labels() const { return snv_labels_; }
  const std::vector<std::string>& sample_labels() const {
    return sample_labels_;
  }

  /// Same counts with SNV rows reordered as rows[i] = old index of new row i.
  ReadCountMatrix permuted_rows(const std::vector<std::size_t>& rows) const;

  bool operator==(const ReadCountMatrix&) const = default;

 private:
  Grid<int> variant_;
  Grid<int> total_;
  std::vector<std::string> snv_labels_;
  std::vector<std::string> sample_labels_;
};

/// Latent S x C genotype matrix. Entries are {0,1} in haplotype mode and
/// {0,1,2} in subclone mode; C may be zero.
class GenotypeMatrix {
 public:
  GenotypeMatrix() : GenotypeMatrix(GenotypeMode::haplotype, 0) {}
  GenotypeMatrix(GenotypeMode mode, std::size_t n_snvs)
      : mode_(mode), entries_(n_snvs, 0) {}
  GenotypeMatrix(GenotypeMode mode, Grid<std::uint8_t> entries);

  GenotypeMode mode() const { return mode_; }
  std::size_t n_snvs() const { return entries_.rows(); }
  std::size_t n_features() const { return entries_.cols(); }
  int max_value() const { return mode_ == GenotypeMode::haplotype ? 1 : 2; }

  std::uint8_t operator()(std::size_t s, std::size_t c) const {
    return entries_(s, c);
  }
  std::vector<std::uint8_t> row(std::size_t s) const { return entries_.row(s); }
  const Grid<std::uint8_t>& entries() const { return entries_; }

  void set(std::size_t s, std::size_t c, std::uint8_t value);
  void set_row(std::size_t s, const std::vector<std::uint8_t>& row);
  void append_column(const std::vector<std::uint8_t>& column);
  void remove_column(std::size_t c);

  std::vector<std::size_t> column_sums() const;        // #entries > 0
  bool column_is_empty(std::size_t c) const;

  bool operator==(const GenotypeMatrix&) const = default;

 private:
  void check_value(std::uint8_t value) const;

  GenotypeMode mode_;
  Grid<std::uint8_t> entries_;
};

/// T x (C+1) mixture proportions; column 0 is the background. Every row lies
/// on the probability simplex within 1e-9.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  explicit WeightMatrix(Grid<double> weights);
  static WeightMatrix background_only(std::size_t n_samples);

  std::size_t n_samples() const { return weights_.rows(); }
  std::size_t n_features() const {
    return weights_.cols() == 0 ? 0 : weights_.cols() - 1;
  }
  std::size_t n_columns() const { return weights_.cols(); }

  double operator()(std::size_t t, std::size_t c) const {
    return weights_(t, c);
  }
  std::vector<double> row(std::size_t t) const { return weights_.row(t); }
  const double* row_ptr(std::size_t t) const { return weights_.row_ptr(t); }
  const Grid<double>& grid() const { return weights_; }

  void set_row(std::size_t t, const std::vector<double>& row);
  void append_zero_column();
  /// Drops column c (c >= 1) and folds its mass into the background column.
  void fold_column_into_background(std::size_t c);

  bool operator==(const WeightMatrix&) const = default;

 private:
  static void check_row(const std::vector<double>& row);
  Grid<double> weights_;
};

struct ModelConfig {
  GenotypeMode mode = GenotypeMode::haplotype;
  double p0 = 0.01;          // background relative frequency
  double lambda_sq = 8.0;    // per-feature penalty
  // VAF floor/ceiling applied before log terms. The floor also caps how much
  // a single stray read can cost (-log eps), which keeps isolated noise
  // reads from paying for their own feature; 1e-3 sits at the sequencing
  // error scale and below the working penalty range.
  double p_clamp_eps = 1e-3;
  int c_max_enumerate = 15;  // exact genotype-row enumeration cap

  void validate() const;  // throws std::invalid_argument
};

/// ModelConfig with the mode-appropriate enumeration cap.
ModelConfig make_model_config(GenotypeMode mode, double lambda_sq,
                              double p0 = 0.01);

/// Result of one solver run.
struct Solution {
  int c_hat = 0;
  GenotypeMatrix z_hat;
  WeightMatrix w_hat;
  double q_value = 0.0;
  int iterations = 0;  // sweeps executed
  std::uint64_t seed = 0;
  std::vector<double> q_trace;
  bool converged = true;
  bool w_warning = false;  // a weight subproblem hit its iteration cap
};

/// Expected VAF matrix p[s][t]. Haplotype mode:
///   p = w_t0*p0 + sum_c w_tc*z_sc
/// Subclone mode uses half the trinary dosage:
///   p = w_t0*p0 + 0.5*sum_c w_tc*z_sc
Grid<double> expected_vaf(const GenotypeMatrix& z, const WeightMatrix& w,
                          double p0);

}  // namespace clonedecomp
