#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "clonedecomp/calibrate.hpp"
#include "clonedecomp/core.hpp"
#include "clonedecomp/simulate.hpp"
#include "clonedecomp/uncertainty.hpp"

namespace clonedecomp {

/// Malformed input with 1-based line/column (field) coordinates.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Counts travel as UTF-8 TSV with a header row:
//   snv_id <tab> n_<label> <tab> N_<label> ...
ReadCountMatrix parse_counts_tsv(std::istream& in);
ReadCountMatrix read_counts_tsv(const std::string& path);
std::string counts_to_tsv(const ReadCountMatrix& counts);

nlohmann::json solution_to_json(const Solution& solution,
                                const ModelConfig& model,
                                const std::vector<std::string>& snv_labels,
                                const std::vector<std::string>& sample_labels);
struct LoadedSolution {
  Solution solution;
  ModelConfig model;
  std::vector<std::string> snv_labels;
  std::vector<std::string> sample_labels;
};
LoadedSolution solution_from_json(const nlohmann::json& j);

nlohmann::json truth_to_json(const SimTruth& truth);
SimTruth truth_from_json(const nlohmann::json& j);

std::string genotype_csv(const GenotypeMatrix& z,
                         const std::vector<std::string>& snv_labels);
std::string histogram_csv(const std::map<int, int>& c_histogram);
std::string restart_q_csv(const RestartEnsemble& ensemble);
std::string ladder_trace_csv(const CalibrationTrace& trace);
std::string p_bar_csv(const UncertaintyMatrix& u,
                      const std::vector<std::string>& snv_labels);

/// Writes content to path via a temp file plus rename.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

/// Shortest round-trip decimal form of a double ("%.17g" trimmed).
std::string format_double(double v);

}  // namespace clonedecomp
