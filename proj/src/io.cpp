#include "clonedecomp/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace clonedecomp {

using nlohmann::json;

namespace {

constexpr const char* kSolutionSchema = "clonedecomp.solution/1";
constexpr const char* kTruthSchema = "clonedecomp.truth/1";

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_count(const std::string& field, std::size_t line,
                std::size_t column) {
  if (field.empty()) throw ParseError("empty count field", line, column);
  std::size_t consumed = 0;
  long value = 0;
  try {
    value = std::stol(field, &consumed);
  } catch (const std::exception&) {
    throw ParseError("'" + field + "' is not an integer", line, column);
  }
  if (consumed != field.size())
    throw ParseError("'" + field + "' is not an integer", line, column);
  if (value < 0) throw ParseError("negative count", line, column);
  if (value > INT32_MAX) throw ParseError("count too large", line, column);
  return static_cast<int>(value);
}

json grid_to_json(const Grid<std::uint8_t>& g) {
  json rows = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(int(g(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json grid_to_json(const Grid<double>& g) {
  json rows = json::array();
  for (std::size_t r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Grid<std::uint8_t> genotype_grid_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  Grid<std::uint8_t> g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      g(r, c) = static_cast<std::uint8_t>(j.at(r).at(c).get<int>());
  return g;
}

Grid<double> double_grid_from_json(const json& j) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  Grid<double> g(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) g(r, c) = j.at(r).at(c).get<double>();
  return g;
}

json model_to_json(const ModelConfig& m) {
  return json{{"mode", to_string(m.mode)},
              {"p0", m.p0},
              {"lambda_sq", m.lambda_sq},
              {"p_clamp_eps", m.p_clamp_eps},
              {"c_max_enumerate", m.c_max_enumerate}};
}

ModelConfig model_from_json(const json& j) {
  ModelConfig m;
  m.mode = mode_from_string(j.at("mode").get<std::string>());
  m.p0 = j.at("p0").get<double>();
  m.lambda_sq = j.at("lambda_sq").get<double>();
  m.p_clamp_eps = j.at("p_clamp_eps").get<double>();
  m.c_max_enumerate = j.at("c_max_enumerate").get<int>();
  m.validate();
  return m;
}

}  // namespace

ParseError::ParseError(const std::string& what, std::size_t line,
                       std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

ReadCountMatrix parse_counts_tsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header row", 1, 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_tabs(line);
  if (header.empty() || header[0] != "snv_id")
    throw ParseError("header must start with 'snv_id'", 1, 1);
  if (header.size() < 3 || (header.size() - 1) % 2 != 0)
    throw ParseError("header needs n_<label>/N_<label> column pairs", 1,
                     header.size());
  std::vector<std::string> samples;
  for (std::size_t i = 1; i < header.size(); i += 2) {
    if (header[i].rfind("n_", 0) != 0)
      throw ParseError("expected an n_<label> column", 1, i + 1);
    if (header[i + 1].rfind("N_", 0) != 0)
      throw ParseError("expected an N_<label> column", 1, i + 2);
    const std::string label = header[i].substr(2);
    if (label != header[i + 1].substr(2))
      throw ParseError("n/N labels disagree: '" + label + "' vs '" +
                           header[i + 1].substr(2) + "'",
                       1, i + 2);
    samples.push_back(label);
  }
  const std::size_t T = samples.size();
  std::vector<std::string> snvs;
  std::vector<int> variant_flat;
  std::vector<int> total_flat;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 1 + 2 * T)
      throw ParseError("expected " + std::to_string(1 + 2 * T) +
                           " fields, got " + std::to_string(fields.size()),
                       line_no, fields.size());
    snvs.push_back(fields[0]);
    for (std::size_t t = 0; t < T; ++t) {
      const int n = parse_count(fields[1 + 2 * t], line_no, 2 + 2 * t);
      const int N = parse_count(fields[2 + 2 * t], line_no, 3 + 2 * t);
      if (N < 1) throw ParseError("total count must be positive", line_no,
                                  3 + 2 * t);
      if (n > N)
        throw ParseError("variant count exceeds total", line_no, 2 + 2 * t);
      variant_flat.push_back(n);
      total_flat.push_back(N);
    }
  }
  if (snvs.empty()) throw ParseError("no data rows", line_no + 1, 1);
  Grid<int> variant(snvs.size(), T);
  Grid<int> total(snvs.size(), T);
  for (std::size_t s = 0; s < snvs.size(); ++s)
    for (std::size_t t = 0; t < T; ++t) {
      variant(s, t) = variant_flat[s * T + t];
      total(s, t) = total_flat[s * T + t];
    }
  return ReadCountMatrix(std::move(variant), std::move(total), std::move(snvs),
                         std::move(samples));
}

ReadCountMatrix read_counts_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_counts_tsv(in);
}

std::string counts_to_tsv(const ReadCountMatrix& counts) {
  std::ostringstream out;
  out << "snv_id";
  for (const auto& label : counts.sample_labels())
    out << "\tn_" << label << "\tN_" << label;
  out << '\n';
  for (std::size_t s = 0; s < counts.n_snvs(); ++s) {
    out << counts.snv_labels()[s];
    for (std::size_t t = 0; t < counts.n_samples(); ++t)
      out << '\t' << counts.variant(s, t) << '\t' << counts.total(s, t);
    out << '\n';
  }
  return out.str();
}

json solution_to_json(const Solution& solution, const ModelConfig& model,
                      const std::vector<std::string>& snv_labels,
                      const std::vector<std::string>& sample_labels) {
  return json{{"schema", kSolutionSchema},
              {"model", model_to_json(model)},
              {"c_hat", solution.c_hat},
              {"q_value", solution.q_value},
              {"iterations", solution.iterations},
              {"converged", solution.converged},
              {"w_warning", solution.w_warning},
              {"seed", solution.seed},
              {"q_trace", solution.q_trace},
              {"z", grid_to_json(solution.z_hat.entries())},
              {"w", grid_to_json(solution.w_hat.grid())},
              {"snv_labels", snv_labels},
              {"sample_labels", sample_labels}};
}

LoadedSolution solution_from_json(const json& j) {
  if (j.value("schema", "") != kSolutionSchema)
    throw std::runtime_error("unknown solution schema '" +
                             j.value("schema", "") + "'");
  LoadedSolution out;
  out.model = model_from_json(j.at("model"));
  out.solution.c_hat = j.at("c_hat").get<int>();
  out.solution.q_value = j.at("q_value").get<double>();
  out.solution.iterations = j.at("iterations").get<int>();
  out.solution.converged = j.at("converged").get<bool>();
  out.solution.w_warning = j.value("w_warning", false);
  out.solution.seed = j.at("seed").get<std::uint64_t>();
  out.solution.q_trace = j.at("q_trace").get<std::vector<double>>();
  Grid<std::uint8_t> z = genotype_grid_from_json(j.at("z"));
  if (z.cols() == 0) {
    // a C=0 solution still knows its row count from the labels
    z = Grid<std::uint8_t>(j.at("snv_labels").size(), 0);
  }
  out.solution.z_hat = GenotypeMatrix(out.model.mode, std::move(z));
  out.solution.w_hat = WeightMatrix(double_grid_from_json(j.at("w")));
  out.snv_labels = j.at("snv_labels").get<std::vector<std::string>>();
  out.sample_labels = j.at("sample_labels").get<std::vector<std::string>>();
  return out;
}

json truth_to_json(const SimTruth& truth) {
  return json{{"schema", kTruthSchema},
              {"mode", to_string(truth.z_true.mode())},
              {"p0", truth.p0},
              {"depth", truth.depth},
              {"seed", truth.seed},
              {"z_true", grid_to_json(truth.z_true.entries())},
              {"w_true", grid_to_json(truth.w_true.grid())}};
}

SimTruth truth_from_json(const json& j) {
  if (j.value("schema", "") != kTruthSchema)
    throw std::runtime_error("unknown truth schema '" + j.value("schema", "") +
                             "'");
  SimTruth truth;
  const GenotypeMode mode = mode_from_string(j.at("mode").get<std::string>());
  truth.z_true = GenotypeMatrix(mode, genotype_grid_from_json(j.at("z_true")));
  truth.w_true = WeightMatrix(double_grid_from_json(j.at("w_true")));
  truth.p0 = j.at("p0").get<double>();
  truth.depth = j.at("depth").get<int>();
  truth.seed = j.at("seed").get<std::uint64_t>();
  return truth;
}

std::string genotype_csv(const GenotypeMatrix& z,
                         const std::vector<std::string>& snv_labels) {
  std::ostringstream out;
  out << "snv_id";
  for (std::size_t c = 0; c < z.n_features(); ++c) out << ",feature" << c + 1;
  out << '\n';
  for (std::size_t s = 0; s < z.n_snvs(); ++s) {
    out << snv_labels[s];
    for (std::size_t c = 0; c < z.n_features(); ++c)
      out << ',' << int(z(s, c));
    out << '\n';
  }
  return out.str();
}

std::string histogram_csv(const std::map<int, int>& c_histogram) {
  std::ostringstream out;
  out << "c_hat,count\n";
  for (const auto& [c, count] : c_histogram) out << c << ',' << count << '\n';
  return out.str();
}

std::string restart_q_csv(const RestartEnsemble& ensemble) {
  std::ostringstream out;
  out << "restart,seed,c_hat,q_value,iterations,converged\n";
  for (std::size_t i = 0; i < ensemble.solutions.size(); ++i) {
    const Solution& s = ensemble.solutions[i];
    out << i << ',' << s.seed << ',' << s.c_hat << ','
        << format_double(s.q_value) << ',' << s.iterations << ','
        << (s.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string ladder_trace_csv(const CalibrationTrace& trace) {
  std::ostringstream out;
  out << "lambda_sq,c_hat,min_max_weight,all_substantial\n";
  for (const auto& rung : trace.ladder)
    out << format_double(rung.lambda_sq) << ',' << rung.c_hat << ','
        << format_double(rung.min_max_weight) << ','
        << (rung.all_substantial ? 1 : 0) << '\n';
  return out.str();
}

std::string p_bar_csv(const UncertaintyMatrix& u,
                      const std::vector<std::string>& snv_labels) {
  std::ostringstream out;
  out << "snv_id";
  for (std::size_t c = 0; c < u.p_bar.cols(); ++c) out << ",feature" << c + 1;
  out << '\n';
  for (std::size_t s = 0; s < u.p_bar.rows(); ++s) {
    out << snv_labels[s];
    for (std::size_t c = 0; c < u.p_bar.cols(); ++c)
      out << ',' << format_double(u.p_bar(s, c));
    out << '\n';
  }
  return out.str();
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string format_double(double v) {
  char buffer[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof(buffer), "%.*g", precision, v);
    if (std::strtod(buffer, nullptr) == v) break;
  }
  return buffer;
}

}  // namespace clonedecomp
