#include "bsg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bsg {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

nlohmann::json graph_to_json(const GraphRecord& rec) {
  json j;
  j["n"] = rec.n;
  std::vector<double> w(static_cast<std::size_t>(rec.n) * rec.n);
  for (int i = 0; i < rec.n; ++i) {
    for (int k = 0; k < rec.n; ++k) w[static_cast<std::size_t>(i) * rec.n + k] = rec.W(i, k);
  }
  j["W"] = w;
  if (rec.beta) {
    j["beta"] = std::vector<int>(rec.beta->data(), rec.beta->data() + rec.beta->size());
  }
  if (rec.rho) {
    j["rho"] = std::vector<double>(rec.rho->data(), rec.rho->data() + rec.rho->size());
  }
  if (rec.sweeps) j["sweeps"] = *rec.sweeps;
  if (rec.lambda_min) j["lambda_min"] = *rec.lambda_min;
  if (!rec.warnings.empty()) j["warnings"] = rec.warnings;
  return j;
}

GraphRecord graph_from_json(const nlohmann::json& j) {
  GraphRecord rec;
  rec.n = j.at("n").get<int>();
  if (rec.n < 0) throw std::invalid_argument("graph json: negative n");
  const auto w = j.at("W").get<std::vector<double>>();
  if (w.size() != static_cast<std::size_t>(rec.n) * rec.n) {
    throw std::invalid_argument("graph json: W has wrong length");
  }
  rec.W.resize(rec.n, rec.n);
  for (int i = 0; i < rec.n; ++i) {
    for (int k = 0; k < rec.n; ++k) rec.W(i, k) = w[static_cast<std::size_t>(i) * rec.n + k];
  }
  if (j.contains("beta")) {
    const auto b = j.at("beta").get<std::vector<int>>();
    if (b.size() != static_cast<std::size_t>(rec.n)) {
      throw std::invalid_argument("graph json: beta has wrong length");
    }
    PolarityVector beta(rec.n);
    for (int i = 0; i < rec.n; ++i) {
      if (b[i] != 1 && b[i] != -1) {
        throw std::invalid_argument("graph json: beta entries must be +/-1");
      }
      beta[i] = b[i];
    }
    rec.beta = std::move(beta);
  }
  if (j.contains("rho")) {
    const auto r = j.at("rho").get<std::vector<double>>();
    rec.rho = Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<int>(r.size()));
  }
  if (j.contains("sweeps")) rec.sweeps = j.at("sweeps").get<int>();
  if (j.contains("lambda_min")) rec.lambda_min = j.at("lambda_min").get<double>();
  if (j.contains("warnings")) rec.warnings = j.at("warnings").get<std::vector<std::string>>();
  return rec;
}

void save_graph(const std::string& path, const GraphRecord& rec) {
  write_text_file(path, graph_to_json(rec).dump(2) + "\n");
}

GraphRecord load_graph(const std::string& path) {
  return graph_from_json(json::parse(read_text_file(path)));
}

GeneralizedLaplacian record_laplacian(const GraphRecord& rec) {
  Eigen::MatrixXd L = -rec.W;
  for (int i = 0; i < rec.n; ++i) L(i, i) = rec.W.row(i).sum();
  return GeneralizedLaplacian{std::move(L)};
}

void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& X) {
  std::ostringstream out;
  out << "node";
  for (int k = 0; k < X.cols(); ++k) out << ",obs_" << k;
  out << "\n";
  for (int i = 0; i < X.rows(); ++i) {
    out << "node_" << i;
    for (int k = 0; k < X.cols(); ++k) out << ',' << format_double(X(i, k));
    out << "\n";
  }
  write_text_file(path, out.str());
}

namespace {

bool parse_cell(const std::string& cell, double& value) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  return ec == std::errc() && ptr == end && begin != end;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

Eigen::MatrixXd load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    std::vector<double> row;
    row.reserve(cells.size());
    bool numeric = true;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (parse_cell(cells[c], v)) {
        row.push_back(v);
      } else if (c == 0) {
        continue;  // row label
      } else {
        numeric = false;
        break;
      }
    }
    if (!numeric || row.empty()) {
      if (first) {
        first = false;  // header line
        continue;
      }
      throw std::runtime_error("csv: non-numeric cell in " + path);
    }
    first = false;
    if (!rows.empty() && rows.back().size() != row.size()) {
      throw std::runtime_error("csv: ragged rows in " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return Eigen::MatrixXd(0, 0);

  Eigen::MatrixXd X(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (int i = 0; i < X.rows(); ++i) {
    for (int k = 0; k < X.cols(); ++k) X(i, k) = rows[i][k];
  }
  return X;
}

Eigen::MatrixXd moving_average(const Eigen::MatrixXd& X, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  if (window > X.cols()) {
    throw std::invalid_argument("moving_average: window exceeds observation count");
  }
  const int out_cols = static_cast<int>(X.cols()) - window + 1;
  Eigen::MatrixXd Y(X.rows(), out_cols);
  for (int k = 0; k < out_cols; ++k) {
    Y.col(k) = X.middleCols(k, window).rowwise().mean();
  }
  return Y;
}

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& X) {
  const int K = static_cast<int>(X.cols());
  if (K < 2) throw std::invalid_argument("normalize_rows: need at least two observations");
  Eigen::MatrixXd Y = X;
  for (int i = 0; i < Y.rows(); ++i) {
    const double mean = Y.row(i).mean();
    Y.row(i).array() -= mean;
    const double sd = std::sqrt(Y.row(i).squaredNorm() / (K - 1));
    if (sd <= 0.0) throw std::invalid_argument("normalize_rows: constant row");
    Y.row(i) /= sd;
  }
  return Y;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bsg
