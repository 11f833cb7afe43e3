#ifndef BSG_IO_HPP
#define BSG_IO_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bsg/graph.hpp"

namespace bsg {

/// On-disk graph: {"n": int, "W": row-major n*n floats, "beta": optional
/// +/-1 ints}. Learned graphs add "rho", "sweeps", "lambda_min", "warnings".
/// Doubles round-trip bit-exactly (shortest decimal encoding).
struct GraphRecord {
  int n = 0;
  Eigen::MatrixXd W;
  std::optional<PolarityVector> beta;

  std::optional<Eigen::VectorXd> rho;
  std::optional<int> sweeps;
  std::optional<double> lambda_min;
  std::vector<std::string> warnings;
};

nlohmann::json graph_to_json(const GraphRecord& rec);
GraphRecord graph_from_json(const nlohmann::json& j);
void save_graph(const std::string& path, const GraphRecord& rec);
GraphRecord load_graph(const std::string& path);

// Laplacian of a stored record, built directly from W (no self-loop-sign
// requirement, unlike SignedGraph).
GeneralizedLaplacian record_laplacian(const GraphRecord& rec);

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Matrix CSV, variables as rows: header line "node,obs_0,...", then one
/// "node_i,v,..." line per row.
void save_matrix_csv(const std::string& path, const Eigen::MatrixXd& X);

/// Tolerant reader: skips a leading header line and per-row labels when the
/// cells are not numeric, so both our files and plain numeric CSVs load.
Eigen::MatrixXd load_matrix_csv(const std::string& path);

/// Sliding mean of width `window` along each row; output has
/// cols - window + 1 columns.
Eigen::MatrixXd moving_average(const Eigen::MatrixXd& X, int window);

/// Per-row standardization to zero mean, unit variance.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& X);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace bsg

#endif
