#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "bsg/filter.hpp"
#include "bsg/graph.hpp"
#include "bsg/io.hpp"

using namespace bsg;
namespace fs = std::filesystem;

namespace {

const std::string kCli = BSG_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const char* name) {
  const fs::path dir = fs::temp_directory_path() / "bsg_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("gen writes graph, data, and manifest") {
  const fs::path dir = fresh_dir("gen");
  REQUIRE(run("gen --n 12 --p 0.3 --k 60 --seed 7 --out " + (dir / "a").string()) == 0);
  CHECK(fs::exists(dir / "a" / "graph.json"));
  CHECK(fs::exists(dir / "a" / "data.csv"));
  CHECK(fs::exists(dir / "a" / "manifest.json"));

  const GraphRecord rec = load_graph((dir / "a" / "graph.json").string());
  REQUIRE(rec.beta.has_value());
  CHECK(check_consistency(record_laplacian(rec), *rec.beta));
  const Eigen::MatrixXd X = load_matrix_csv((dir / "a" / "data.csv").string());
  CHECK(X.rows() == 12);
  CHECK(X.cols() == 60);

  // variables-as-rows layout: header line, then one labeled line per node
  const std::string csv = read_text_file((dir / "a" / "data.csv").string());
  CHECK(csv.rfind("node,obs_0,obs_1,", 0) == 0);
  CHECK(csv.find("\nnode_0,") != std::string::npos);
  CHECK(csv.find("\nnode_11,") != std::string::npos);
}

TEST_CASE("gen rejects an impossible edge probability") {
  CHECK(run("gen --p 1.5 --out /tmp/bsg_unused") == 2);
}

TEST_CASE("gen is byte-deterministic under a fixed seed") {
  const fs::path dir = fresh_dir("gen_det");
  REQUIRE(run("gen --n 10 --p 0.25 --k 40 --seed 5 --out " + (dir / "r1").string()) == 0);
  REQUIRE(run("gen --n 10 --p 0.25 --k 40 --seed 5 --out " + (dir / "r2").string()) == 0);
  for (const char* f : {"graph.json", "data.csv", "manifest.json"}) {
    CHECK(read_text_file((dir / "r1" / f).string()) ==
          read_text_file((dir / "r2" / f).string()));
  }
  // a different seed must differ
  REQUIRE(run("gen --n 10 --p 0.25 --k 40 --seed 6 --out " + (dir / "r3").string()) == 0);
  CHECK(read_text_file((dir / "r1" / "data.csv").string()) !=
        read_text_file((dir / "r3" / "data.csv").string()));
}

TEST_CASE("learn produces a consistent balanced graph") {
  const fs::path dir = fresh_dir("learn");
  REQUIRE(run("gen --n 10 --p 0.3 --k 150 --seed 3 --out " + (dir / "g").string()) == 0);
  REQUIRE(run("learn --input " + (dir / "g" / "data.csv").string() + " --seed 1 --out " +
              (dir / "l").string()) == 0);

  const GraphRecord rec = load_graph((dir / "l" / "graph.json").string());
  REQUIRE(rec.beta.has_value());
  CHECK(check_consistency(record_laplacian(rec), *rec.beta));
  REQUIRE(rec.rho.has_value());
  CHECK(rec.rho->size() == 10);
  CHECK(rec.sweeps.has_value());
  CHECK(rec.lambda_min.has_value());
}

TEST_CASE("learn reports missing input as a usage error") {
  CHECK(run("learn --input /nonexistent/data.csv --out /tmp/bsg_unused") == 2);
}

TEST_CASE("learn accepts a covariance json") {
  const fs::path dir = fresh_dir("learn_cov");
  nlohmann::json j;
  j["n"] = 3;
  j["C"] = std::vector<double>{1.0, -0.4, 0.0, -0.4, 1.2, 0.3, 0.0, 0.3, 0.9};
  write_text_file((dir / "cov.json").string(), j.dump());
  REQUIRE(run("learn --input " + (dir / "cov.json").string() + " --out " +
              (dir / "l").string()) == 0);
  const GraphRecord rec = load_graph((dir / "l" / "graph.json").string());
  REQUIRE(rec.beta.has_value());
  CHECK(check_consistency(record_laplacian(rec), *rec.beta));

  // asymmetric covariance is rejected
  j["C"] = std::vector<double>{1.0, -0.4, 0.0, 0.4, 1.2, 0.3, 0.0, 0.3, 0.9};
  write_text_file((dir / "bad.json").string(), j.dump());
  CHECK(run("learn --input " + (dir / "bad.json").string() + " --out " +
            (dir / "lb").string()) == 2);
}

TEST_CASE("time-series preprocessing flags run end to end") {
  const fs::path dir = fresh_dir("timeseries");
  // station-style file: labeled rows, hourly columns
  std::string csv = "station,h0,h1,h2,h3,h4,h5,h6,h7,h8,h9,h10,h11,h12,h13,h14,h15\n";
  for (int s = 0; s < 3; ++s) {
    csv += "st_" + std::to_string(s);
    for (int h = 0; h < 16; ++h) {
      csv += "," + format_double(std::sin(0.3 * h + s) + 0.1 * s * h);
    }
    csv += "\n";
  }
  write_text_file((dir / "pressures.csv").string(), csv);
  REQUIRE(run("learn --input " + (dir / "pressures.csv").string() +
              " --moving-average 6 --normalize --out " + (dir / "l").string()) == 0);
  const GraphRecord rec = load_graph((dir / "l" / "graph.json").string());
  CHECK(rec.n == 3);
  const auto manifest =
      nlohmann::json::parse(read_text_file((dir / "l" / "manifest.json").string()));
  CHECK(manifest.at("flags").at("moving_average").get<int>() == 6);
  CHECK(manifest.at("flags").at("normalize").get<bool>());
}

TEST_CASE("learn rejects data with too few observations") {
  const fs::path dir = fresh_dir("learn_thin");
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(8, 6);  // K <= n
  save_matrix_csv((dir / "thin.csv").string(), X);
  CHECK(run("learn --input " + (dir / "thin.csv").string() + " --out " +
            (dir / "out").string()) == 2);
}

TEST_CASE("clime-greed baseline runs end to end") {
  const fs::path dir = fresh_dir("baseline");
  REQUIRE(run("gen --n 10 --p 0.3 --k 150 --seed 9 --out " + (dir / "g").string()) == 0);
  REQUIRE(run("learn --baseline clime-greed --input " +
              (dir / "g" / "data.csv").string() + " --out " + (dir / "b").string()) == 0);
  const GraphRecord rec = load_graph((dir / "b" / "graph.json").string());
  REQUIRE(rec.beta.has_value());
  CHECK(check_consistency(record_laplacian(rec), *rec.beta));
}

TEST_CASE("denoise filters signals through the positive counterpart") {
  const fs::path dir = fresh_dir("denoise");
  REQUIRE(run("gen --n 12 --p 0.35 --k 100 --seed 4 --out " + (dir / "g").string()) == 0);
  const GraphRecord rec = load_graph((dir / "g" / "graph.json").string());
  REQUIRE(rec.beta.has_value());

  // build an in-band signal in the balanced domain
  const BalancedLaplacian b{record_laplacian(rec), *rec.beta};
  const auto [Lp, T] = positive_counterpart(b);
  const SpectralBasis basis = spectral_decompose(Lp);
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(12);
  coeffs[0] = 1.0;
  coeffs[1] = -0.5;
  const Eigen::VectorXd in_band =
      transform_signal(T, basis.eigenvectors * coeffs);
  Eigen::MatrixXd signals(12, 2);
  signals.col(0) = in_band;
  signals.col(1) = 2.0 * in_band;
  save_matrix_csv((dir / "signals.csv").string(), signals);

  SUBCASE("in-band signals survive the default band") {
    REQUIRE(run("denoise --graph " + (dir / "g" / "graph.json").string() + " --input " +
                (dir / "signals.csv").string() + " --clean " +
                (dir / "signals.csv").string() + " --out " + (dir / "d").string()) == 0);
    const Eigen::MatrixXd out = load_matrix_csv((dir / "d" / "denoised.csv").string());
    CHECK((out - signals).cwiseAbs().maxCoeff() < 1e-8);
    const auto metrics =
        nlohmann::json::parse(read_text_file((dir / "d" / "metrics.json").string()));
    CHECK(metrics.at("mean_output_mse").get<double>() < 1e-12);
  }
  SUBCASE("full-band cutoff is the identity") {
    REQUIRE(run("denoise --cutoff 1.0 --graph " + (dir / "g" / "graph.json").string() +
                " --input " + (dir / "signals.csv").string() + " --out " +
                (dir / "dall").string()) == 0);
    const Eigen::MatrixXd out = load_matrix_csv((dir / "dall" / "denoised.csv").string());
    CHECK((out - signals).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("signal length mismatch is a usage error") {
    Eigen::MatrixXd wrong = Eigen::MatrixXd::Zero(5, 2);
    save_matrix_csv((dir / "wrong.csv").string(), wrong);
    CHECK(run("denoise --graph " + (dir / "g" / "graph.json").string() + " --input " +
              (dir / "wrong.csv").string() + " --out " + (dir / "dw").string()) == 2);
  }
  SUBCASE("graph without polarities is rejected") {
    GraphRecord no_beta = rec;
    no_beta.beta.reset();
    save_graph((dir / "nobeta.json").string(), no_beta);
    CHECK(run("denoise --graph " + (dir / "nobeta.json").string() + " --input " +
              (dir / "signals.csv").string() + " --out " + (dir / "dn").string()) == 2);
  }
}

TEST_CASE("a node infeasible under both polarities exits with code 3") {
  const fs::path dir = fresh_dir("exit3");
  // strong mixed-sign couplings around node 0: with all-ones polarities both
  // hypotheses need a rho beyond the capped ladder
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, 3);
  W(0, 1) = W(1, 0) = 0.9;
  W(0, 2) = W(2, 0) = -0.9;
  for (int i = 0; i < 3; ++i) {
    double neg = 0.0;
    for (int j = 0; j < 3; ++j)
      if (j != i && W(i, j) < 0) neg -= W(i, j);
    W(i, i) = 2.5 * neg + 0.2;
  }
  GraphRecord truth;
  truth.n = 3;
  truth.W = W;
  const Eigen::MatrixXd C = record_laplacian(truth).L.inverse();
  nlohmann::json j;
  j["n"] = 3;
  std::vector<double> c(9);
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) c[3 * r + k] = C(r, k);
  j["C"] = c;
  write_text_file((dir / "cov.json").string(), j.dump());
  CHECK(run("learn --input " + (dir / "cov.json").string() +
            " --init all-ones --rho-max 0.12 --out " + (dir / "l").string()) == 3);
}

TEST_CASE("bench output does not depend on the worker count") {
  const fs::path dir = fresh_dir("bench_jobs");
  REQUIRE(run("bench --n 8 --p 0.3 --k 100 --trials 3 --seed 12 --jobs 1 --out " +
              (dir / "j1").string()) == 0);
  REQUIRE(run("bench --n 8 --p 0.3 --k 100 --trials 3 --seed 12 --jobs 3 --out " +
              (dir / "j3").string()) == 0);
  CHECK(read_text_file((dir / "j1" / "aggregate.csv").string()) ==
        read_text_file((dir / "j3" / "aggregate.csv").string()));
  CHECK(read_text_file((dir / "j1" / "aggregate.json").string()) ==
        read_text_file((dir / "j3" / "aggregate.json").string()));
}

TEST_CASE("bench single trial aggregate equals its record") {
  const fs::path dir = fresh_dir("bench");
  REQUIRE(run("bench --n 10 --p 0.3 --k 120 --trials 1 --seed 2 --out " +
              (dir / "b").string()) == 0);
  CHECK(fs::exists(dir / "b" / "trials.jsonl"));
  CHECK(fs::exists(dir / "b" / "aggregate.csv"));
  CHECK(fs::exists(dir / "b" / "manifest.json"));

  const auto agg =
      nlohmann::json::parse(read_text_file((dir / "b" / "aggregate.json").string()));
  // a single trial: means equal the record, stds are zero
  const std::string lines = read_text_file((dir / "b" / "trials.jsonl").string());
  const auto first_line = nlohmann::json::parse(lines.substr(0, lines.find('\n')));
  CHECK(first_line.at("method") == "proposed");
  CHECK(agg.at("proposed").at("fm_mean").get<double>() ==
        doctest::Approx(first_line.at("fm").get<double>()));
  CHECK(agg.at("proposed").at("fm_std").get<double>() == 0.0);
}
