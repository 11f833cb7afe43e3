// bsg: learn balanced signed graph Laplacians from data and reuse
// positive-graph spectral filters on them.
//
// Subcommands: gen (synthetic balanced ER graph + GMRF samples), learn
// (sign-constrained CLIME with POCS-driven rho search), bench (synthetic
// protocol, proposed vs clime-greed), denoise (bandlimited low-pass via the
// positive counterpart).

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bsg/filter.hpp"
#include "bsg/graph.hpp"
#include "bsg/io.hpp"
#include "bsg/learner.hpp"
#include "bsg/log.hpp"
#include "bsg/rng.hpp"
#include "bsg/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "bsgl 0.1.0";

struct LearnFlags {
  double rho_init = 0.07;
  double rho_growth = 1.2;
  double rho_max = 10.0;
  int max_cycles = 1000;
  double stagnation_tol = 1e-9;
  double violation_tol = 1e-7;
  int max_sweeps = 20;
  double conv_tol = 1e-4;
  std::uint64_t seed = 0;
  std::string init_mode = "covariance-greedy";

  bsg::LearnConfig config() const {
    bsg::LearnConfig cfg;
    cfg.rho = {rho_init, rho_growth, rho_max};
    cfg.pocs = {max_cycles, stagnation_tol, violation_tol};
    cfg.max_sweeps = max_sweeps;
    cfg.conv_tol = conv_tol;
    cfg.seed = seed;
    cfg.init_mode = init_mode == "all-ones" ? bsg::InitMode::AllOnes
                                            : bsg::InitMode::CovarianceGreedy;
    return cfg;
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--rho-init", rho_init, "Initial CLIME slack rho")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--rho-growth", rho_growth, "Rho ladder growth factor (> 1)")
        ->check(CLI::Range(1.0 + 1e-9, 100.0))
        ->capture_default_str();
    cmd->add_option("--rho-max", rho_max, "Rho ladder cap")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-cycles", max_cycles, "POCS cycle cap per rho attempt")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--stagnation-tol", stagnation_tol, "POCS limit-cycle tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--violation-tol", violation_tol, "POCS feasibility tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--max-sweeps", max_sweeps, "Sweep cap for the learner")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--conv-tol", conv_tol, "Entry-wise sweep convergence tolerance")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Base RNG seed")->capture_default_str();
    cmd->add_option("--init", init_mode, "Polarity initialization")
        ->check(CLI::IsMember({"all-ones", "covariance-greedy"}))
        ->capture_default_str();
  }

  json manifest() const {
    return json{{"rho_init", rho_init},
                {"rho_growth", rho_growth},
                {"rho_max", rho_max},
                {"max_cycles", max_cycles},
                {"stagnation_tol", stagnation_tol},
                {"violation_tol", violation_tol},
                {"max_sweeps", max_sweeps},
                {"conv_tol", conv_tol},
                {"seed", seed},
                {"init", init_mode}};
  }
};

void write_manifest(const fs::path& dir, const std::string& command, json flags,
                    const std::vector<std::string>& outputs) {
  json m;
  m["tool"] = kVersion;
  m["command"] = command;
  m["flags"] = std::move(flags);
  m["outputs"] = outputs;
  bsg::write_text_file((dir / "manifest.json").string(), m.dump(2) + "\n");
}

fs::path ensure_out_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

double mse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).squaredNorm() / static_cast<double>(a.size());
}

// ---------------------------------------------------------------- gen ----

int cmd_gen(int n, double p, int k, std::uint64_t seed, double weight_lo,
            double weight_hi, double selfloop_factor, const std::string& out) {
  const fs::path dir = ensure_out_dir(out);
  bsg::SynthSpec spec{n, p, weight_lo, weight_hi, selfloop_factor,
                      bsg::derive_seed(seed, 0)};
  const bsg::ErGraph er = bsg::gen_balanced_er_adjacency(spec);
  const bsg::GeneralizedLaplacian L = bsg::laplacian_from_adjacency(er.graph);
  const Eigen::MatrixXd X = bsg::sample_gmrf(L, k, bsg::derive_seed(seed, 1));

  bsg::GraphRecord rec;
  rec.n = n;
  rec.W = er.graph.W;
  rec.beta = er.polarity;
  bsg::save_graph((dir / "graph.json").string(), rec);
  bsg::save_matrix_csv((dir / "data.csv").string(), X);
  write_manifest(dir, "gen",
                 json{{"n", n},
                      {"p", p},
                      {"k", k},
                      {"seed", seed},
                      {"weight_lo", weight_lo},
                      {"weight_hi", weight_hi},
                      {"selfloop_factor", selfloop_factor}},
                 {"graph.json", "data.csv"});
  bsg::log::info("gen: wrote %s", (dir / "graph.json").c_str());
  return 0;
}

// -------------------------------------------------------------- learn ----

bsg::SampleCovariance load_covariance(const std::string& input, int moving_avg,
                                      bool normalize) {
  const fs::path path(input);
  if (path.extension() == ".json") {
    const json j = json::parse(bsg::read_text_file(input));
    const int n = j.at("n").get<int>();
    const auto c = j.at("C").get<std::vector<double>>();
    if (c.size() != static_cast<std::size_t>(n) * n) {
      throw std::invalid_argument("covariance json: C has wrong length");
    }
    Eigen::MatrixXd C(n, n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) C(i, k) = c[static_cast<std::size_t>(i) * n + k];
    }
    if (!C.isApprox(C.transpose(), 1e-12)) {
      throw std::invalid_argument("covariance json: C is not symmetric");
    }
    if (n > 0 && C.diagonal().minCoeff() <= 0.0) {
      throw std::invalid_argument("covariance json: diagonal must be strictly positive");
    }
    return bsg::SampleCovariance{std::move(C)};
  }
  Eigen::MatrixXd X = bsg::load_matrix_csv(input);
  if (moving_avg > 1) X = bsg::moving_average(X, moving_avg);
  if (normalize) X = bsg::normalize_rows(X);
  return bsg::sample_covariance(X);
}

bsg::GraphRecord learned_record(const bsg::LearnResult& res) {
  bsg::GraphRecord rec;
  rec.n = res.graph.n();
  rec.W = bsg::adjacency_from_laplacian(res.graph.laplacian);
  rec.beta = res.graph.polarity;
  rec.rho = res.column_rho;
  rec.sweeps = res.sweeps;
  rec.lambda_min = res.lambda_min;
  rec.warnings = res.warnings;
  return rec;
}

int cmd_learn(const std::string& input, const std::string& out, const LearnFlags& lf,
              const std::string& baseline, double baseline_rho, int moving_avg,
              bool normalize) {
  const fs::path dir = ensure_out_dir(out);
  const bsg::SampleCovariance cov = load_covariance(input, moving_avg, normalize);

  bsg::GraphRecord rec;
  if (baseline == "clime-greed") {
    const bsg::BalancedLaplacian bl =
        bsg::clime_greedy_baseline(cov, baseline_rho, lf.seed);
    rec.n = bl.n();
    rec.W = bsg::adjacency_from_laplacian(bl.laplacian);
    rec.beta = bl.polarity;
  } else {
    const bsg::LearnResult res = bsg::learn_balanced_laplacian(cov, lf.config());
    rec = learned_record(res);
  }
  bsg::save_graph((dir / "graph.json").string(), rec);

  json flags = lf.manifest();
  flags["input"] = input;
  flags["baseline"] = baseline;
  flags["baseline_rho"] = baseline_rho;
  flags["moving_average"] = moving_avg;
  flags["normalize"] = normalize;
  write_manifest(dir, "learn", std::move(flags), {"graph.json"});
  return 0;
}

// -------------------------------------------------------------- bench ----

struct TrialRecord {
  std::uint64_t seed = 0;
  double fm = 0.0;
  double re = 0.0;
  int sweeps = 0;
  long long runtime_ms = 0;
  std::string method;
};

json trial_to_json(const TrialRecord& t) {
  return json{{"seed", t.seed},     {"fm", t.fm},
              {"re", t.re},         {"sweeps", t.sweeps},
              {"runtime_ms", t.runtime_ms}, {"method", t.method}};
}

struct Aggregate {
  double fm_mean = 0.0, fm_std = 0.0, re_mean = 0.0, re_std = 0.0;
};

Aggregate aggregate_method(const std::vector<TrialRecord>& records,
                           const std::string& method) {
  std::vector<double> fm, re;
  for (const auto& t : records) {
    if (t.method == method) {
      fm.push_back(t.fm);
      re.push_back(t.re);
    }
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  auto stdev = [&](const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
  };
  Aggregate a;
  a.fm_mean = mean(fm);
  a.fm_std = stdev(fm, a.fm_mean);
  a.re_mean = mean(re);
  a.re_std = stdev(re, a.re_mean);
  return a;
}

int cmd_bench(int n, double p, int k, int trials, std::uint64_t seed, int jobs,
              const LearnFlags& lf, double baseline_rho, const std::string& out) {
  const fs::path dir = ensure_out_dir(out);
  std::vector<TrialRecord> records(static_cast<std::size_t>(trials) * 2);

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= trials) return;
      const std::uint64_t trial_seed = bsg::derive_seed(seed, static_cast<std::uint64_t>(t));

      bsg::SynthSpec spec{n, p, 0.01, 1.0, 2.5, bsg::derive_seed(trial_seed, 0)};
      const bsg::BalancedLaplacian truth = bsg::gen_balanced_er_graph(spec);
      const Eigen::MatrixXd X =
          bsg::sample_gmrf(truth.laplacian, k, bsg::derive_seed(trial_seed, 1));
      const bsg::SampleCovariance cov = bsg::sample_covariance(X);

      bsg::LearnConfig cfg = lf.config();
      cfg.seed = bsg::derive_seed(trial_seed, 2);

      auto t0 = std::chrono::steady_clock::now();
      const bsg::LearnResult res = bsg::learn_balanced_laplacian(cov, cfg);
      auto t1 = std::chrono::steady_clock::now();
      TrialRecord prop;
      prop.seed = trial_seed;
      prop.fm = bsg::f_measure(res.graph.laplacian, truth.laplacian);
      prop.re = bsg::relative_error(res.graph.laplacian, truth.laplacian);
      prop.sweeps = res.sweeps;
      prop.runtime_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      prop.method = "proposed";

      t0 = std::chrono::steady_clock::now();
      const bsg::BalancedLaplacian base =
          bsg::clime_greedy_baseline(cov, baseline_rho, bsg::derive_seed(trial_seed, 3));
      t1 = std::chrono::steady_clock::now();
      TrialRecord greed;
      greed.seed = trial_seed;
      greed.fm = bsg::f_measure(base.laplacian, truth.laplacian);
      greed.re = bsg::relative_error(base.laplacian, truth.laplacian);
      greed.sweeps = 1;
      greed.runtime_ms =
          std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      greed.method = "clime-greed";

      bsg::log::info("trial %d done (fm %.4f / %.4f)", t, prop.fm, greed.fm);
      records[static_cast<std::size_t>(t) * 2] = std::move(prop);
      records[static_cast<std::size_t>(t) * 2 + 1] = std::move(greed);
    }
  };

  const int nthreads = std::max(1, std::min(jobs, trials));
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::ostringstream jl;
  for (const auto& t : records) jl << trial_to_json(t).dump() << "\n";
  bsg::write_text_file((dir / "trials.jsonl").string(), jl.str());

  const Aggregate prop = aggregate_method(records, "proposed");
  const Aggregate greed = aggregate_method(records, "clime-greed");
  std::ostringstream csv;
  csv << "method,trials,fm_mean,fm_std,re_mean,re_std\n";
  csv << "proposed," << trials << ',' << bsg::format_double(prop.fm_mean) << ','
      << bsg::format_double(prop.fm_std) << ',' << bsg::format_double(prop.re_mean)
      << ',' << bsg::format_double(prop.re_std) << "\n";
  csv << "clime-greed," << trials << ',' << bsg::format_double(greed.fm_mean) << ','
      << bsg::format_double(greed.fm_std) << ',' << bsg::format_double(greed.re_mean)
      << ',' << bsg::format_double(greed.re_std) << "\n";
  bsg::write_text_file((dir / "aggregate.csv").string(), csv.str());

  json agg;
  agg["proposed"] = {{"fm_mean", prop.fm_mean},
                     {"fm_std", prop.fm_std},
                     {"re_mean", prop.re_mean},
                     {"re_std", prop.re_std}};
  agg["clime-greed"] = {{"fm_mean", greed.fm_mean},
                        {"fm_std", greed.fm_std},
                        {"re_mean", greed.re_mean},
                        {"re_std", greed.re_std}};
  agg["trials"] = trials;
  bsg::write_text_file((dir / "aggregate.json").string(), agg.dump(2) + "\n");

  json flags = lf.manifest();
  flags["n"] = n;
  flags["p"] = p;
  flags["k"] = k;
  flags["trials"] = trials;
  flags["jobs"] = jobs;
  flags["baseline_rho"] = baseline_rho;
  write_manifest(dir, "bench", std::move(flags),
                 {"trials.jsonl", "aggregate.csv", "aggregate.json"});

  std::cout << csv.str();
  return 0;
}

// ------------------------------------------------------------ denoise ----

int cmd_denoise(const std::string& graph_path, const std::string& input,
                const std::string& clean_path, double cutoff,
                const std::string& out) {
  const fs::path dir = ensure_out_dir(out);
  const bsg::GraphRecord rec = bsg::load_graph(graph_path);
  if (!rec.beta) {
    throw std::invalid_argument("denoise: graph file has no polarity vector");
  }
  const Eigen::MatrixXd Y = bsg::load_matrix_csv(input);
  if (Y.rows() != rec.n) {
    throw std::invalid_argument("denoise: signal length does not match graph size");
  }

  auto [Lb, lambda_min] = bsg::psd_guard(bsg::record_laplacian(rec));
  if (lambda_min < -1e-8) {
    bsg::log::warn("graph lambda_min = %g; diagonal loading applied", lambda_min);
  }
  const bsg::BalancedLaplacian balanced{Lb, *rec.beta};
  auto [Lplus, T] = bsg::positive_counterpart(balanced);
  const bsg::SpectralBasis basis = bsg::spectral_decompose(Lplus);

  Eigen::MatrixXd out_signals(Y.rows(), Y.cols());
  for (int k = 0; k < Y.cols(); ++k) {
    const Eigen::VectorXd transformed = bsg::transform_signal(T, Y.col(k));
    const Eigen::VectorXd filtered = bsg::lowpass_denoise(basis, transformed, cutoff);
    out_signals.col(k) = bsg::transform_signal(T, filtered);
  }
  bsg::save_matrix_csv((dir / "denoised.csv").string(), out_signals);

  std::vector<std::string> outputs{"denoised.csv"};
  if (!clean_path.empty()) {
    const Eigen::MatrixXd clean = bsg::load_matrix_csv(clean_path);
    if (clean.rows() != Y.rows() || clean.cols() != Y.cols()) {
      throw std::invalid_argument("denoise: clean reference shape mismatch");
    }
    json metrics;
    double in_sum = 0.0, out_sum = 0.0;
    json per_signal = json::array();
    for (int k = 0; k < Y.cols(); ++k) {
      const double in_mse = mse(Y.col(k), clean.col(k));
      const double out_mse = mse(out_signals.col(k), clean.col(k));
      in_sum += in_mse;
      out_sum += out_mse;
      per_signal.push_back({{"signal", k}, {"input_mse", in_mse}, {"output_mse", out_mse}});
    }
    metrics["per_signal"] = std::move(per_signal);
    metrics["mean_input_mse"] = in_sum / Y.cols();
    metrics["mean_output_mse"] = out_sum / Y.cols();
    bsg::write_text_file((dir / "metrics.json").string(), metrics.dump(2) + "\n");
    outputs.push_back("metrics.json");
  }

  write_manifest(dir, "denoise",
                 json{{"graph", graph_path},
                      {"input", input},
                      {"clean", clean_path},
                      {"cutoff", cutoff}},
                 outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"balanced signed graph learning"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a balanced ER graph and GMRF samples");
  int gen_n = 50, gen_k = 500;
  double gen_p = 0.2, gen_wlo = 0.01, gen_whi = 1.0, gen_sf = 2.5;
  std::uint64_t gen_seed = 0;
  std::string gen_out = ".";
  gen->add_option("--n", gen_n, "Node count")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--p", gen_p, "Edge probability")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12))
      ->capture_default_str();
  gen->add_option("--k", gen_k, "Observation count")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();
  gen->add_option("--weight-lo", gen_wlo, "Min edge magnitude")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--weight-hi", gen_whi, "Max edge magnitude")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--selfloop-factor", gen_sf, "Self-loop factor")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // learn
  auto* learn = app.add_subcommand("learn", "Learn a balanced signed graph Laplacian");
  LearnFlags learn_flags;
  std::string learn_input, learn_out = ".", learn_baseline = "none";
  double learn_baseline_rho = 0.05;
  int learn_ma = 0;
  bool learn_norm = false;
  learn->add_option("--input", learn_input, "Data CSV or covariance JSON")->required();
  learn->add_option("--out", learn_out, "Output directory")->capture_default_str();
  learn_flags.add_to(learn);
  learn->add_option("--baseline", learn_baseline, "Estimator variant")
      ->check(CLI::IsMember({"none", "clime-greed"}))
      ->capture_default_str();
  learn->add_option("--baseline-rho", learn_baseline_rho, "Rho for the clime-greed baseline")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  learn->add_option("--moving-average", learn_ma, "Sliding mean window over observations")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  learn->add_flag("--normalize", learn_norm, "Standardize each variable row");

  // bench
  auto* bench = app.add_subcommand("bench", "Synthetic benchmark: proposed vs clime-greed");
  LearnFlags bench_flags;
  int bench_n = 50, bench_k = 500, bench_trials = 30, bench_jobs = 1;
  double bench_p = 0.2, bench_baseline_rho = 0.05;
  std::string bench_out = ".";
  bench->add_option("--n", bench_n, "Node count")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--p", bench_p, "Edge probability")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12))
      ->capture_default_str();
  bench->add_option("--k", bench_k, "Observations per trial")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--trials", bench_trials, "Trial count")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--jobs", bench_jobs, "Parallel trial workers")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--baseline-rho", bench_baseline_rho, "Rho for the clime-greed baseline")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench->add_option("--out", bench_out, "Output directory")->capture_default_str();
  bench_flags.add_to(bench);

  // denoise
  auto* denoise = app.add_subcommand("denoise", "Low-pass filter signals on a balanced graph");
  std::string den_graph, den_input, den_clean, den_out = ".";
  double den_cutoff = 0.3;
  denoise->add_option("--graph", den_graph, "Graph JSON with polarities")->required();
  denoise->add_option("--input", den_input, "Noisy signal CSV")->required();
  denoise->add_option("--clean", den_clean, "Optional clean reference CSV");
  denoise->add_option("--cutoff", den_cutoff, "Low-pass band as fraction of lambda_max")
      ->check(CLI::Range(1e-12, 1.0))
      ->capture_default_str();
  denoise->add_option("--out", den_out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen(gen_n, gen_p, gen_k, gen_seed, gen_wlo, gen_whi, gen_sf, gen_out);
    }
    if (learn->parsed()) {
      return cmd_learn(learn_input, learn_out, learn_flags, learn_baseline,
                       learn_baseline_rho, learn_ma, learn_norm);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_n, bench_p, bench_k, bench_trials, bench_flags.seed,
                       bench_jobs, bench_flags, bench_baseline_rho, bench_out);
    }
    if (denoise->parsed()) {
      return cmd_denoise(den_graph, den_input, den_clean, den_cutoff, den_out);
    }
  } catch (const bsg::BothInfeasibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
