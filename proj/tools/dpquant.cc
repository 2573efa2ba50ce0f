//
// Copyright 2026 The dpquant Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front end: optimize, eval, audit, quantize, experiment.
//
// Exit codes: 0 success, 1 usage or input error, 2 no feasible mechanism (or
// a failed audit), 3 internal error.

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli_io.h"
#include "dpq/errors.h"
#include "dpq/experiments.h"
#include "dpq/format.h"
#include "dpq/mae.h"
#include "dpq/mechanism_io.h"
#include "dpq/optimizer.h"
#include "dpq/privacy_audit.h"
#include "dpq/special_mechanisms.h"

#ifndef DPQ_DATA_DIR
#define DPQ_DATA_DIR "data"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitInternal = 3;
constexpr char kVersion[] = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string Dump(const json& j) { return j.dump(2) + "\n"; }

// Resolved values of every option on `sub`, given or defaulted.
json ResolvedOptions(const CLI::App& sub) {
  json out = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    if (opt->count() > 0) {
      const std::vector<std::string>& r = opt->results();
      if (opt->get_type_size() == 0) {
        out[name] = true;
      } else if (r.size() == 1 && opt->get_expected_max() <= 1) {
        out[name] = r.front();
      } else {
        out[name] = r;
      }
    } else if (opt->get_type_size() == 0) {
      out[name] = false;
    } else if (!opt->get_default_str().empty()) {
      out[name] = opt->get_default_str();
    } else {
      out[name] = nullptr;
    }
  }
  return out;
}

std::string TomlValue(const json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_array()) {
    std::string out = "[";
    for (size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + TomlValue(v[k]);
    return out + "]";
  }
  return json(v.get<std::string>()).dump();
}

// The run's settings in the --config format, so the manifest alone can
// reproduce it.
std::string ConfigToml(const std::string& command, const json& options,
                       uint64_t seed, int threads) {
  std::string out = "seed=" + std::to_string(seed) + "\n";
  out += "threads=" + std::to_string(threads) + "\n";
  out += "[" + command + "]\n";
  for (const auto& [k, v] : options.items()) {
    if (!v.is_null()) out += k + "=" + TomlValue(v) + "\n";
  }
  return out;
}

void WriteManifest(const fs::path& dir, const CLI::App& sub, uint64_t seed,
                   int threads) {
  const json options = ResolvedOptions(sub);
  const json m = {{"command", sub.get_name()},
                  {"version", kVersion},
                  {"seed", seed},
                  {"threads", threads},
                  {"options", options},
                  {"config", ConfigToml(sub.get_name(), options, seed, threads)}};
  dpq::cli::WriteFileAtomic(dir / "manifest.json", Dump(m));
}

// --- shared option groups -------------------------------------------------

struct InputOptions {
  std::string input = "uniform";
  double mu = 0.5;
  double sigma = 0.1;

  void Add(CLI::App* sub) {
    sub->add_option("--input", input, "Input distribution")
        ->check(CLI::IsMember({"uniform", "gaussian"}))
        ->capture_default_str();
    sub->add_option("--mu", mu, "Gaussian mean (before truncation)")
        ->capture_default_str();
    sub->add_option("--sigma", sigma, "Gaussian standard deviation")
        ->capture_default_str();
  }

  dpq::InputDistribution Build() const {
    if (input == "uniform") return dpq::InputDistribution::Uniform();
    if (!(sigma > 0)) throw UsageError("--sigma must be positive");
    return dpq::InputDistribution::TruncatedGaussian(mu, sigma);
  }
};

// A mechanism read from disk or built from ERM/RQM parameters.
struct MechanismOptions {
  std::string file;
  std::optional<double> erm_gamma;
  std::optional<double> rqm_q;
  std::vector<double> bins;
  int m = 4;
  double c = 1.0;
  std::optional<double> delta;

  void Add(CLI::App* sub) {
    sub->add_option("--mechanism", file, "Mechanism JSON file");
    sub->add_option("--erm-gamma", erm_gamma, "Build an ERM mechanism");
    sub->add_option("--rqm-q", rqm_q, "Build an RQM mechanism");
    sub->add_option("--bins", bins, "Bin values (ERM), e.g. --bins=-3,-1,1,3")
        ->delimiter(',');
    sub->add_option("--m", m, "Bins for RQM")->capture_default_str();
    sub->add_option("--c", c, "Input bound c")->capture_default_str();
    sub->add_option("--delta", delta, "Bin overhang for RQM");
  }

  dpq::Mechanism Build() const {
    const int sources = !file.empty() + erm_gamma.has_value() + rqm_q.has_value();
    if (sources != 1) {
      throw UsageError("give exactly one of --mechanism, --erm-gamma, --rqm-q");
    }
    if (!file.empty()) return dpq::LoadMechanismFile(file);
    if (erm_gamma) {
      if (bins.empty()) throw UsageError("--erm-gamma needs --bins");
      return dpq::MakeErm({*erm_gamma, dpq::BinLayout::FromBins(c, bins)});
    }
    if (!delta) throw UsageError("--rqm-q needs --delta");
    return dpq::MakeRqm({*rqm_q, dpq::UniformBins(m, c, *delta)});
  }
};

// --- optimize -------------------------------------------------------------

struct OptimizeOptions {
  double eps = 1.0;
  int m = 4;
  double c = 1.0;
  InputOptions input;
  std::string family = "optm";
  std::string constraints = "full";
  std::string mode = "symmetric";
  std::vector<double> bins;
  std::vector<double> deltas;
  std::vector<double> inner_scales;
  std::vector<double> params;
  int samples = 10000;
  bool reduced_full_box = false;
};

json FamilySummary(const dpq::FamilySearchResult& r, const std::string& family) {
  return {{"family", family},
          {"status", r.status == dpq::OptmStatus::kOk ? "ok" : "no_valid_parameters"},
          {"parameter", r.parameter},
          {"delta", r.delta},
          {"bins", r.bins},
          {"exact_mae", r.exact_mae},
          {"audit_eps", r.audit_eps},
          {"analytic_privacy_bound", r.analytic_bound},
          {"valid_points", r.valid_points},
          {"evaluated_points", r.evaluated_points}};
}

int WriteWinner(const fs::path& dir, const dpq::Mechanism& mech, double eps) {
  dpq::cli::WriteFileAtomic(dir / "mechanism.json", dpq::SerializeMechanism(mech));
  const dpq::Verification v = dpq::VerifyMechanism(mech, eps);
  json audit = dpq::AuditReportToJson(v.report);
  audit["eps_target"] = eps;
  audit["passed"] = v.passed;
  dpq::cli::WriteFileAtomic(dir / "audit.json", Dump(audit));
  return v.passed ? kExitOk : kExitInternal;
}

int RunOptimize(const OptimizeOptions& o, const fs::path& dir, uint64_t seed) {
  if (!(o.eps > 0) || !std::isfinite(o.eps)) throw UsageError("--eps must be positive");
  if (o.m < 3) throw UsageError("--m must be at least 3");
  if (!(o.c > 0)) throw UsageError("--c must be positive");
  const dpq::InputDistribution dist = o.input.Build();
  const dpq::ConstraintFamily constraints = o.constraints == "reduced"
                                                ? dpq::ConstraintFamily::kReduced
                                                : dpq::ConstraintFamily::kFull;
  const dpq::LpMode mode =
      o.mode == "general" ? dpq::LpMode::kGeneral : dpq::LpMode::kSymmetric;

  dpq::HyperGrid hyper = dpq::DefaultHyperGrid(constraints, mode);
  hyper.delta_options = o.deltas.empty() ? dpq::DefaultDeltaOptions(o.c) : o.deltas;
  if (!o.inner_scales.empty()) hyper.inner_scales = o.inner_scales;
  if (!o.bins.empty()) {
    if (static_cast<int>(o.bins.size()) != o.m) {
      throw UsageError("--bins must list exactly --m values");
    }
    hyper.explicit_layouts = {dpq::BinLayout::FromBins(o.c, o.bins)};
  }

  if (o.family == "rqm") {
    const std::vector<double> qs = o.params.empty() ? dpq::DefaultRqmQOptions() : o.params;
    const dpq::FamilySearchResult r =
        dpq::SearchRqm(o.c, o.m, o.eps, hyper.delta_options, qs, dist);
    dpq::cli::WriteFileAtomic(dir / "search.json", Dump(FamilySummary(r, "rqm")));
    if (r.status != dpq::OptmStatus::kOk) {
      std::cerr << "no valid RQM hyperparameters at eps " << o.eps << "\n";
      return kExitInfeasible;
    }
    std::cout << "rqm q=" << dpq::ShortestDouble(r.parameter)
              << " exact_mae=" << dpq::ShortestDouble(r.exact_mae) << "\n";
    return WriteWinner(dir, *r.mechanism, o.eps);
  }
  if (o.family == "erm") {
    const std::vector<double> gammas =
        o.params.empty() ? dpq::DefaultErmGammaOptions() : o.params;
    dpq::HyperGrid layouts = hyper;
    layouts.inner_positions.clear();
    const dpq::FamilySearchResult r =
        dpq::SearchErm(o.eps, dpq::LayoutsFor(o.c, o.m, layouts), gammas, dist);
    dpq::cli::WriteFileAtomic(dir / "search.json", Dump(FamilySummary(r, "erm")));
    if (r.status != dpq::OptmStatus::kOk) {
      std::cerr << "no valid ERM hyperparameters at eps " << o.eps << "\n";
      return kExitInfeasible;
    }
    std::cout << "erm gamma=" << dpq::ShortestDouble(r.parameter)
              << " exact_mae=" << dpq::ShortestDouble(r.exact_mae) << "\n";
    return WriteWinner(dir, *r.mechanism, o.eps);
  }

  dpq::OptimizerOptions options;
  options.build.reduced_full_box = o.reduced_full_box;
  if (o.input.input == "gaussian") {
    if (o.samples < 1) throw UsageError("--samples must be positive");
    dpq::Rng rng = dpq::MakeSubstream(seed, 0);
    options.objective_samples = dpq::SampleTruncatedGaussian(
        o.input.mu, o.input.sigma, o.c, o.samples, rng);
  }
  const dpq::OptmResult r = dpq::OptmOuter(o.c, o.m, o.eps, hyper, dist, options);
  dpq::cli::WriteFileAtomic(dir / "leaderboard.csv", dpq::LeaderboardCsv(r.leaderboard));
  json summary = {{"family", "optm"},
                  {"constraints", dpq::ConstraintFamilyName(constraints)},
                  {"mode", dpq::LpModeName(mode)},
                  {"grid_points", r.leaderboard.size()},
                  {"infeasible_points", r.infeasible_points}};
  if (r.status != dpq::OptmStatus::kOk) {
    summary["status"] = "no_feasible_mechanism";
    dpq::cli::WriteFileAtomic(dir / "summary.json", Dump(summary));
    std::cerr << r.message << "\n";
    return kExitInfeasible;
  }
  summary["status"] = "ok";
  summary["objective"] = r.objective;
  summary["mae_bound"] = r.mae_bound;
  summary["exact_mae"] = r.exact_mae;
  summary["audit_eps"] = r.audit_eps;
  summary["winner_index"] = r.winner_index;
  dpq::cli::WriteFileAtomic(dir / "summary.json", Dump(summary));
  std::cout << "optm exact_mae=" << dpq::ShortestDouble(r.exact_mae)
            << " audit_eps=" << dpq::ShortestDouble(r.audit_eps) << " bins "
            << dpq::FormatList(r.mechanism->layout().bins()) << "\n";
  return WriteWinner(dir, *r.mechanism, o.eps);
}

// --- eval / audit / quantize ---------------------------------------------

int RunEval(const MechanismOptions& mo, const InputOptions& in, int trials,
            const fs::path& dir, uint64_t seed) {
  if (trials < 0) throw UsageError("--trials must be non-negative");
  const dpq::Mechanism mech = mo.Build();
  const dpq::InputDistribution dist = in.Build();
  json out = {{"input", in.input}, {"exact_mae", dpq::ExactMae(mech, dist)}};
  if (in.input == "gaussian") {
    out["mu"] = in.mu;
    out["sigma"] = in.sigma;
  }
  std::cout << "exact_mae " << dpq::ShortestDouble(out["exact_mae"].get<double>()) << "\n";
  if (trials > 0) {
    const dpq::MeanEstimate e = dpq::MonteCarloMaeParallel(mech, dist, trials, seed);
    out["monte_carlo"] = {{"mean", e.mean},
                          {"std_error", e.std_error},
                          {"trials", e.trials},
                          {"ci95", {e.CiLow(), e.CiHigh()}}};
    std::cout << "monte_carlo " << dpq::ShortestDouble(e.mean) << " +- "
              << dpq::ShortestDouble(1.96 * e.std_error) << " (" << trials
              << " trials)\n";
  }
  dpq::cli::WriteFileAtomic(dir / "eval.json", Dump(out));
  return kExitOk;
}

int RunAudit(const MechanismOptions& mo, std::optional<double> eps,
             const fs::path& dir) {
  const dpq::Mechanism mech = mo.Build();
  const dpq::AuditReport report = dpq::EmpiricalEpsilon(mech);
  json out = dpq::AuditReportToJson(report);
  std::cout << dpq::FormatAuditReport(report);
  int code = kExitOk;
  if (eps) {
    const bool passed = report.eps_emp <= *eps + dpq::kAuditSlack;
    out["eps_target"] = *eps;
    out["passed"] = passed;
    std::cout << (passed ? "PASS" : "FAIL") << " eps_emp="
              << dpq::ShortestDouble(report.eps_emp)
              << " target=" << dpq::ShortestDouble(*eps) << "\n";
    if (!passed) code = kExitInfeasible;
  }
  dpq::cli::WriteFileAtomic(dir / "audit.json", Dump(out));
  return code;
}

// Each input line is one scalar or a comma-separated vector; the output keeps
// the shape.
int RunQuantize(const MechanismOptions& mo, const std::string& in_path,
                const std::string& out_path, uint64_t seed) {
  const dpq::Mechanism mech = mo.Build();
  std::ifstream file;
  if (!in_path.empty() && in_path != "-") {
    file.open(in_path);
    if (!file) throw UsageError("cannot open " + in_path);
  }
  std::istream& in = file.is_open() ? file : std::cin;
  dpq::Rng rng = dpq::MakeSubstream(seed, 0);
  const double c = mech.layout().c();
  std::ostringstream out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      out << "\n";
      continue;
    }
    std::stringstream fields(line);
    std::string field;
    bool first = true;
    while (std::getline(fields, field, ',')) {
      size_t used = 0;
      double x = 0.0;
      try {
        x = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || field.find_first_not_of(" \t", used) != std::string::npos) {
        throw dpq::ParseError("line " + std::to_string(line_no) +
                              ": not a number: '" + field + "'");
      }
      if (!(x >= -c && x <= c)) {
        throw dpq::DomainError("line " + std::to_string(line_no) + ": " + field +
                               " is outside [-c, c]");
      }
      out << (first ? "" : ",") << dpq::ShortestDouble(dpq::Sample(mech, x, rng));
      first = false;
    }
    out << "\n";
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << out.str();
  } else {
    dpq::cli::WriteFileAtomic(out_path, out.str());
  }
  return kExitOk;
}

// --- experiment -----------------------------------------------------------

struct ExperimentOptions {
  std::string name;
  std::optional<uint64_t> seed;
  std::vector<double> eps;
  int trials = 0;  // 0 picks the experiment's default
  int dim = 0;
  std::string dataset;
  bool synthetic = false;
  int runs = 30;
  int epochs = 5;
  double lr = 0.2;
  int batch = 8;
  double clip = 0.1;
};

void WriteCsv(const fs::path& dir, const std::string& name, const std::string& csv) {
  dpq::cli::WriteFileAtomic(dir / (name + ".csv"), csv);
  std::cout << csv;
}

int RunExperiment(const ExperimentOptions& o, const fs::path& dir) {
  const uint64_t seed = *o.seed;
  if (o.name == "table1" || o.name == "table2") {
    dpq::ScalarConfig config;
    config.seed = seed;
    if (o.trials > 0) config.mc_trials = o.trials;
    if (o.name == "table1") {
      if (!o.eps.empty()) config.eps_grid = o.eps;
      WriteCsv(dir, o.name, dpq::ScalarRowsCsv(dpq::RunUniformTable(config)));
    } else {
      if (!o.eps.empty()) config.gaussian_eps = o.eps.front();
      WriteCsv(dir, o.name, dpq::ScalarRowsCsv(dpq::RunGaussianTable(config)));
    }
    return kExitOk;
  }
  if (o.name == "vec_l1" || o.name == "vec_l2") {
    dpq::VectorConfig config;
    config.seed = seed;
    config.input = o.name == "vec_l1" ? dpq::VectorInput::kUniformCube
                                      : dpq::VectorInput::kL2Ball;
    config.dim = o.dim > 0 ? o.dim : (o.name == "vec_l1" ? 10 : 100);
    if (o.trials > 0) config.trials = o.trials;
    const std::vector<double> eps =
        o.eps.empty() ? std::vector<double>{1.0, 1.5, 2.0} : o.eps;
    std::vector<dpq::VectorRow> rows;
    for (const dpq::NamedMechanism& m : dpq::VectorMechanisms(eps)) {
      rows.push_back(dpq::RunVectorParallel(config, m));
    }
    WriteCsv(dir, o.name, dpq::VectorRowsCsv(rows));
    return kExitOk;
  }
  if (o.name == "dpsgd") {
    dpq::Dataset data;
    if (o.synthetic) {
      data = dpq::SyntheticBlobs(569, 30, seed);
    } else {
      data = dpq::LoadCsvDataset(o.dataset.empty()
                                     ? std::string(DPQ_DATA_DIR) + "/breast_cancer.csv"
                                     : o.dataset);
    }
    dpq::SgdConfig config;
    config.seed = seed;
    config.epochs = o.epochs;
    config.learning_rate = o.lr;
    config.batch = o.batch;
    config.clip = o.clip;
    const double eps = o.eps.empty() ? 1.0 : o.eps.front();
    std::vector<dpq::SgdSummary> rows;
    rows.push_back(dpq::RunDpSgdRepeated(data, config, nullptr, "clip_only", o.runs));
    for (const dpq::NamedMechanism& m : dpq::DpSgdMechanisms(eps)) {
      const dpq::CoordinateQuantizer q = dpq::MechanismQuantizer(m.mechanism);
      rows.push_back(dpq::RunDpSgdRepeated(data, config, &q, m.name, o.runs));
    }
    dpq::cli::WriteFileAtomic(dir / "dpsgd_trace.csv", dpq::SgdTraceCsv(rows));
    WriteCsv(dir, o.name, dpq::SgdSummaryCsv(rows));
    return kExitOk;
  }
  throw UsageError("unknown experiment '" + o.name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private unbiased quantization toolkit"};
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "TOML/INI file; flags override its values");
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  std::string out_flag;
  uint64_t seed = 0;
  app.add_option("--threads", threads, "Cap on worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_flag,
                 std::string("Output directory (default $") + dpq::cli::kOutDirEnv +
                     " or " + dpq::cli::kDefaultOutDir + ")");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  OptimizeOptions opt;
  CLI::App* optimize = app.add_subcommand("optimize", "Search for an optimal mechanism");
  optimize->add_option("--eps", opt.eps, "Privacy target")->capture_default_str();
  optimize->add_option("--m", opt.m, "Number of bins")->capture_default_str();
  optimize->add_option("--c", opt.c, "Input bound c")->capture_default_str();
  opt.input.Add(optimize);
  optimize->add_option("--family", opt.family, "Mechanism family")
      ->check(CLI::IsMember({"optm", "erm", "rqm"}))
      ->capture_default_str();
  optimize->add_option("--constraints", opt.constraints, "LP constraint family")
      ->check(CLI::IsMember({"full", "reduced"}))
      ->capture_default_str();
  optimize->add_option("--mode", opt.mode, "Selection tables")
      ->check(CLI::IsMember({"symmetric", "general"}))
      ->capture_default_str();
  optimize->add_option("--bins", opt.bins, "Fixed layout, e.g. --bins=-3,-0.5,0.5,3")
      ->delimiter(',');
  optimize->add_option("--deltas", opt.deltas, "Overhang grid (absolute)")
      ->delimiter(',');
  optimize->add_option("--inner-scales", opt.inner_scales, "Inner bin spread grid")
      ->delimiter(',');
  optimize->add_option("--params", opt.params, "q (rqm) or gamma (erm) grid")
      ->delimiter(',');
  optimize->add_option("--samples", opt.samples,
                       "Samples for Gaussian objective masses")
      ->capture_default_str();
  optimize->add_flag("--reduced-full-box", opt.reduced_full_box,
                     "Add box rows on every used table row (reduced family)");

  MechanismOptions eval_mech;
  InputOptions eval_input;
  int eval_trials = 100000;
  CLI::App* eval = app.add_subcommand("eval", "Exact and Monte Carlo MAE");
  eval_mech.Add(eval);
  eval_input.Add(eval);
  eval->add_option("--trials", eval_trials, "Monte Carlo trials (0 to skip)")
      ->capture_default_str();

  MechanismOptions audit_mech;
  std::optional<double> audit_eps;
  CLI::App* audit = app.add_subcommand("audit", "Empirical privacy loss");
  audit_mech.Add(audit);
  audit->add_option("--eps", audit_eps, "Target to check against");

  MechanismOptions quant_mech;
  std::string quant_in;
  std::string quant_out;
  CLI::App* quantize = app.add_subcommand("quantize", "Quantize values from a file or stdin");
  quant_mech.Add(quantize);
  quantize->add_option("--input-file", quant_in, "Input file (default stdin)");
  quantize->add_option("--output", quant_out, "Output file (default stdout)");

  ExperimentOptions exp;
  CLI::App* experiment = app.add_subcommand("experiment", "Run a named experiment");
  experiment->add_option("name", exp.name, "table1|table2|vec_l1|vec_l2|dpsgd")
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "vec_l1", "vec_l2", "dpsgd"}));
  experiment->add_option("--eps", exp.eps, "Privacy grid")->delimiter(',');
  experiment->add_option("--trials", exp.trials, "Monte Carlo or vector trials");
  experiment->add_option("--dim", exp.dim, "Vector dimension");
  experiment->add_option("--dataset", exp.dataset, "CSV with a 'label' column");
  experiment->add_flag("--synthetic", exp.synthetic, "Use two Gaussian blobs");
  experiment->add_option("--runs", exp.runs, "SGD repetitions")->capture_default_str();
  experiment->add_option("--epochs", exp.epochs, "SGD epochs")->capture_default_str();
  experiment->add_option("--lr", exp.lr, "SGD learning rate")->capture_default_str();
  experiment->add_option("--batch", exp.batch, "SGD batch size")->capture_default_str();
  experiment->add_option("--clip", exp.clip, "Gradient clip")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    const fs::path dir = dpq::cli::ResolveOutDir(out_flag);
    fs::create_directories(dir);
    CLI::App* sub = app.get_subcommands().front();
    if (sub == experiment) {
      if (app.get_option("--seed")->count() == 0) {
        throw UsageError("experiment requires --seed");
      }
      exp.seed = seed;
    }
    WriteManifest(dir, *sub, seed, threads);
    if (sub == optimize) return RunOptimize(opt, dir, seed);
    if (sub == eval) return RunEval(eval_mech, eval_input, eval_trials, dir, seed);
    if (sub == audit) return RunAudit(audit_mech, audit_eps, dir);
    if (sub == quantize) return RunQuantize(quant_mech, quant_in, quant_out, seed);
    return RunExperiment(exp, dir);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dpq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dpq::IngestError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const dpq::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
