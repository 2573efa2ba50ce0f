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
#include "dpq/experiments.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "dpq/errors.h"
#include "dpq/format.h"
#include "dpq/mae.h"
#include "dpq/privacy_audit.h"
#include "dpq/special_mechanisms.h"

namespace dpq {
namespace {

std::string Fmt(double v) { return ShortestDouble(v); }

std::string JoinBins(const std::vector<double>& bins) {
  std::string out;
  for (size_t k = 0; k < bins.size(); ++k) {
    if (k) out += ' ';
    out += Fmt(bins[k]);
  }
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

double McTrial(const Mechanism& mech, const InputDistribution& dist,
               uint64_t seed, int t) {
  Rng rng = MakeSubstream(seed, static_cast<uint64_t>(t));
  const double x = SampleInput(dist, mech.layout().c(), rng);
  return std::abs(Sample(mech, x, rng) - x);
}

ScalarRow RowFor(const std::string& name, double eps, double sigma,
                 const Mechanism& mech, const InputDistribution& dist,
                 const ScalarConfig& config, std::string params) {
  ScalarRow row;
  row.mechanism = name;
  row.eps = eps;
  row.sigma = sigma;
  row.available = true;
  row.exact_mae = ExactMae(mech, dist);
  row.mc = MonteCarloMaeParallel(mech, dist, config.mc_trials, config.seed);
  row.audit_eps = EmpiricalEpsilon(mech).eps_emp;
  row.bins = mech.layout().bins();
  row.params = std::move(params);
  return row;
}

ScalarRow Unavailable(const std::string& name, double eps, double sigma,
                      std::string params) {
  ScalarRow row;
  row.mechanism = name;
  row.eps = eps;
  row.sigma = sigma;
  row.available = false;
  row.params = std::move(params);
  return row;
}

// Published hyperparameters for m = 4, c = 1.
struct ReferenceRqm {
  double eps;
  double q;
  double delta;
};
struct ReferenceErm {
  double eps;
  double gamma;
  std::vector<double> bins;
};
struct ReferenceMvu {
  double eps;
  double mae;
};

const std::vector<ReferenceRqm>& ReferenceRqmRows() {
  static const std::vector<ReferenceRqm> rows = {{1.0, 0.220, 1.7}, {1.5, 0.498, 1.6}};
  return rows;
}
const std::vector<ReferenceErm>& ReferenceErmRows() {
  static const std::vector<ReferenceErm> rows = {
      {1.0, 0.026, {-5.1, -0.1, 0.1, 5.1}}, {1.5, 0.043, {-2.7, -0.4, 0.4, 2.7}}};
  return rows;
}
const std::vector<ReferenceMvu>& ReferenceMvuUniform() {
  static const std::vector<ReferenceMvu> rows = {{0.5, 3.959}, {1.0, 1.930}, {1.5, 1.254}};
  return rows;
}
const std::map<double, double>& ReferenceMvuGaussian() {
  static const std::map<double, double> rows = {{0.1, 2.053}, {0.2, 2.052}, {0.3, 2.002}};
  return rows;
}

std::string OptmParams(const OptmResult& r) {
  if (r.status != OptmStatus::kOk) return r.message;
  return "grid point " + r.leaderboard[r.winner_index].point + "; mae bound " +
         Fmt(r.mae_bound);
}

// Splits one CSV line; quoted fields may contain commas and doubled quotes.
std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (size_t k = 0; k < line.size(); ++k) {
    const char ch = line[k];
    if (quoted) {
      if (ch == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

void ZScore(Dataset& d) {
  for (int f = 0; f < d.features; ++f) {
    double mean = 0.0;
    for (int r = 0; r < d.rows; ++r) mean += d.at(r, f);
    mean /= d.rows;
    double var = 0.0;
    for (int r = 0; r < d.rows; ++r) var += (d.at(r, f) - mean) * (d.at(r, f) - mean);
    var /= d.rows;
    const double sd = var > 0 ? std::sqrt(var) : 1.0;
    for (int r = 0; r < d.rows; ++r) {
      double& v = d.x[static_cast<size_t>(r) * d.features + f];
      v = (v - mean) / sd;
    }
  }
}

double Accuracy(const Dataset& d, const std::vector<double>& w) {
  const int stride = d.features + 1;
  int correct = 0;
  for (int r = 0; r < d.rows; ++r) {
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < d.classes; ++k) {
      double z = w[k * stride + d.features];
      for (int f = 0; f < d.features; ++f) z += w[k * stride + f] * d.at(r, f);
      if (z > best_score) {
        best_score = z;
        best = k;
      }
    }
    if (best == d.y[r]) ++correct;
  }
  return static_cast<double>(correct) / d.rows;
}

}  // namespace

MeanEstimate Summarize(const std::vector<double>& values) {
  MeanEstimate e;
  e.trials = static_cast<int>(values.size());
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  e.mean = sum / values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - e.mean) * (v - e.mean);
  e.std_dev = values.size() > 1 ? std::sqrt(ss / (values.size() - 1)) : 0.0;
  e.std_error = e.std_dev / std::sqrt(static_cast<double>(values.size()));
  return e;
}

double SampleInput(const InputDistribution& dist, double c, Rng& rng) {
  switch (dist.kind()) {
    case InputDistribution::Kind::kUniform:
      return -c + 2 * c * Uniform01(rng);
    case InputDistribution::Kind::kTruncatedGaussian: {
      std::normal_distribution<double> normal(dist.mu(), dist.sigma());
      for (int k = 0; k < 1000000; ++k) {
        const double x = normal(rng);
        if (x >= -c && x <= c) return x;
      }
      throw DomainError("truncated Gaussian has negligible mass on [-c, c]");
    }
    case InputDistribution::Kind::kIntervalMasses:
      break;
  }
  throw DomainError("sampling needs a uniform or truncated Gaussian input");
}

MeanEstimate MonteCarloMaeSerial(const Mechanism& mech,
                                 const InputDistribution& dist, int trials,
                                 uint64_t seed) {
  std::vector<double> err(trials);
  for (int t = 0; t < trials; ++t) err[t] = McTrial(mech, dist, seed, t);
  return Summarize(err);
}

MeanEstimate MonteCarloMaeParallel(const Mechanism& mech,
                                   const InputDistribution& dist, int trials,
                                   uint64_t seed) {
  std::vector<double> err(trials);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < trials; ++t) err[t] = McTrial(mech, dist, seed, t);
  return Summarize(err);
}

std::vector<ScalarRow> RunUniformTable(const ScalarConfig& config) {
  const InputDistribution dist = InputDistribution::Uniform();
  HyperGrid default_grid = DefaultHyperGrid(ConstraintFamily::kFull, LpMode::kSymmetric);
  default_grid.delta_options = DefaultDeltaOptions(config.c);
  const HyperGrid grid = config.uniform_grid.value_or(default_grid);
  const std::vector<double> deltas = DefaultDeltaOptions(config.c);
  const std::vector<BinLayout> erm_layouts = LayoutsFor(config.c, config.m, default_grid);

  std::vector<ScalarRow> rows;
  for (double eps : config.eps_grid) {
    const OptmResult optm = OptmOuter(config.c, config.m, eps, grid, dist);
    if (optm.status == OptmStatus::kOk) {
      rows.push_back(RowFor("optm", eps, 0, *optm.mechanism, dist, config,
                            OptmParams(optm)));
    } else {
      rows.push_back(Unavailable("optm", eps, 0, optm.message));
    }

    const FamilySearchResult rqm =
        SearchRqm(config.c, config.m, eps, deltas, DefaultRqmQOptions(), dist);
    if (rqm.status == OptmStatus::kOk) {
      rows.push_back(RowFor("rqm", eps, 0, *rqm.mechanism, dist, config,
                            "q=" + Fmt(rqm.parameter) + " analytic bound " +
                                Fmt(rqm.analytic_bound)));
    } else {
      rows.push_back(Unavailable("rqm", eps, 0, "no valid hyperparameters"));
    }

    const FamilySearchResult erm =
        SearchErm(eps, erm_layouts, DefaultErmGammaOptions(), dist);
    if (erm.status == OptmStatus::kOk) {
      rows.push_back(RowFor("erm", eps, 0, *erm.mechanism, dist, config,
                            "gamma=" + Fmt(erm.parameter) + " analytic bound " +
                                Fmt(erm.analytic_bound)));
    } else {
      rows.push_back(Unavailable("erm", eps, 0, "no valid hyperparameters"));
    }

    if (config.m == 4 && config.c == 1.0) {
      for (const ReferenceRqm& p : ReferenceRqmRows()) {
        if (p.eps != eps) continue;
        rows.push_back(RowFor("rqm_published", eps, 0,
                              MakeRqm({p.q, UniformBins(4, 1.0, p.delta)}), dist,
                              config, "q=" + Fmt(p.q)));
      }
      for (const ReferenceErm& p : ReferenceErmRows()) {
        if (p.eps != eps) continue;
        rows.push_back(RowFor("erm_published", eps, 0,
                              MakeErm({p.gamma, BinLayout::FromBins(1.0, p.bins)}),
                              dist, config, "gamma=" + Fmt(p.gamma)));
      }
      for (const ReferenceMvu& p : ReferenceMvuUniform()) {
        if (p.eps != eps) continue;
        ScalarRow row = Unavailable("mvu_reference", eps, 0, "published value");
        row.available = true;
        row.exact_mae = p.mae;
        row.audit_eps = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

HyperGrid GaussianHyperGrid() {
  HyperGrid h;
  h.delta_options = {2.0, 3.0, 4.0};
  h.inner_scales = {1.0};
  for (int k = -1; k <= 4; ++k) h.inner_positions.push_back(k / 5.0);
  h.family = ConstraintFamily::kFull;
  h.mode = LpMode::kGeneral;
  h.bounds = BoundGrid::PatternSearch();
  return h;
}

std::vector<ScalarRow> RunGaussianTable(const ScalarConfig& config) {
  const double eps = config.gaussian_eps;
  HyperGrid grid = config.gaussian_grid.value_or(GaussianHyperGrid());
  std::vector<ScalarRow> rows;
  for (size_t s = 0; s < config.sigmas.size(); ++s) {
    const double sigma = config.sigmas[s];
    const InputDistribution dist = InputDistribution::TruncatedGaussian(config.mu, sigma);
    Rng rng = MakeSubstream(config.seed, 1000 + s);
    OptimizerOptions options;
    options.objective_samples =
        SampleTruncatedGaussian(config.mu, sigma, config.c, config.objective_samples, rng);
    const OptmResult optm = OptmOuter(config.c, config.m, eps, grid, dist, options);
    if (optm.status == OptmStatus::kOk) {
      rows.push_back(RowFor("optm", eps, sigma, *optm.mechanism, dist, config,
                            OptmParams(optm)));
    } else {
      rows.push_back(Unavailable("optm", eps, sigma, optm.message));
    }
    const FamilySearchResult rqm =
        SearchRqm(config.c, config.m, eps, DefaultDeltaOptions(config.c),
                  DefaultRqmQOptions(), dist);
    if (rqm.status == OptmStatus::kOk) {
      rows.push_back(RowFor("rqm", eps, sigma, *rqm.mechanism, dist, config,
                            "q=" + Fmt(rqm.parameter)));
    } else {
      rows.push_back(Unavailable("rqm", eps, sigma, "no valid hyperparameters"));
    }
    if (config.m == 4 && config.c == 1.0 && eps == 1.0) {
      rows.push_back(RowFor("rqm_published", eps, sigma,
                            MakeRqm({0.22, UniformBins(4, 1.0, 1.7)}), dist, config,
                            "q=0.22"));
      const auto it = ReferenceMvuGaussian().find(sigma);
      if (it != ReferenceMvuGaussian().end()) {
        ScalarRow row = Unavailable("mvu_reference", eps, sigma, "published value");
        row.available = true;
        row.exact_mae = it->second;
        row.audit_eps = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::string ScalarRowsCsv(const std::vector<ScalarRow>& rows) {
  std::ostringstream out;
  out << "mechanism,eps,sigma,available,exact_mae,mc_mae,mc_std_error,"
         "mc_trials,audit_eps,bins,params\n";
  for (const ScalarRow& r : rows) {
    out << r.mechanism << ',' << Fmt(r.eps) << ',' << Fmt(r.sigma) << ','
        << (r.available ? 1 : 0) << ',';
    if (r.available) {
      out << Fmt(r.exact_mae) << ',';
      if (r.mc.trials > 0) {
        out << Fmt(r.mc.mean) << ',' << Fmt(r.mc.std_error) << ',' << r.mc.trials;
      } else {
        out << ",,0";
      }
      out << ',' << (std::isnan(r.audit_eps) ? "" : Fmt(r.audit_eps));
    } else {
      out << "N/A,,,0,";
    }
    out << ',' << JoinBins(r.bins) << ',' << CsvField(r.params) << '\n';
  }
  return out.str();
}

std::vector<double> SampleVector(VectorInput input, int dim, Rng& rng) {
  std::vector<double> v(dim);
  if (input == VectorInput::kUniformCube) {
    for (double& x : v) x = -1 + 2 * Uniform01(rng);
    return v;
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (double& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  } while (norm == 0.0);
  const double radius = std::pow(Uniform01(rng), 1.0 / dim) / std::sqrt(norm);
  for (double& x : v) x *= radius;
  return v;
}

namespace {

// Euclidean error of one trial; per-coordinate residuals go to `residual`.
double VectorTrial(const VectorConfig& config, const Mechanism& mech, int t,
                   double* residual) {
  Rng rng = MakeSubstream(config.seed, static_cast<uint64_t>(t));
  const std::vector<double> v = SampleVector(config.input, config.dim, rng);
  double ss = 0.0;
  for (int k = 0; k < config.dim; ++k) {
    const double d = Sample(mech, v[k], rng) - v[k];
    residual[k] = d;
    ss += d * d;
  }
  return std::sqrt(ss);
}

VectorRow FinishVector(const VectorConfig& config, const NamedMechanism& mech,
                       const std::vector<double>& errors,
                       const std::vector<double>& residuals) {
  VectorRow row;
  row.mechanism = mech.name;
  row.eps = mech.eps;
  row.dim = config.dim;
  row.error = Summarize(errors);
  std::vector<double> column(config.trials);
  for (int k = 0; k < config.dim; ++k) {
    for (int t = 0; t < config.trials; ++t) {
      column[t] = residuals[static_cast<size_t>(t) * config.dim + k];
    }
    const MeanEstimate e = Summarize(column);
    if (e.std_error > 0) {
      row.max_bias_z = std::max(row.max_bias_z, std::abs(e.mean) / e.std_error);
    }
  }
  return row;
}

}  // namespace

VectorRow RunVectorSerial(const VectorConfig& config, const NamedMechanism& mech) {
  if (config.trials < 1 || config.dim < 1) throw DomainError("invalid vector config");
  std::vector<double> errors(config.trials);
  std::vector<double> residuals(static_cast<size_t>(config.trials) * config.dim);
  for (int t = 0; t < config.trials; ++t) {
    errors[t] = VectorTrial(config, mech.mechanism, t,
                            &residuals[static_cast<size_t>(t) * config.dim]);
  }
  return FinishVector(config, mech, errors, residuals);
}

VectorRow RunVectorParallel(const VectorConfig& config,
                            const NamedMechanism& mech) {
  if (config.trials < 1 || config.dim < 1) throw DomainError("invalid vector config");
  std::vector<double> errors(config.trials);
  std::vector<double> residuals(static_cast<size_t>(config.trials) * config.dim);
#pragma omp parallel for schedule(static)
  for (int t = 0; t < config.trials; ++t) {
    errors[t] = VectorTrial(config, mech.mechanism, t,
                            &residuals[static_cast<size_t>(t) * config.dim]);
  }
  return FinishVector(config, mech, errors, residuals);
}

std::vector<NamedMechanism> VectorMechanisms(const std::vector<double>& eps_grid) {
  const InputDistribution uniform = InputDistribution::Uniform();
  const BinLayout optm_layout(1.0, 2.0, {-3.0, -0.5, 0.5, 3.0});
  std::vector<NamedMechanism> out;
  for (double eps : eps_grid) {
    const OptmResult optm =
        OptmInner(optm_layout, eps, BoundGrid::PatternSearch(), uniform,
                  ConstraintFamily::kFull, LpMode::kSymmetric);
    if (optm.status != OptmStatus::kOk) {
      throw DomainError("no OPTM mechanism for the vector layout at eps " + Fmt(eps));
    }
    out.push_back({"optm", eps, *optm.mechanism});
    const FamilySearchResult rqm =
        SearchRqm(1.0, 4, eps, {2.0}, DefaultRqmQOptions(), uniform);
    if (rqm.status != OptmStatus::kOk) {
      throw DomainError("no RQM mechanism for the vector layout at eps " + Fmt(eps));
    }
    out.push_back({"rqm", eps, *rqm.mechanism});
  }
  return out;
}

std::vector<NamedMechanism> DpSgdMechanisms(double eps) {
  const InputDistribution uniform = InputDistribution::Uniform();
  const BinLayout optm_layout(1.0, 1.2, {-2.2, -0.4, 0.4, 2.2});
  const OptmResult optm =
      OptmInner(optm_layout, eps, BoundGrid::PatternSearch(), uniform,
                ConstraintFamily::kFull, LpMode::kSymmetric);
  if (optm.status != OptmStatus::kOk) {
    throw DomainError("no OPTM mechanism for the SGD layout at eps " + Fmt(eps));
  }
  const FamilySearchResult rqm =
      SearchRqm(1.0, 4, eps, {1.7}, DefaultRqmQOptions(), uniform);
  if (rqm.status != OptmStatus::kOk) {
    throw DomainError("no RQM mechanism for the SGD layout at eps " + Fmt(eps));
  }
  return {{"optm", eps, *optm.mechanism}, {"rqm", eps, *rqm.mechanism}};
}

std::string VectorRowsCsv(const std::vector<VectorRow>& rows) {
  std::ostringstream out;
  out << "mechanism,eps,dim,trials,mean_error,std_dev,std_error,ci_low,ci_high,"
         "max_bias_z\n";
  for (const VectorRow& r : rows) {
    out << r.mechanism << ',' << Fmt(r.eps) << ',' << r.dim << ','
        << r.error.trials << ',' << Fmt(r.error.mean) << ','
        << Fmt(r.error.std_dev) << ',' << Fmt(r.error.std_error) << ','
        << Fmt(r.error.CiLow()) << ',' << Fmt(r.error.CiHigh()) << ','
        << Fmt(r.max_bias_z) << '\n';
  }
  return out.str();
}

Dataset LoadCsvDataset(const std::string& path, const std::string& label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open dataset " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseCsvDataset(text.str(), label_column);
}

Dataset ParseCsvDataset(const std::string& text, const std::string& label_column) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IngestError("dataset is empty");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header = SplitCsv(line);
  for (std::string& h : header) h = Trim(h);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw IngestError("header has no label column '" + label_column + "'");
  }
  const int label_idx = static_cast<int>(label_it - header.begin());
  Dataset d;
  for (int k = 0; k < static_cast<int>(header.size()); ++k) {
    if (k != label_idx) d.feature_names.push_back(header[k]);
  }
  d.features = static_cast<int>(d.feature_names.size());
  if (d.features == 0) throw IngestError("dataset has no feature columns");

  std::vector<std::string> labels;
  std::vector<int> missing_rows;
  std::vector<std::string> problems;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> fields = SplitCsv(line);
    if (fields.size() != header.size()) {
      throw IngestError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    bool row_missing = false;
    for (int k = 0; k < static_cast<int>(fields.size()); ++k) {
      const std::string f = Trim(fields[k]);
      if (f.empty() || f == "NA" || f == "NaN" || f == "nan") {
        row_missing = true;
        continue;
      }
      if (k == label_idx) continue;
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(f, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != f.size() || !std::isfinite(v)) {
        problems.push_back("line " + std::to_string(line_no) + ", column '" +
                           header[k] + "': non-numeric value '" + f + "'");
        continue;
      }
      d.x.push_back(v);
    }
    if (row_missing) {
      missing_rows.push_back(line_no);
      continue;
    }
    labels.push_back(Trim(fields[label_idx]));
    ++d.rows;
  }
  if (!missing_rows.empty()) {
    std::string msg = "missing values on lines";
    for (size_t k = 0; k < missing_rows.size() && k < 20; ++k) {
      msg += " " + std::to_string(missing_rows[k]);
    }
    if (missing_rows.size() > 20) msg += " ...";
    throw IngestError(msg);
  }
  if (!problems.empty()) {
    std::string msg = problems.front();
    if (problems.size() > 1) {
      msg += " (and " + std::to_string(problems.size() - 1) + " more)";
    }
    throw IngestError(msg);
  }
  if (d.rows == 0) throw IngestError("dataset has no rows");
  const std::set<std::string> unique(labels.begin(), labels.end());
  d.class_names.assign(unique.begin(), unique.end());
  d.classes = static_cast<int>(d.class_names.size());
  for (const std::string& l : labels) {
    d.y.push_back(static_cast<int>(
        std::lower_bound(d.class_names.begin(), d.class_names.end(), l) -
        d.class_names.begin()));
  }
  ZScore(d);
  return d;
}

Dataset SyntheticBlobs(int rows, int features, uint64_t seed) {
  if (rows < 2 || features < 1) throw DomainError("invalid synthetic dataset shape");
  Rng rng = MakeSubstream(seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset d;
  d.rows = rows;
  d.features = features;
  d.classes = 2;
  d.class_names = {"0", "1"};
  for (int f = 0; f < features; ++f) d.feature_names.push_back("x" + std::to_string(f));
  for (int r = 0; r < rows; ++r) {
    const int label = r % 2;
    d.y.push_back(label);
    for (int f = 0; f < features; ++f) {
      const double center = f == 0 ? (label ? 1.5 : -1.5) : 0.0;
      d.x.push_back(center + normal(rng));
    }
  }
  ZScore(d);
  return d;
}

CoordinateQuantizer MechanismQuantizer(const Mechanism& mech) {
  if (mech.layout().c() != 1.0) {
    throw DomainError("gradient quantizers expect a mechanism with c = 1");
  }
  return [mech](double clipped, double clip, Rng& rng) {
    const double u = std::clamp(clipped / clip, -1.0, 1.0);
    return clip * Sample(mech, u, rng);
  };
}

CoordinateQuantizer IdentityQuantizer() {
  return [](double clipped, double, Rng&) { return clipped; };
}

SgdTrace RunDpSgd(const Dataset& data, const SgdConfig& config,
                  const CoordinateQuantizer* quantizer) {
  if (config.batch < 1 || !(config.clip > 0) || config.epochs < 1) {
    throw DomainError("SGD needs batch >= 1, clip > 0 and epochs >= 1");
  }
  const int stride = data.features + 1;
  const int k_classes = data.classes;
  std::vector<double> w(static_cast<size_t>(k_classes) * stride, 0.0);
  std::vector<double> grad(w.size());
  std::vector<double> probs(k_classes);
  Rng order_rng = MakeSubstream(config.seed, 0);
  Rng quant_rng = MakeSubstream(config.seed, 1);
  std::vector<int> order(data.rows);
  SgdTrace trace;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (int r = 0; r < data.rows; ++r) order[r] = r;
    for (int r = data.rows - 1; r > 0; --r) {
      const int s = static_cast<int>(Uniform01(order_rng) * (r + 1));
      std::swap(order[r], order[std::min(s, r)]);
    }
    for (int start = 0; start < data.rows; start += config.batch) {
      const int end = std::min(data.rows, start + config.batch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (int b = start; b < end; ++b) {
        const int r = order[b];
        double zmax = -std::numeric_limits<double>::infinity();
        for (int k = 0; k < k_classes; ++k) {
          double z = w[k * stride + data.features];
          for (int f = 0; f < data.features; ++f) z += w[k * stride + f] * data.at(r, f);
          probs[k] = z;
          zmax = std::max(zmax, z);
        }
        double total = 0.0;
        for (double& p : probs) {
          p = std::exp(p - zmax);
          total += p;
        }
        for (int k = 0; k < k_classes; ++k) {
          const double err = probs[k] / total - (data.y[r] == k ? 1.0 : 0.0);
          for (int f = 0; f <= data.features; ++f) {
            const double xf = f < data.features ? data.at(r, f) : 1.0;
            double g = std::clamp(err * xf, -config.clip, config.clip);
            if (quantizer) g = (*quantizer)(g, config.clip, quant_rng);
            grad[k * stride + f] += g;
          }
        }
      }
      const double scale = config.learning_rate / (end - start);
      for (size_t k = 0; k < w.size(); ++k) w[k] -= scale * grad[k];
      trace.accuracy.push_back(Accuracy(data, w));
    }
  }
  trace.final_accuracy = trace.accuracy.back();
  return trace;
}

SgdSummary RunDpSgdRepeated(const Dataset& data, SgdConfig config,
                            const CoordinateQuantizer* quantizer,
                            const std::string& name, int runs) {
  if (runs < 1) throw DomainError("need at least one run");
  SgdSummary s;
  s.mechanism = name;
  s.runs = runs;
  std::vector<double> finals;
  const uint64_t base = config.seed;
  for (int k = 0; k < runs; ++k) {
    config.seed = base + static_cast<uint64_t>(k);
    const SgdTrace t = RunDpSgd(data, config, quantizer);
    finals.push_back(t.final_accuracy);
    if (s.mean_trace.empty()) s.mean_trace.assign(t.accuracy.size(), 0.0);
    for (size_t i = 0; i < t.accuracy.size(); ++i) s.mean_trace[i] += t.accuracy[i] / runs;
  }
  s.final_accuracy = Summarize(finals);
  return s;
}

std::string SgdSummaryCsv(const std::vector<SgdSummary>& rows) {
  std::ostringstream out;
  out << "mechanism,runs,final_accuracy_mean,final_accuracy_std,std_error\n";
  for (const SgdSummary& s : rows) {
    out << s.mechanism << ',' << s.runs << ',' << Fmt(s.final_accuracy.mean) << ','
        << Fmt(s.final_accuracy.std_dev) << ',' << Fmt(s.final_accuracy.std_error)
        << '\n';
  }
  return out.str();
}

std::string SgdTraceCsv(const std::vector<SgdSummary>& rows) {
  std::ostringstream out;
  out << "batch";
  for (const SgdSummary& s : rows) out << ',' << s.mechanism;
  out << '\n';
  const size_t n = rows.empty() ? 0 : rows.front().mean_trace.size();
  for (size_t i = 0; i < n; ++i) {
    out << i + 1;
    for (const SgdSummary& s : rows) out << ',' << Fmt(s.mean_trace[i]);
    out << '\n';
  }
  return out.str();
}

nlohmann::json ExperimentManifest(const std::string& experiment,
                                  const nlohmann::json& config, uint64_t seed) {
  return {{"experiment", experiment},
          {"seed", seed},
          {"config", config},
          {"library", "dpquant"},
          {"version", "0.1.0"}};
}

}  // namespace dpq
