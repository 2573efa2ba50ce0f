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
#ifndef DPQ_EXPERIMENTS_H_
#define DPQ_EXPERIMENTS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dpq/input_distribution.h"
#include "dpq/mechanism.h"
#include "dpq/optimizer.h"
#include "dpq/random.h"

namespace dpq {

// ---------------------------------------------------------------------------
// Monte Carlo helpers

struct MeanEstimate {
  double mean = 0.0;
  double std_dev = 0.0;
  double std_error = 0.0;
  int trials = 0;
  double CiLow() const { return mean - 1.96 * std_error; }
  double CiHigh() const { return mean + 1.96 * std_error; }
};

MeanEstimate Summarize(const std::vector<double>& values);

// Draw from the input law on [-c, c].
double SampleInput(const InputDistribution& dist, double c, Rng& rng);

// E|M(X) - X| by simulation; trial t uses substream (seed, t).
MeanEstimate MonteCarloMaeSerial(const Mechanism& mech,
                                 const InputDistribution& dist, int trials,
                                 uint64_t seed);
MeanEstimate MonteCarloMaeParallel(const Mechanism& mech,
                                   const InputDistribution& dist, int trials,
                                   uint64_t seed);

// ---------------------------------------------------------------------------
// Scalar tables

struct ScalarConfig {
  int m = 4;
  double c = 1.0;
  std::vector<double> eps_grid = {0.5, 1.0, 1.5};  // uniform table
  double gaussian_eps = 1.0;
  double mu = 0.5;
  std::vector<double> sigmas = {0.1, 0.2, 0.3};
  int mc_trials = 100000;
  int objective_samples = 10000;
  uint64_t seed = 0;
  // Hyper grid for the optimized rows; defaults are filled in when unset.
  std::optional<HyperGrid> uniform_grid;
  std::optional<HyperGrid> gaussian_grid;
};

struct ScalarRow {
  std::string mechanism;
  double eps = 0.0;
  double sigma = 0.0;  // 0 for uniform inputs
  bool available = false;
  double exact_mae = 0.0;
  MeanEstimate mc;
  double audit_eps = 0.0;
  std::vector<double> bins;
  std::string params;
};

// Uniform inputs: optm, rqm and erm searched over their default grids, the
// published rqm/erm hyperparameters where they exist, and published MVU
// numbers as reference constants.
std::vector<ScalarRow> RunUniformTable(const ScalarConfig& config);
// Truncated Gaussian inputs at config.gaussian_eps: optm in general mode with
// objective masses estimated from samples, rqm searched, and the published
// rqm hyperparameters.
std::vector<ScalarRow> RunGaussianTable(const ScalarConfig& config);

// Asymmetric grid around the published Gaussian layout: delta in {2, 3, 4}
// and inner positions {-0.2, 0, ..., 0.8}.
HyperGrid GaussianHyperGrid();

std::string ScalarRowsCsv(const std::vector<ScalarRow>& rows);

// ---------------------------------------------------------------------------
// Vector experiments

enum class VectorInput {
  kUniformCube,  // each coordinate uniform in [-1, 1]
  kL2Ball,       // uniform over the unit ball
};

struct NamedMechanism {
  std::string name;
  double eps = 0.0;
  Mechanism mechanism;
};

struct VectorConfig {
  VectorInput input = VectorInput::kUniformCube;
  int dim = 10;
  int trials = 10000;
  uint64_t seed = 0;
};

struct VectorRow {
  std::string mechanism;
  double eps = 0.0;
  int dim = 0;
  MeanEstimate error;  // Euclidean norm of Q(v) - v
  // Largest |mean(Q(v)_k - v_k)| / standard error over coordinates.
  double max_bias_z = 0.0;
};

std::vector<double> SampleVector(VectorInput input, int dim, Rng& rng);

// Trial t draws v and quantizes it from substream (seed, t), so every
// mechanism sees the same inputs.
VectorRow RunVectorSerial(const VectorConfig& config, const NamedMechanism& mech);
VectorRow RunVectorParallel(const VectorConfig& config,
                            const NamedMechanism& mech);

// OPTM on [-3, -0.5, 0.5, 3] and RQM on [-3, -1, 1, 3] (q chosen by exact
// MAE among audited-valid values) at each eps.
std::vector<NamedMechanism> VectorMechanisms(const std::vector<double>& eps_grid);

std::string VectorRowsCsv(const std::vector<VectorRow>& rows);

// ---------------------------------------------------------------------------
// DP-SGD

struct Dataset {
  int rows = 0;
  int features = 0;
  int classes = 0;
  std::vector<double> x;  // row-major, rows x features
  std::vector<int> y;
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;
  double at(int r, int f) const { return x[static_cast<size_t>(r) * features + f]; }
};

// Header row required; every column except `label_column` must be numeric.
// Features are z-scored per column; labels are mapped to indices in sorted
// order of their text.
Dataset LoadCsvDataset(const std::string& path,
                       const std::string& label_column = "label");
Dataset ParseCsvDataset(const std::string& text,
                        const std::string& label_column = "label");

// Two Gaussian blobs at +-1.5 along the first axis, unit variance.
Dataset SyntheticBlobs(int rows, int features, uint64_t seed);

// Maps one clipped gradient coordinate in [-clip, clip] to its transmitted
// value.
using CoordinateQuantizer = std::function<double(double clipped, double clip, Rng&)>;

// clip * M(g / clip), with [-clip, clip] mapped onto [-c, c] = [-1, 1].
CoordinateQuantizer MechanismQuantizer(const Mechanism& mech);
// Passthrough; reproduces the clip-only run exactly.
CoordinateQuantizer IdentityQuantizer();

struct SgdConfig {
  int batch = 8;
  int epochs = 5;
  double learning_rate = 0.2;
  double clip = 0.1;
  uint64_t seed = 0;
};

struct SgdTrace {
  std::vector<double> accuracy;  // training accuracy after every batch
  double final_accuracy = 0.0;
};

// Softmax regression with per-example, per-coordinate clipping. Without a
// quantizer this is the clip-only baseline. Batch order comes from
// substream (seed, 0) and quantizer draws from substream (seed, 1).
SgdTrace RunDpSgd(const Dataset& data, const SgdConfig& config,
                  const CoordinateQuantizer* quantizer);

// OPTM on [-2.2, -0.4, 0.4, 2.2] and RQM on [-2.7, -0.9, 0.9, 2.7] (q chosen
// by exact MAE among audited-valid values), both with c = 1.
std::vector<NamedMechanism> DpSgdMechanisms(double eps);

struct SgdSummary {
  std::string mechanism;
  int runs = 0;
  MeanEstimate final_accuracy;
  std::vector<double> mean_trace;
};

// Repeats RunDpSgd with seeds seed, seed + 1, ... and averages.
SgdSummary RunDpSgdRepeated(const Dataset& data, SgdConfig config,
                            const CoordinateQuantizer* quantizer,
                            const std::string& name, int runs);

std::string SgdSummaryCsv(const std::vector<SgdSummary>& rows);
std::string SgdTraceCsv(const std::vector<SgdSummary>& rows);

// ---------------------------------------------------------------------------

// Manifest stored next to every result file.
nlohmann::json ExperimentManifest(const std::string& experiment,
                                  const nlohmann::json& config, uint64_t seed);

}  // namespace dpq

#endif  // DPQ_EXPERIMENTS_H_
