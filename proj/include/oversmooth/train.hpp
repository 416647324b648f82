#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oversmooth/graph.hpp"
#include "oversmooth/measures.hpp"

namespace oversmooth {

enum class Optimizer { sgd, adam };

std::string to_string(Optimizer o);
Optimizer parse_optimizer(const std::string& name);

struct Masks {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;
};

struct TrainConfig {
  std::size_t depth = 2;
  std::size_t width = 64;
  bool shared_weights = true;
  bool bias = true;
  double learning_rate = 1e-2;
  std::size_t epochs = 200;
  Optimizer optimizer = Optimizer::adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;
  Masks masks;
};

// Throws on overlapping or out-of-range masks, an empty train mask, or bad rates.
void validate(const TrainConfig& config, std::size_t nodes);

// H0 = X0 E (E only when the feature width differs from m), then
// H^n = relu(P H^{n-1} W_n + b_n), logits = H^N R + r.
struct ModelParams {
  std::size_t depth = 0;
  std::optional<Matrix> encoder;
  std::vector<Matrix> weights;     // one entry when shared, else one per layer
  std::vector<RowVector> biases;   // empty, or one per weight
  Matrix readout;
  RowVector readout_bias;

  const Matrix& weight(std::size_t layer) const { return weights.size() == 1 ? weights[0] : weights[layer - 1]; }
  const RowVector* bias(std::size_t layer) const;
};

// Glorot weights, zero biases.
ModelParams init_params(const TrainConfig& config, std::size_t feature_width, std::size_t classes);

struct LossGrad {
  double loss = 0.0;
  ModelParams grad;
  Matrix logits;
};

// Mean softmax cross-entropy over `rows`.
LossGrad loss_and_grad(const ModelParams& params, const GraphContext& ctx, const Matrix& x0,
                       const std::vector<int>& labels, const std::vector<std::size_t>& rows);

// Hidden features H^0..H^N.
std::vector<Matrix> hidden_features(const ModelParams& params, const GraphContext& ctx, const Matrix& x0);
Matrix predict_logits(const ModelParams& params, const GraphContext& ctx, const Matrix& x0);
double accuracy(const Matrix& logits, const std::vector<int>& labels, const std::vector<std::size_t>& rows);

struct EpochMetrics {
  std::size_t epoch = 0;  // number of updates applied; 0 is the initialization
  double loss = 0.0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainResult {
  ModelParams params;  // parameters of the best validation epoch
  std::size_t best_epoch = 0;
  std::vector<EpochMetrics> history;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full-batch training; labels hold one class id in [0, classes) per node.
TrainResult train(const TrainConfig& config, const GraphContext& ctx, const Matrix& x0,
                  const std::vector<int>& labels);

// Dirichlet measure of H^0..H^N.
MeasureSeries trained_energy_profile(const ModelParams& params, const GraphContext& ctx, const Matrix& x0,
                                     const std::string& run_id = "trained");

}  // namespace oversmooth
