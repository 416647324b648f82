#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oversmooth/graph.hpp"
#include "oversmooth/layers.hpp"
#include "oversmooth/measures.hpp"

namespace oversmooth {

enum class ModelKind { gcn, gat, sage, resgcn, gcnii, pairnorm_gcn, graphcon_gcn, g2_gcn, dropedge_gcn };

std::string to_string(ModelKind m);
ModelKind parse_model(const std::string& name);
std::vector<std::string> model_names();

enum class WeightMode { per_layer, shared };

std::string to_string(WeightMode w);
WeightMode parse_weight_mode(const std::string& name);

// glorot_uniform: U(-sqrt(6 / (fan_in + fan_out)), +sqrt(...)).
// fan_in_uniform: U(-1 / sqrt(fan_in), +1 / sqrt(fan_in)).
enum class InitScheme { glorot_uniform, fan_in_uniform };

std::string to_string(InitScheme s);
InitScheme parse_init_scheme(const std::string& name);

// I.i.d. N(0, 1) entries.
Matrix init_features(std::size_t rows, std::size_t cols, std::uint64_t seed);
Matrix init_weights(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed,
                    InitScheme scheme = InitScheme::glorot_uniform);

struct ModelHyper {
  double pairnorm_scale = 1.0;
  double graphcon_gamma = 1.0;
  double graphcon_alpha = 1.0;
  double graphcon_dt = 1.0;
  double g2_p = 2.0;
  double gcnii_alpha = 0.1;
  double gcnii_lambda = 1.0;
  double drop_rate = 0.5;
};

struct RunConfig {
  ModelKind model = ModelKind::gcn;
  std::string graph_label = "graph";
  std::size_t depth = 128;
  std::size_t width = 128;
  std::uint64_t seed = 0;
  WeightMode weights = WeightMode::per_layer;
  bool bias = false;
  Activation activation = Activation::relu;
  // Multiplies every initialized weight; 0 forces W = 0.
  double weight_gain = 1.0;
  // Unset picks the model's default (fan_in_uniform for sage, glorot otherwise).
  std::optional<InitScheme> init;
  std::vector<std::string> measures{"dirichlet", "mad"};
  // Evaluate measures per connected component and sum them.
  bool per_component = false;
  ModelHyper hyper;

  std::string run_id() const;
};

InitScheme effective_init(const RunConfig& config);

void validate(const RunConfig& config);

// Propagates N(0, 1) features through `depth` freshly initialized layers and
// records every measure after each full layer update. Series have depth + 1
// samples, layer 0 being the input.
std::map<std::string, MeasureSeries> propagate_record(const RunConfig& config, const Graph& g);

struct SweepRow {
  std::size_t config_index = 0;
  RunConfig config;
  std::string measure;
  std::optional<DecayFit> fit;
  std::string error;
};

using GraphResolver = std::function<Graph(const std::string& label)>;

// One row per (config, measure), in config order then measure order. A failing
// run yields rows with `error` set. `threads` = 0 uses the hardware concurrency.
std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs, const GraphResolver& resolve,
                            const FitOptions& fit = {}, std::size_t threads = 0);

}  // namespace oversmooth
