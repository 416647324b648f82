#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "oversmooth/graph.hpp"

namespace oversmooth {

enum class Activation { identity, relu, tanh };

Matrix activate(const Matrix& x, Activation act);
std::string to_string(Activation act);
Activation parse_activation(const std::string& name);

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Weights of a graph convolution P X W + b.
struct GcnParams {
  Matrix weight;
  std::optional<RowVector> bias;
};

// Single-head attention: logits a^T [x_i W || x_j W] with LeakyReLU(0.2),
// softmax over N(i) and i itself, W shared between source and target.
struct GatParams {
  Matrix weight;
  RowVector attention;  // length 2 m'
  std::optional<RowVector> bias;
  double negative_slope = 0.2;
};

// Mean-aggregator GraphSAGE without sampling.
struct SageParams {
  Matrix self_weight;
  Matrix neighbor_weight;
  std::optional<RowVector> bias;
};

// Coupling F used inside GraphCON and G².
using Coupling = std::variant<GcnParams, GatParams>;

// Pre-activation maps.
Matrix gcn_preactivation(const Matrix& x, const GraphContext& ctx, const GcnParams& params);
Matrix gat_preactivation(const Matrix& x, const GraphContext& ctx, const GatParams& params);
Matrix coupling_preactivation(const Matrix& x, const GraphContext& ctx, const Coupling& coupling);

// Attention coefficients for node i, ordered as [i, N(i)...].
std::vector<double> gat_attention(const Matrix& transformed, const GraphContext& ctx, NodeId i,
                                  const GatParams& params);

Matrix gcn_step(const Matrix& x, const GraphContext& ctx, const GcnParams& params, Activation act);
Matrix gat_step(const Matrix& x, const GraphContext& ctx, const GatParams& params, Activation act);
Matrix sage_step(const Matrix& x, const GraphContext& ctx, const SageParams& params, Activation act);

// Centers rows by the column mean and rescales to mean squared row norm s².
// Throws when every row equals the mean.
Matrix pairnorm_apply(const Matrix& x, double scale);

struct GraphconState {
  Matrix x;
  Matrix y;
};

struct GraphconParams {
  Coupling coupling;
  double gamma = 1.0;
  double alpha = 1.0;
  double dt = 1.0;
};

// Y' = Y + dt [act(F(X)) - gamma X - alpha Y];  X' = X + dt Y'.
GraphconState graphcon_step(const GraphconState& state, const GraphContext& ctx, const GraphconParams& params,
                            Activation act);

struct G2Params {
  Coupling coupling;
  GcnParams gate;  // F̂
  double p = 2.0;
};

// Per-node, per-channel rates tau_ik = tanh(sum_{j in N(i)} |t_jk - t_ik|^p) for gate features t.
// |x|^0 is taken as 1, including x = 0.
Matrix g2_rates(const Matrix& gate_features, const Graph& g, double p);

Matrix g2_step(const Matrix& x, const GraphContext& ctx, const G2Params& params, Activation act);

// X + act(P X W + b); the weight must be square.
Matrix resgcn_step(const Matrix& x, const GraphContext& ctx, const GcnParams& params, Activation act);

struct GcniiParams {
  Matrix weight;  // square
  double alpha = 0.1;
  double beta = 0.0;
};

// act[((1 - alpha) P X + alpha X0) ((1 - beta) I + beta W)].
Matrix gcnii_step(const Matrix& x, const Matrix& x0, const GraphContext& ctx, const GcniiParams& params,
                  Activation act);

// beta_n = log(1 + lambda / n) for layer n >= 1.
double gcnii_beta(std::size_t layer, double lambda = 1.0);

// Keeps each undirected edge independently with probability 1 - drop_rate.
Graph dropedge_sample(const Graph& g, double drop_rate, std::uint64_t seed);

}  // namespace oversmooth
