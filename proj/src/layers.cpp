#include "oversmooth/layers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace oversmooth {

Matrix activate(const Matrix& x, Activation act) {
  switch (act) {
    case Activation::identity: return x;
    case Activation::relu: return x.cwiseMax(0.0);
    case Activation::tanh: return x.array().tanh().matrix();
  }
  return x;
}

std::string to_string(Activation act) {
  switch (act) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "relu";
}

Activation parse_activation(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  throw std::invalid_argument(fmt::format("unknown activation '{}'", name));
}

namespace {

void require_rows(const Matrix& x, const GraphContext& ctx) {
  if (static_cast<std::size_t>(x.rows()) != ctx.graph.node_count())
    throw ShapeError(fmt::format("features have {} rows but graph has {} nodes", x.rows(), ctx.graph.node_count()));
}

void require_weight(const Matrix& x, const Matrix& w, const char* what) {
  if (x.cols() != w.rows())
    throw ShapeError(fmt::format("{} expects {} input channels, got {}", what, w.rows(), x.cols()));
}

void add_bias(Matrix& z, const std::optional<RowVector>& bias) {
  if (!bias) return;
  if (bias->size() != z.cols())
    throw ShapeError(fmt::format("bias has {} entries, layer output has {} channels", bias->size(), z.cols()));
  z.rowwise() += *bias;
}

double leaky_relu(double z, double slope) { return z > 0.0 ? z : slope * z; }

}  // namespace

Matrix gcn_preactivation(const Matrix& x, const GraphContext& ctx, const GcnParams& params) {
  require_rows(x, ctx);
  require_weight(x, params.weight, "GCN weight");
  Matrix z = ctx.normalized.apply(x * params.weight);
  add_bias(z, params.bias);
  return z;
}

std::vector<double> gat_attention(const Matrix& h, const GraphContext& ctx, NodeId i, const GatParams& params) {
  const auto width = h.cols();
  if (params.attention.size() != 2 * width)
    throw ShapeError(fmt::format("attention vector has {} entries, expected {}", params.attention.size(), 2 * width));
  const auto a_target = params.attention.head(width);
  const auto a_source = params.attention.tail(width);
  const double target_term = h.row(i).dot(a_target);
  auto nb = ctx.graph.neighbors(i);
  std::vector<double> logits;
  logits.reserve(nb.size() + 1);
  logits.push_back(leaky_relu(target_term + h.row(i).dot(a_source), params.negative_slope));
  for (NodeId j : nb) logits.push_back(leaky_relu(target_term + h.row(j).dot(a_source), params.negative_slope));
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

Matrix gat_preactivation(const Matrix& x, const GraphContext& ctx, const GatParams& params) {
  require_rows(x, ctx);
  require_weight(x, params.weight, "GAT weight");
  const Matrix h = x * params.weight;
  Matrix z(h.rows(), h.cols());
  for (NodeId i = 0; i < static_cast<NodeId>(h.rows()); ++i) {
    const auto coeff = gat_attention(h, ctx, i, params);
    RowVector acc = coeff[0] * h.row(i);
    std::size_t k = 1;
    for (NodeId j : ctx.graph.neighbors(i)) acc.noalias() += coeff[k++] * h.row(j);
    z.row(i) = acc;
  }
  add_bias(z, params.bias);
  return z;
}

Matrix coupling_preactivation(const Matrix& x, const GraphContext& ctx, const Coupling& coupling) {
  return std::visit(
      [&](const auto& p) -> Matrix {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, GcnParams>)
          return gcn_preactivation(x, ctx, p);
        else
          return gat_preactivation(x, ctx, p);
      },
      coupling);
}

Matrix gcn_step(const Matrix& x, const GraphContext& ctx, const GcnParams& params, Activation act) {
  return activate(gcn_preactivation(x, ctx, params), act);
}

Matrix gat_step(const Matrix& x, const GraphContext& ctx, const GatParams& params, Activation act) {
  return activate(gat_preactivation(x, ctx, params), act);
}

Matrix sage_step(const Matrix& x, const GraphContext& ctx, const SageParams& params, Activation act) {
  require_rows(x, ctx);
  require_weight(x, params.self_weight, "SAGE self weight");
  require_weight(x, params.neighbor_weight, "SAGE neighbor weight");
  if (params.self_weight.cols() != params.neighbor_weight.cols())
    throw ShapeError("SAGE self and neighbor weights have different output widths");
  Matrix z = x * params.self_weight + ctx.mean.apply(x) * params.neighbor_weight;
  add_bias(z, params.bias);
  return activate(z, act);
}

Matrix pairnorm_apply(const Matrix& x, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("PairNorm scale must be positive");
  Matrix centered = x.rowwise() - x.colwise().mean();
  const double mean_sq = centered.squaredNorm() / static_cast<double>(x.rows());
  if (!(mean_sq > 0.0)) throw std::invalid_argument("degenerate input to PairNorm");
  return centered * (scale / std::sqrt(mean_sq));
}

GraphconState graphcon_step(const GraphconState& state, const GraphContext& ctx, const GraphconParams& params,
                            Activation act) {
  if (state.x.rows() != state.y.rows() || state.x.cols() != state.y.cols())
    throw ShapeError("GraphCON state X and Y differ in shape");
  const Matrix drive = activate(coupling_preactivation(state.x, ctx, params.coupling), act);
  if (drive.cols() != state.x.cols()) throw ShapeError("GraphCON coupling must preserve the feature width");
  GraphconState next;
  next.y = state.y + params.dt * (drive - params.gamma * state.x - params.alpha * state.y);
  next.x = state.x + params.dt * next.y;
  return next;
}

Matrix g2_rates(const Matrix& t, const Graph& g, double p) {
  if (!(p >= 0.0)) throw std::invalid_argument("G2 exponent p must be >= 0");
  Matrix tau = Matrix::Zero(t.rows(), t.cols());
  for (NodeId i = 0; i < static_cast<NodeId>(t.rows()); ++i) {
    auto nb = g.neighbors(i);
    if (nb.empty()) continue;
    for (Eigen::Index k = 0; k < t.cols(); ++k) {
      double s = 0.0;
      for (NodeId j : nb) {
        const double d = std::abs(t(j, k) - t(i, k));
        if (p == 0.0)
          s += 1.0;
        else if (p == 2.0)
          s += d * d;
        else if (p == 1.0)
          s += d;
        else
          s += std::pow(d, p);
      }
      tau(i, k) = std::tanh(s);
    }
  }
  return tau;
}

Matrix g2_step(const Matrix& x, const GraphContext& ctx, const G2Params& params, Activation act) {
  require_rows(x, ctx);
  const Matrix gate = activate(gcn_preactivation(x, ctx, params.gate), act);
  if (gate.cols() != x.cols()) throw ShapeError("G2 gate must preserve the feature width");
  const Matrix tau = g2_rates(gate, ctx.graph, params.p);
  const Matrix update = activate(coupling_preactivation(x, ctx, params.coupling), act);
  if (update.cols() != x.cols()) throw ShapeError("G2 coupling must preserve the feature width");
  Matrix out = x;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) {
      const double r = tau(i, k);
      // Rows with a zero rate are passed through untouched.
      if (r != 0.0) out(i, k) = (1.0 - r) * x(i, k) + r * update(i, k);
    }
  return out;
}

Matrix resgcn_step(const Matrix& x, const GraphContext& ctx, const GcnParams& params, Activation act) {
  if (params.weight.rows() != params.weight.cols())
    throw ShapeError(fmt::format("Res-GCN weight must be square, got {}x{}", params.weight.rows(),
                                 params.weight.cols()));
  return x + gcn_step(x, ctx, params, act);
}

Matrix gcnii_step(const Matrix& x, const Matrix& x0, const GraphContext& ctx, const GcniiParams& params,
                  Activation act) {
  require_rows(x, ctx);
  if (x.rows() != x0.rows() || x.cols() != x0.cols()) throw ShapeError("GCNII needs X and X0 of equal shape");
  if (params.weight.rows() != x.cols() || params.weight.cols() != x.cols())
    throw ShapeError("GCNII weight must be square with the feature width");
  if (params.alpha < 0.0 || params.alpha > 1.0 || params.beta < 0.0 || params.beta > 1.0)
    throw std::invalid_argument("GCNII alpha and beta must lie in [0, 1]");
  const Matrix support = (1.0 - params.alpha) * ctx.normalized.apply(x) + params.alpha * x0;
  Matrix z = (1.0 - params.beta) * support + params.beta * (support * params.weight);
  return activate(z, act);
}

double gcnii_beta(std::size_t layer, double lambda) {
  if (layer == 0) throw std::invalid_argument("GCNII layers are numbered from 1");
  return std::log(1.0 + lambda / static_cast<double>(layer));
}

Graph dropedge_sample(const Graph& g, double drop_rate, std::uint64_t seed) {
  if (drop_rate < 0.0 || drop_rate > 1.0) throw std::invalid_argument("drop rate must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Edge> kept;
  for (const auto& e : g.edges())
    if (unit(rng) >= drop_rate) kept.push_back(e);
  return Graph::from_edges(kept, g.node_count());
}

}  // namespace oversmooth
