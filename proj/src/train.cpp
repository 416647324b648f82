#include "oversmooth/train.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "oversmooth/autodiff.hpp"
#include "oversmooth/harness.hpp"
#include "oversmooth/random.hpp"

namespace oversmooth {

std::string to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

Optimizer parse_optimizer(const std::string& name) {
  if (name == "adam") return Optimizer::adam;
  if (name == "sgd") return Optimizer::sgd;
  throw std::invalid_argument(fmt::format("unknown optimizer '{}'", name));
}

void validate(const TrainConfig& c, std::size_t nodes) {
  if (c.depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (c.width < 1) throw std::invalid_argument("width must be at least 1");
  if (!(c.learning_rate >= 0.0) || !std::isfinite(c.learning_rate))
    throw std::invalid_argument("learning rate must be finite and non-negative");
  if (!(c.beta1 >= 0.0 && c.beta1 < 1.0) || !(c.beta2 >= 0.0 && c.beta2 < 1.0) || !(c.epsilon > 0.0))
    throw std::invalid_argument("Adam needs beta1, beta2 in [0, 1) and epsilon > 0");
  if (c.masks.train.empty()) throw std::invalid_argument("train mask is empty");
  std::vector<int> owner(nodes, -1);
  const std::vector<std::size_t>* sets[] = {&c.masks.train, &c.masks.val, &c.masks.test};
  for (int s = 0; s < 3; ++s)
    for (auto r : *sets[s]) {
      if (r >= nodes) throw std::out_of_range(fmt::format("mask row {} outside {} nodes", r, nodes));
      if (owner[r] != -1 && owner[r] != s)
        throw std::invalid_argument(fmt::format("node {} appears in more than one mask", r));
      owner[r] = s;
    }
}

const RowVector* ModelParams::bias(std::size_t layer) const {
  if (biases.empty()) return nullptr;
  return biases.size() == 1 ? &biases[0] : &biases[layer - 1];
}

namespace {

enum Stream : std::uint64_t { kEncoder = 11, kLayer = 12, kReadout = 13 };

// Calls f(param, grad, slot) on every tensor in a fixed order.
template <class F>
void zip_params(ModelParams& p, const ModelParams& g, F&& f) {
  std::size_t slot = 0;
  if (p.encoder) f(*p.encoder, *g.encoder, slot++);
  for (std::size_t i = 0; i < p.weights.size(); ++i) f(p.weights[i], g.weights[i], slot++);
  for (std::size_t i = 0; i < p.biases.size(); ++i) f(p.biases[i], g.biases[i], slot++);
  f(p.readout, g.readout, slot++);
  f(p.readout_bias, g.readout_bias, slot++);
}

void check_inputs(const ModelParams& params, const GraphContext& ctx, const Matrix& x0) {
  if (static_cast<std::size_t>(x0.rows()) != ctx.graph.node_count())
    throw std::invalid_argument(
        fmt::format("features have {} rows but graph has {} nodes", x0.rows(), ctx.graph.node_count()));
  const auto in = params.encoder ? params.encoder->rows() : params.weights.at(0).rows();
  if (x0.cols() != in) throw std::invalid_argument(fmt::format("expected {} feature columns, got {}", in, x0.cols()));
  if (!x0.allFinite()) throw std::invalid_argument("features contain non-finite values");
}

}  // namespace

ModelParams init_params(const TrainConfig& c, std::size_t feature_width, std::size_t classes) {
  if (classes < 1) throw std::invalid_argument("need at least one class");
  ModelParams p;
  p.depth = c.depth;
  if (feature_width != c.width) p.encoder = init_weights(feature_width, c.width, derive_seed(c.seed, {kEncoder}));
  const std::size_t count = c.shared_weights ? 1 : c.depth;
  for (std::size_t l = 0; l < count; ++l) {
    p.weights.push_back(init_weights(c.width, c.width, derive_seed(c.seed, {kLayer, l})));
    if (c.bias) p.biases.push_back(RowVector::Zero(static_cast<Eigen::Index>(c.width)));
  }
  p.readout = init_weights(c.width, classes, derive_seed(c.seed, {kReadout}));
  p.readout_bias = RowVector::Zero(static_cast<Eigen::Index>(classes));
  return p;
}

LossGrad loss_and_grad(const ModelParams& params, const GraphContext& ctx, const Matrix& x0,
                       const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw std::invalid_argument("loss mask is empty");
  check_inputs(params, ctx, x0);

  Tape tape;
  std::optional<Tape::Var> enc;
  if (params.encoder) enc = tape.input(*params.encoder);
  std::vector<Tape::Var> w, b;
  for (const auto& m : params.weights) w.push_back(tape.input(m));
  for (const auto& v : params.biases) b.push_back(tape.input(v));
  const auto r = tape.input(params.readout);
  const auto rb = tape.input(params.readout_bias);

  auto h = tape.input(x0);
  if (enc) h = tape.matmul(h, *enc);
  for (std::size_t n = 1; n <= params.depth; ++n) {
    const std::size_t idx = w.size() == 1 ? 0 : n - 1;
    auto z = tape.spmm(ctx.normalized, tape.matmul(h, w[idx]));
    if (!b.empty()) z = tape.add_bias(z, b[b.size() == 1 ? 0 : n - 1]);
    h = tape.relu(z);
  }
  const auto logits = tape.add_bias(tape.matmul(h, r), rb);
  const auto loss = tape.cross_entropy(tape.row_softmax(logits), labels, rows);

  LossGrad out;
  out.loss = tape.scalar(loss);
  if (!std::isfinite(out.loss)) throw DivergenceError(fmt::format("non-finite loss {}", out.loss));
  tape.backward(loss);
  out.logits = tape.value(logits);
  out.grad.depth = params.depth;
  if (enc) out.grad.encoder = tape.grad(*enc);
  for (auto v : w) out.grad.weights.push_back(tape.grad(v));
  for (auto v : b) out.grad.biases.push_back(RowVector(tape.grad(v).row(0)));
  out.grad.readout = tape.grad(r);
  out.grad.readout_bias = RowVector(tape.grad(rb).row(0));
  return out;
}

std::vector<Matrix> hidden_features(const ModelParams& params, const GraphContext& ctx, const Matrix& x0) {
  check_inputs(params, ctx, x0);
  std::vector<Matrix> hs;
  hs.push_back(params.encoder ? Matrix(x0 * *params.encoder) : x0);
  for (std::size_t n = 1; n <= params.depth; ++n) {
    Matrix z = ctx.normalized.apply(hs.back() * params.weight(n));
    if (const RowVector* b = params.bias(n)) z.rowwise() += *b;
    hs.push_back(z.cwiseMax(0.0));
  }
  return hs;
}

Matrix predict_logits(const ModelParams& params, const GraphContext& ctx, const Matrix& x0) {
  Matrix h = hidden_features(params, ctx, x0).back();
  Matrix logits = h * params.readout;
  logits.rowwise() += params.readout_bias;
  return logits;
}

double accuracy(const Matrix& logits, const std::vector<int>& labels, const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t hit = 0;
  for (auto r : rows) {
    Eigen::Index best = 0;
    logits.row(static_cast<Eigen::Index>(r)).maxCoeff(&best);
    if (best == labels.at(r)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(rows.size());
}

TrainResult train(const TrainConfig& config, const GraphContext& ctx, const Matrix& x0,
                  const std::vector<int>& labels) {
  const std::size_t v = ctx.graph.node_count();
  validate(config, v);
  if (labels.size() != v) throw std::invalid_argument("one label per node is required");
  int classes = 0;
  for (int l : labels) {
    if (l < -1) throw std::invalid_argument("labels must be class ids or -1 for unlabeled");
    classes = std::max(classes, l + 1);
  }
  for (const auto* mask : {&config.masks.train, &config.masks.val, &config.masks.test})
    for (auto r : *mask)
      if (labels[r] < 0) throw std::invalid_argument(fmt::format("masked node {} has no label", r));

  ModelParams params = init_params(config, static_cast<std::size_t>(x0.cols()), static_cast<std::size_t>(classes));
  std::vector<Eigen::ArrayXXd> m1, m2;
  TrainResult result;
  double best_val = -1.0;

  for (std::size_t epoch = 0; epoch <= config.epochs; ++epoch) {
    LossGrad lg;
    try {
      lg = loss_and_grad(params, ctx, x0, labels, config.masks.train);
    } catch (const DivergenceError& e) {
      throw DivergenceError(fmt::format("training diverged at epoch {} (depth {}, lr {}): {}", epoch, config.depth,
                                        config.learning_rate, e.what()));
    }
    EpochMetrics em{epoch, lg.loss, accuracy(lg.logits, labels, config.masks.train),
                    accuracy(lg.logits, labels, config.masks.val), accuracy(lg.logits, labels, config.masks.test)};
    result.history.push_back(em);
    // Without a validation mask the latest parameters win.
    const double score = config.masks.val.empty() ? static_cast<double>(epoch) : em.val_acc;
    if (score > best_val) {
      best_val = score;
      result.best_epoch = epoch;
      result.params = params;
    }
    if (epoch == config.epochs) break;

    const double lr = config.learning_rate;
    if (config.optimizer == Optimizer::sgd) {
      zip_params(params, lg.grad, [&](auto& p, const auto& g, std::size_t) { p -= lr * g; });
    } else {
      const double t = static_cast<double>(epoch + 1);
      const double c1 = 1.0 - std::pow(config.beta1, t);
      const double c2 = 1.0 - std::pow(config.beta2, t);
      zip_params(params, lg.grad, [&](auto& p, const auto& g, std::size_t slot) {
        if (m1.size() <= slot) {
          m1.push_back(Eigen::ArrayXXd::Zero(p.rows(), p.cols()));
          m2.push_back(Eigen::ArrayXXd::Zero(p.rows(), p.cols()));
        }
        m1[slot] = config.beta1 * m1[slot] + (1.0 - config.beta1) * g.array();
        m2[slot] = config.beta2 * m2[slot] + (1.0 - config.beta2) * g.array().square();
        p.array() -= lr * (m1[slot] / c1) / ((m2[slot] / c2).sqrt() + config.epsilon);
      });
    }
  }
  return result;
}

MeasureSeries trained_energy_profile(const ModelParams& params, const GraphContext& ctx, const Matrix& x0,
                                     const std::string& run_id) {
  MeasureSeries s{"dirichlet", run_id, {}, {}};
  const auto hs = hidden_features(params, ctx, x0);
  for (std::size_t n = 0; n < hs.size(); ++n) s.push(static_cast<double>(n), dirichlet_measure(hs[n], ctx.graph));
  return s;
}

}  // namespace oversmooth
