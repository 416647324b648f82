#include "oversmooth/harness.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "oversmooth/random.hpp"

namespace oversmooth {

namespace {

struct ModelName {
  ModelKind kind;
  const char* name;
};

constexpr ModelName kModels[] = {
    {ModelKind::gcn, "gcn"},
    {ModelKind::gat, "gat"},
    {ModelKind::sage, "sage"},
    {ModelKind::resgcn, "resgcn"},
    {ModelKind::gcnii, "gcnii"},
    {ModelKind::pairnorm_gcn, "pairnorm-gcn"},
    {ModelKind::graphcon_gcn, "graphcon-gcn"},
    {ModelKind::g2_gcn, "g2-gcn"},
    {ModelKind::dropedge_gcn, "dropedge-gcn"},
};

// Tags separating the random streams of one run.
enum StreamTag : std::uint64_t {
  kFeatures = 1,
  kWeight = 2,
  kWeight2 = 3,
  kAttention = 4,
  kGateWeight = 5,
  kDropEdge = 6,
  kBias = 7,
};

}  // namespace

std::string to_string(ModelKind m) {
  for (const auto& e : kModels)
    if (e.kind == m) return e.name;
  return "unknown";
}

ModelKind parse_model(const std::string& name) {
  for (const auto& e : kModels)
    if (name == e.name) return e.kind;
  throw std::invalid_argument(fmt::format("unknown model '{}'", name));
}

std::vector<std::string> model_names() {
  std::vector<std::string> out;
  for (const auto& e : kModels) out.emplace_back(e.name);
  return out;
}

std::string to_string(WeightMode w) { return w == WeightMode::shared ? "shared" : "per-layer"; }

WeightMode parse_weight_mode(const std::string& name) {
  if (name == "per-layer" || name == "per_layer") return WeightMode::per_layer;
  if (name == "shared") return WeightMode::shared;
  throw std::invalid_argument(fmt::format("unknown weight mode '{}'", name));
}

std::string to_string(InitScheme s) { return s == InitScheme::glorot_uniform ? "glorot" : "fan-in"; }

InitScheme parse_init_scheme(const std::string& name) {
  if (name == "glorot" || name == "glorot_uniform") return InitScheme::glorot_uniform;
  if (name == "fan-in" || name == "fan_in_uniform") return InitScheme::fan_in_uniform;
  throw std::invalid_argument(fmt::format("unknown init scheme '{}'", name));
}

Matrix init_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index k = 0; k < x.cols(); ++k) x(i, k) = normal(rng);
  return x;
}

Matrix init_weights(std::size_t fan_in, std::size_t fan_out, std::uint64_t seed, InitScheme scheme) {
  if (fan_in == 0 || fan_out == 0) throw std::invalid_argument("weight dimensions must be positive");
  const double bound = scheme == InitScheme::glorot_uniform
                           ? std::sqrt(6.0 / static_cast<double>(fan_in + fan_out))
                           : 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-bound, bound);
  Matrix w(fan_in, fan_out);
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index k = 0; k < w.cols(); ++k) w(i, k) = unit(rng);
  return w;
}

std::string RunConfig::run_id() const {
  return fmt::format("{}-{}-d{}-m{}-s{}{}{}", to_string(model), graph_label, depth, width, seed,
                     weights == WeightMode::shared ? "-shared" : "", bias ? "-bias" : "");
}

InitScheme effective_init(const RunConfig& config) {
  if (config.init) return *config.init;
  return config.model == ModelKind::sage ? InitScheme::fan_in_uniform : InitScheme::glorot_uniform;
}

void validate(const RunConfig& config) {
  if (config.depth < 1) throw std::invalid_argument("depth must be at least 1");
  if (config.width < 1) throw std::invalid_argument("width must be at least 1");
  if (config.measures.empty()) throw std::invalid_argument("no measures requested");
  if (!(config.weight_gain >= 0.0) || !std::isfinite(config.weight_gain))
    throw std::invalid_argument("weight gain must be finite and non-negative");
  const auto& h = config.hyper;
  if (!(h.pairnorm_scale > 0.0)) throw std::invalid_argument("PairNorm scale must be positive");
  if (!(h.graphcon_dt > 0.0)) throw std::invalid_argument("GraphCON dt must be positive");
  if (h.graphcon_gamma < 0.0 || h.graphcon_alpha < 0.0)
    throw std::invalid_argument("GraphCON gamma and alpha must be non-negative");
  if (h.g2_p < 0.0) throw std::invalid_argument("G2 exponent must be non-negative");
  if (h.gcnii_alpha < 0.0 || h.gcnii_alpha > 1.0) throw std::invalid_argument("GCNII alpha must lie in [0, 1]");
  if (h.gcnii_lambda < 0.0) throw std::invalid_argument("GCNII lambda must be non-negative");
  if (h.drop_rate < 0.0 || h.drop_rate > 1.0) throw std::invalid_argument("drop rate must lie in [0, 1]");
  for (const auto& name : config.measures) measure_by_name(name);
}

namespace {

// Draws the parameters of layer n (1-based) of one run.
class LayerFactory {
 public:
  explicit LayerFactory(const RunConfig& c) : c_(c), scheme_(effective_init(c)) {}

  Matrix weight(std::size_t layer, StreamTag tag) const {
    return c_.weight_gain * init_weights(c_.width, c_.width, seed(layer, tag), scheme_);
  }

  std::optional<RowVector> bias(std::size_t layer, StreamTag tag) const {
    if (!c_.bias) return std::nullopt;
    // Bias vectors are drawn like a 1 x m weight row.
    Matrix b = c_.weight_gain * init_weights(c_.width, 1, seed(layer, static_cast<StreamTag>(tag + 100)), scheme_);
    return RowVector(b.transpose());
  }

  GcnParams gcn(std::size_t layer) const { return {weight(layer, kWeight), bias(layer, kBias)}; }

  GatParams gat(std::size_t layer) const {
    GatParams p;
    p.weight = weight(layer, kWeight);
    Matrix a = c_.weight_gain * init_weights(2 * c_.width, 1, seed(layer, kAttention), scheme_);
    p.attention = a.transpose();
    p.bias = bias(layer, kBias);
    return p;
  }

  SageParams sage(std::size_t layer) const {
    return {weight(layer, kWeight), weight(layer, kWeight2), bias(layer, kBias)};
  }

  GcnParams gate(std::size_t layer) const { return {weight(layer, kGateWeight), bias(layer, kGateWeight)}; }

 private:
  std::uint64_t seed(std::size_t layer, StreamTag tag) const {
    const std::uint64_t l = c_.weights == WeightMode::shared ? 0 : layer;
    return derive_seed(c_.seed, {static_cast<std::uint64_t>(tag), l});
  }

  const RunConfig& c_;
  InitScheme scheme_;
};

}  // namespace

std::map<std::string, MeasureSeries> propagate_record(const RunConfig& config, const Graph& g) {
  validate(config);
  std::vector<std::pair<std::string, Measure>> measures;
  for (const auto& name : config.measures) {
    Measure base = measure_by_name(name);
    if (config.per_component)
      measures.emplace_back(name, [base](const Matrix& x, const Graph& gr) {
        return component_sum_measure(x, gr, base);
      });
    else
      measures.emplace_back(name, std::move(base));
  }

  std::map<std::string, MeasureSeries> out;
  const std::string run_id = config.run_id();
  for (const auto& [name, _] : measures) out[name] = MeasureSeries{name, run_id, {}, {}};
  auto record = [&](std::size_t layer, const Matrix& x) {
    if (!x.allFinite())
      throw std::runtime_error(fmt::format("{}: non-finite features at layer {}", run_id, layer));
    for (const auto& [name, mu] : measures) out[name].push(static_cast<double>(layer), mu(x, g));
  };

  const GraphContext ctx(g);
  const LayerFactory layers(config);
  const Matrix x0 = init_features(g.node_count(), config.width, derive_seed(config.seed, {kFeatures}));
  const auto act = config.activation;
  const auto& h = config.hyper;

  Matrix x = x0;
  Matrix y = Matrix::Zero(x0.rows(), x0.cols());
  record(0, x);
  for (std::size_t n = 1; n <= config.depth; ++n) {
    switch (config.model) {
      case ModelKind::gcn: x = gcn_step(x, ctx, layers.gcn(n), act); break;
      case ModelKind::gat: x = gat_step(x, ctx, layers.gat(n), act); break;
      case ModelKind::sage: x = sage_step(x, ctx, layers.sage(n), act); break;
      case ModelKind::resgcn: x = resgcn_step(x, ctx, layers.gcn(n), act); break;
      case ModelKind::gcnii: {
        GcniiParams p{layers.weight(n, kWeight), h.gcnii_alpha, gcnii_beta(n, h.gcnii_lambda)};
        x = gcnii_step(x, x0, ctx, p, act);
        break;
      }
      case ModelKind::pairnorm_gcn:
        x = pairnorm_apply(gcn_step(x, ctx, layers.gcn(n), act), h.pairnorm_scale);
        break;
      case ModelKind::graphcon_gcn: {
        GraphconParams p{layers.gcn(n), h.graphcon_gamma, h.graphcon_alpha, h.graphcon_dt};
        auto next = graphcon_step({x, y}, ctx, p, act);
        x = std::move(next.x);
        y = std::move(next.y);
        break;
      }
      case ModelKind::g2_gcn: x = g2_step(x, ctx, G2Params{layers.gcn(n), layers.gate(n), h.g2_p}, act); break;
      case ModelKind::dropedge_gcn: {
        // Edges are resampled at every step, even with shared weights.
        const GraphContext dropped(dropedge_sample(g, h.drop_rate, derive_seed(config.seed, {kDropEdge, n})));
        x = gcn_step(x, dropped, layers.gcn(n), act);
        break;
      }
    }
    record(n, x);
  }
  return out;
}

std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs, const GraphResolver& resolve,
                            const FitOptions& fit, std::size_t threads) {
  if (configs.empty()) throw std::invalid_argument("sweep needs at least one run");
  std::vector<std::vector<SweepRow>> per_config(configs.size());

  auto run_one = [&](std::size_t idx) {
    const RunConfig& c = configs[idx];
    auto& rows = per_config[idx];
    try {
      const Graph g = resolve(c.graph_label);
      const auto series = propagate_record(c, g);
      for (const auto& name : c.measures) {
        SweepRow row{idx, c, name, std::nullopt, {}};
        try {
          row.fit = fit_decay(series.at(name), fit);
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        rows.push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      rows.clear();
      for (const auto& name : c.measures) rows.push_back(SweepRow{idx, c, name, std::nullopt, e.what()});
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < configs.size(); i = next++) run_one(i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::vector<SweepRow> out;
  for (auto& rows : per_config)
    for (auto& r : rows) out.push_back(std::move(r));
  return out;
}

}  // namespace oversmooth
