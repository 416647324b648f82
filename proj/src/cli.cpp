#include "oversmooth/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "oversmooth/continuous.hpp"
#include "oversmooth/harness.hpp"
#include "oversmooth/io.hpp"
#include "oversmooth/plot.hpp"
#include "oversmooth/random.hpp"
#include "oversmooth/train.hpp"

namespace oversmooth {

using nlohmann::json;

namespace {

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size() || s[0] == '-') throw UsageError(fmt::format("bad {} '{}'", what, s));
  return static_cast<std::size_t>(n);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string hex_hash(const Graph& g) { return fmt::format("{:016x}", g.content_hash()); }

struct GraphSource {
  Graph graph;
  std::string label;
  std::optional<LoadedGraph> loaded;
};

GraphSource resolve_graph(const std::string& path, const std::string& synthetic) {
  if (!path.empty() && !synthetic.empty()) throw UsageError("give either --graph or --synthetic, not both");
  if (path.empty() && synthetic.empty()) throw UsageError("one of --graph or --synthetic is required");
  if (!synthetic.empty()) {
    Graph g = synthetic_graph(synthetic);
    return {std::move(g), synthetic, std::nullopt};
  }
  LoadedGraph lg = load_graph(path);
  // Files are labeled by content, never by a dataset name.
  std::string label = "file-" + hex_hash(lg.graph).substr(0, 12);
  Graph g = lg.graph;
  return {std::move(g), std::move(label), std::move(lg)};
}

void add_graph_options(CLI::App* cmd, std::string& path, std::string& synthetic) {
  cmd->add_option("--graph", path, "edge-list file");
  cmd->add_option("--synthetic", synthetic, "grid:HxW, ring:N, path:N, complete:N, star:N or barbell:K");
}

bool parse_on_off(const std::string& s) { return s == "on"; }

json fit_json(const DecayFit& f, const MeasureSeries& s) {
  json j;
  j["measure"] = s.measure;
  j["run_id"] = s.run_id;
  j["c1"] = f.c1;
  j["c2"] = f.c2;
  j["r2_exp"] = f.r2_exp;
  j["r2_alg"] = f.r2_alg;
  j["alg_exponent"] = f.alg_exponent;
  j["classification"] = to_string(f.classification);
  j["floor_index"] = f.floor_index ? json(*f.floor_index) : json(nullptr);
  j["points_used"] = f.points_used;
  return j;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

unsigned threads_from_env() {
  const char* env = std::getenv("OVERSMOOTH_THREADS");
  if (!env || !*env) return 0;
  return static_cast<unsigned>(parse_count(env, "OVERSMOOTH_THREADS"));
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-")
    out << content;
  else
    write_text(path, content);
}

struct FitFlags {
  FitOptions opts;
  void add(CLI::App* cmd) {
    cmd->add_option("--floor", opts.floor, "values below this end the fitted prefix");
    cmd->add_option("--min-rate", opts.min_rate, "smallest C2 accepted as exponential");
    cmd->add_option("--min-r2", opts.min_r2, "smallest r^2 accepted by a fit");
    cmd->add_option("--constant-band", opts.constant_band, "log max/min below which a series is constant");
    cmd->add_option("--warmup", opts.warmup, "leading samples skipped before fitting");
  }
};

// ---------------------------------------------------------------------------

struct PropagateArgs {
  std::string graph, synthetic, model = "gcn", measures = "dirichlet,mad", out, bias = "off",
                                weights = "per-layer", activation = "relu", init;
  std::size_t layers = 128, dim = 128;
  std::uint64_t seed = 0;
  double gain = 1.0;
  bool per_component = false;
  ModelHyper hyper;
};

void add_hyper_options(CLI::App* cmd, ModelHyper& h) {
  cmd->add_option("--pairnorm-scale", h.pairnorm_scale);
  cmd->add_option("--graphcon-gamma", h.graphcon_gamma);
  cmd->add_option("--graphcon-alpha", h.graphcon_alpha);
  cmd->add_option("--graphcon-dt", h.graphcon_dt);
  cmd->add_option("--g2-p", h.g2_p);
  cmd->add_option("--gcnii-alpha", h.gcnii_alpha);
  cmd->add_option("--gcnii-lambda", h.gcnii_lambda);
  cmd->add_option("--drop-rate", h.drop_rate);
}

std::vector<std::string> checked_measures(const std::string& list) {
  auto names = split_list(list);
  if (names.empty()) throw UsageError("--measure needs at least one name");
  for (const auto& n : names) {
    try {
      measure_by_name(n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return names;
}

int cmd_propagate(const PropagateArgs& a, std::ostream& out) {
  const auto src = resolve_graph(a.graph, a.synthetic);
  RunConfig c;
  c.model = parse_model(a.model);
  c.graph_label = src.label;
  c.depth = a.layers;
  c.width = a.dim;
  c.seed = a.seed;
  c.weights = parse_weight_mode(a.weights);
  c.bias = parse_on_off(a.bias);
  c.activation = parse_activation(a.activation);
  c.weight_gain = a.gain;
  if (!a.init.empty()) c.init = parse_init_scheme(a.init);
  c.measures = checked_measures(a.measures);
  c.per_component = a.per_component;
  c.hyper = a.hyper;
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto series = propagate_record(c, src.graph);
  std::vector<MeasureSeries> list;
  for (const auto& name : c.measures) list.push_back(series.at(name));
  const Metadata meta{{"model", to_string(c.model)},
                      {"seed", std::to_string(c.seed)},
                      {"graph", src.label},
                      {"graph_hash", hex_hash(src.graph)},
                      {"layers", std::to_string(c.depth)},
                      {"dim", std::to_string(c.width)},
                      {"weights", to_string(c.weights)},
                      {"bias", c.bias ? "on" : "off"},
                      {"activation", to_string(c.activation)},
                      {"init", to_string(effective_init(c))}};
  emit(a.out, format_series(list, meta), out);
  return 0;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config, out;
  std::size_t threads = 0;
  FitFlags fit;
};

RunConfig run_from_json(const json& j, const std::map<std::string, std::string>& labels) {
  static const std::vector<std::string> known = {
      "model", "graph", "layers", "dim", "seed", "seeds", "bias", "weights", "activation", "init", "gain",
      "measures", "per_component", "pairnorm_scale", "graphcon_gamma", "graphcon_alpha", "graphcon_dt", "g2_p",
      "gcnii_alpha", "gcnii_lambda", "drop_rate"};
  for (const auto& [k, _] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw UsageError(fmt::format("unknown run key '{}'", k));
  RunConfig c;
  c.model = parse_model(j.at("model").get<std::string>());
  c.graph_label = labels.at(j.at("graph").get<std::string>());
  c.depth = j.value("layers", c.depth);
  c.width = j.value("dim", c.width);
  c.bias = j.value("bias", c.bias);
  c.weights = parse_weight_mode(j.value("weights", std::string("per-layer")));
  c.activation = parse_activation(j.value("activation", std::string("relu")));
  if (j.contains("init")) c.init = parse_init_scheme(j.at("init").get<std::string>());
  c.weight_gain = j.value("gain", c.weight_gain);
  if (j.contains("measures")) c.measures = j.at("measures").get<std::vector<std::string>>();
  c.per_component = j.value("per_component", c.per_component);
  auto& h = c.hyper;
  h.pairnorm_scale = j.value("pairnorm_scale", h.pairnorm_scale);
  h.graphcon_gamma = j.value("graphcon_gamma", h.graphcon_gamma);
  h.graphcon_alpha = j.value("graphcon_alpha", h.graphcon_alpha);
  h.graphcon_dt = j.value("graphcon_dt", h.graphcon_dt);
  h.g2_p = j.value("g2_p", h.g2_p);
  h.gcnii_alpha = j.value("gcnii_alpha", h.gcnii_alpha);
  h.gcnii_lambda = j.value("gcnii_lambda", h.gcnii_lambda);
  h.drop_rate = j.value("drop_rate", h.drop_rate);
  return c;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  json doc;
  try {
    doc = json::parse(read_text(a.config));
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("{}: {}", a.config, e.what()));
  }
  if (!doc.contains("runs") || !doc["runs"].is_array() || doc["runs"].empty())
    throw UsageError("sweep config needs a non-empty \"runs\" array");

  // Graph specs are resolved once, in order of first use.
  std::map<std::string, std::string> label_of;
  std::map<std::string, Graph> graphs;
  std::vector<RunConfig> configs;
  try {
    for (const auto& r : doc["runs"]) {
      const auto spec = r.at("graph").get<std::string>();
      if (!label_of.count(spec)) {
        auto src = is_synthetic_spec(spec) ? resolve_graph("", spec) : resolve_graph(spec, "");
        label_of[spec] = src.label;
        graphs.emplace(src.label, std::move(src.graph));
      }
      std::vector<std::uint64_t> seeds;
      if (r.contains("seeds"))
        seeds = r.at("seeds").get<std::vector<std::uint64_t>>();
      else
        seeds.push_back(r.value("seed", std::uint64_t{0}));
      for (auto s : seeds) {
        RunConfig c = run_from_json(r, label_of);
        c.seed = s;
        validate(c);
        configs.push_back(std::move(c));
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("{}: {}", a.config, e.what()));
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("{}: {}", a.config, e.what()));
  }

  std::size_t threads = a.threads ? a.threads : threads_from_env();
  const auto rows = sweep(configs, [&](const std::string& label) { return graphs.at(label); }, a.fit.opts, threads);
  std::string csv = "row,run_id,measure,classification,c1,c2,r2_exp,r2_alg,floor_index,points_used,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    if (r.fit)
      csv += fmt::format("{},{},{},{},{},{},{},{},{},{},\n", r.config_index, r.config.run_id(), r.measure,
                         to_string(r.fit->classification), num(r.fit->c1), num(r.fit->c2), num(r.fit->r2_exp),
                         num(r.fit->r2_alg), r.fit->floor_index ? std::to_string(*r.fit->floor_index) : "",
                         r.fit->points_used);
    else
      csv += fmt::format("{},{},{},error,,,,,,,{}\n", r.config_index, r.config.run_id(), r.measure, err);
  }
  emit(a.out, csv, out);
  return 0;
}

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string in, out, measure, run;
  FitFlags fit;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  const auto all = read_series(a.in);
  json results = json::array();
  std::string summary;
  for (const auto& s : all) {
    if (!a.measure.empty() && s.measure != a.measure) continue;
    if (!a.run.empty() && s.run_id != a.run) continue;
    const auto f = fit_decay(s, a.fit.opts);
    results.push_back(fit_json(f, s));
    summary += fmt::format("{} {} {} c2={:.6g} r2_exp={:.4f} r2_alg={:.4f}\n", s.run_id, s.measure,
                           to_string(f.classification), f.c2, f.r2_exp, f.r2_alg);
  }
  if (results.empty()) throw std::runtime_error(fmt::format("{}: no series matched", a.in));
  const json doc = results.size() == 1 ? results[0] : results;
  if (a.out.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_text(a.out, doc.dump(2) + "\n");
    out << summary;
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct AxiomArgs {
  std::string graph, synthetic, measure = "dirichlet", out;
  std::size_t trials = 1000, dim = 3;
  double tol = 1e-9;
  bool positive = false;
  std::uint64_t seed = 1;
};

int cmd_axioms(const AxiomArgs& a, std::ostream& out) {
  const auto src = resolve_graph(a.graph, a.synthetic);
  Measure mu;
  try {
    mu = measure_by_name(a.measure);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto r = verify_axioms(mu, src.graph, a.trials, a.tol, AxiomOptions{a.dim, a.positive, a.seed});
  json j;
  j["measure"] = a.measure;
  j["graph"] = src.label;
  j["trials"] = r.trials;
  j["constant_vanishes"] = r.constant_vanishes;
  j["nonconstant_positive"] = r.nonconstant_positive;
  j["subadditive"] = r.subadditive;
  j["all_pass"] = r.all_pass();
  if (r.counterexample) {
    j["counterexample"] = {{"condition", r.counterexample->condition},
                           {"description", r.counterexample->description}};
  }
  out << fmt::format("{} on {}: constant_vanishes={} nonconstant_positive={} subadditive={}\n", a.measure, src.label,
                     r.constant_vanishes, r.nonconstant_positive, r.subadditive);
  if (r.counterexample)
    out << fmt::format("counterexample (condition {}): {}\n", r.counterexample->condition,
                       r.counterexample->description);
  if (!a.out.empty()) write_text(a.out, j.dump(2) + "\n");
  return 0;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
  std::string graph, synthetic, labels, splits, features, depths = "2,8,32,64", bias = "both",
                                                          weights = "shared", optimizer = "adam", out, energy_out,
                                                          history_out;
  std::size_t dim = 64, epochs = 200;
  double lr = 1e-2;
  std::uint64_t seed = 0;
  FitFlags fit;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  if (a.graph.empty()) throw UsageError("train needs --graph (labels refer to its node ids)");
  const auto src = resolve_graph(a.graph, "");
  const LoadedGraph& lg = *src.loaded;
  LabelSet labels = load_labels(a.labels, lg);
  if (!a.splits.empty()) load_splits(a.splits, lg, labels);
  if (!labels.has_splits) throw UsageError("no split assignment: add a split column to the labels or pass --splits");

  std::vector<bool> bias_modes;
  if (a.bias == "on" || a.bias == "both") bias_modes.push_back(true);
  if (a.bias == "off" || a.bias == "both") bias_modes.push_back(false);
  std::vector<std::size_t> depths;
  for (const auto& d : split_list(a.depths)) depths.push_back(parse_count(d, "depth"));
  if (depths.empty()) throw UsageError("--depths needs at least one value");

  const GraphContext ctx(src.graph);
  const Matrix x0 = a.features.empty()
                        ? init_features(src.graph.node_count(), a.dim, derive_seed(a.seed, {1}))
                        : load_features(a.features, lg);

  std::string acc = "depth,bias,weights,best_epoch,train_acc,val_acc,test_acc,energy_classification\n";
  std::string history = "depth,bias,epoch,loss,train_acc,val_acc,test_acc\n";
  std::vector<MeasureSeries> profiles;
  for (bool bias : bias_modes)
    for (std::size_t depth : depths) {
      TrainConfig tc;
      tc.depth = depth;
      tc.width = a.dim;
      tc.shared_weights = a.weights == "shared";
      tc.bias = bias;
      tc.learning_rate = a.lr;
      tc.epochs = a.epochs;
      tc.optimizer = parse_optimizer(a.optimizer);
      tc.seed = a.seed;
      tc.masks = labels.masks();
      const auto result = train(tc, ctx, x0, labels.labels);
      const std::string run = fmt::format("gcn-{}-{}-d{}-s{}", a.weights, bias ? "bias" : "nobias", depth, a.seed);
      auto profile = trained_energy_profile(result.params, ctx, x0, run);
      std::string cls = "n/a";
      try {
        cls = to_string(fit_decay(profile, a.fit.opts).classification);
      } catch (const std::exception&) {
        // Too few samples for a fit at shallow depth.
      }
      const auto& best = result.history[result.best_epoch];
      acc += fmt::format("{},{},{},{},{},{},{},{}\n", depth, bias ? "on" : "off", a.weights, result.best_epoch,
                         num(best.train_acc), num(best.val_acc), num(best.test_acc), cls);
      for (const auto& h : result.history)
        history += fmt::format("{},{},{},{},{},{},{}\n", depth, bias ? "on" : "off", h.epoch, num(h.loss),
                               num(h.train_acc), num(h.val_acc), num(h.test_acc));
      profiles.push_back(std::move(profile));
    }

  emit(a.out, acc, out);
  const Metadata meta{{"graph", src.label},
                      {"graph_hash", hex_hash(src.graph)},
                      {"seed", std::to_string(a.seed)},
                      {"weights", a.weights},
                      {"epochs", std::to_string(a.epochs)}};
  if (!a.energy_out.empty()) write_series(profiles, a.energy_out, meta);
  if (!a.history_out.empty()) write_text(a.history_out, history);
  return 0;
}

// ---------------------------------------------------------------------------

struct CtArgs {
  std::string graph, synthetic, dynamics = "heat", integrator = "rk4", activation = "identity",
                                coupling = "neg-laplacian", measure = "dirichlet", out, fit_out;
  double t_end = 10.0, dt = 1e-2, gamma = 0.0, alpha = 0.0;
  std::size_t stride = 0, dim = 16;
  std::uint64_t seed = 0;
  FitFlags fit;
};

int cmd_ct(const CtArgs& a, std::ostream& out) {
  const auto src = resolve_graph(a.graph, a.synthetic);
  OdeConfig c;
  c.field = parse_vector_field(a.dynamics);
  c.integrator = parse_integrator(a.integrator);
  c.activation = parse_activation(a.activation);
  c.coupling = parse_ode_coupling(a.coupling);
  c.t_end = a.t_end;
  c.dt = a.dt;
  if (a.stride) c.sample_stride = a.stride;
  c.gamma = a.gamma;
  c.alpha = a.alpha;
  c.seed = a.seed;
  c.measure = a.measure;
  try {
    validate(c);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Matrix x0 = init_features(src.graph.node_count(), a.dim, derive_seed(a.seed, {1}));
  auto series = integrate_record(c, src.graph, x0);
  series.run_id = fmt::format("ct-{}-{}-{}-s{}", to_string(c.field), src.label, to_string(c.integrator), c.seed);
  const Metadata meta{{"dynamics", to_string(c.field)},
                      {"graph", src.label},
                      {"graph_hash", hex_hash(src.graph)},
                      {"seed", std::to_string(c.seed)},
                      {"t_end", num(c.t_end)},
                      {"dt", num(c.dt)},
                      {"integrator", to_string(c.integrator)}};
  const auto fit = detect_ct_oversmoothing(series, a.fit.opts);
  if (!a.fit_out.empty()) write_text(a.fit_out, fit_json(fit, series).dump(2) + "\n");
  if (a.out.empty()) {
    out << format_series({series}, meta);
  } else {
    write_series({series}, a.out, meta);
    out << fmt::format("{} {} c2={:.6g} r2_exp={:.4f}\n", series.run_id, to_string(fit.classification), fit.c2,
                       fit.r2_exp);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct PlotArgs {
  std::string in, out, axes = "log-log", title, measure;
};

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  auto series = read_series(a.in);
  if (!a.measure.empty())
    series.erase(std::remove_if(series.begin(), series.end(), [&](const auto& s) { return s.measure != a.measure; }),
                 series.end());
  emit(a.out, render_svg(series, parse_plot_axes(a.axes), a.title), out);
  return 0;
}

}  // namespace

bool is_synthetic_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return false;
  static const char* kinds[] = {"grid", "ring", "path", "complete", "star", "barbell"};
  const auto head = spec.substr(0, colon);
  return std::any_of(std::begin(kinds), std::end(kinds), [&](const char* k) { return head == k; });
}

Graph synthetic_graph(const std::string& kind) {
  const auto colon = kind.find(':');
  if (colon == std::string::npos || !is_synthetic_spec(kind))
    throw UsageError(fmt::format("unknown synthetic graph '{}'", kind));
  const auto head = kind.substr(0, colon), arg = kind.substr(colon + 1);
  if (head == "grid") {
    const auto x = arg.find('x');
    if (x == std::string::npos) throw UsageError("grid needs HxW, e.g. grid:10x10");
    const auto h = parse_count(arg.substr(0, x), "grid height"), w = parse_count(arg.substr(x + 1), "grid width");
    if (h == 0 || w == 0) throw UsageError("grid dimensions must be positive");
    return grid2d(h, w);
  }
  const auto n = parse_count(arg, head + " size");
  try {
    if (head == "ring") return ring(n);
    if (head == "path") return path(n);
    if (head == "complete") return complete(n);
    if (head == "star") return star(n);
    return barbell(n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measure and classify over-smoothing in graph neural networks", "oversmooth"};
  app.require_subcommand(1, 1);

  PropagateArgs pa;
  auto* propagate = app.add_subcommand("propagate", "propagate random features and record measures per layer");
  add_graph_options(propagate, pa.graph, pa.synthetic);
  propagate->add_option("--model", pa.model)->check(CLI::IsMember(model_names()));
  propagate->add_option("--layers", pa.layers)->check(CLI::PositiveNumber);
  propagate->add_option("--dim", pa.dim)->check(CLI::PositiveNumber);
  propagate->add_option("--seed", pa.seed);
  propagate->add_option("--bias", pa.bias)->check(CLI::IsMember({"on", "off"}));
  propagate->add_option("--weights", pa.weights)->check(CLI::IsMember({"per-layer", "shared"}));
  propagate->add_option("--activation", pa.activation)->check(CLI::IsMember({"relu", "tanh", "identity"}));
  propagate->add_option("--init", pa.init)->check(CLI::IsMember({"glorot", "fan-in"}));
  propagate->add_option("--gain", pa.gain, "multiplier on every initialized weight");
  propagate->add_option("--measure", pa.measures, "comma-separated measure names");
  propagate->add_flag("--per-component", pa.per_component, "sum measures over connected components");
  propagate->add_option("--out", pa.out, "CSV path (stdout if omitted)");
  add_hyper_options(propagate, pa.hyper);

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a JSON list of configurations and fit every series");
  sweep_cmd->add_option("--config", sa.config)->required();
  sweep_cmd->add_option("--out", sa.out);
  sweep_cmd->add_option("--threads", sa.threads, "worker threads (default: OVERSMOOTH_THREADS or all cores)");
  sa.fit.add(sweep_cmd);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit-decay", "fit exponential and algebraic decay to series in a CSV");
  fit->add_option("--in", fa.in)->required();
  fit->add_option("--out", fa.out, "JSON path (stdout if omitted)");
  fit->add_option("--measure", fa.measure, "only this measure");
  fit->add_option("--run", fa.run, "only this run id");
  fa.fit.add(fit);

  AxiomArgs aa;
  auto* axioms = app.add_subcommand("axioms", "search for violations of the node-similarity axioms");
  add_graph_options(axioms, aa.graph, aa.synthetic);
  axioms->add_option("--measure", aa.measure);
  axioms->add_option("--trials", aa.trials)->check(CLI::PositiveNumber);
  axioms->add_option("--tol", aa.tol);
  axioms->add_option("--dim", aa.dim)->check(CLI::PositiveNumber);
  axioms->add_flag("--positive", aa.positive, "draw features from U(0.1, 1)");
  axioms->add_option("--seed", aa.seed);
  axioms->add_option("--out", aa.out, "JSON report path");

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "train deep GCNs and record accuracy and energy per depth");
  train_cmd->add_option("--graph", ta.graph)->required();
  train_cmd->add_option("--labels", ta.labels)->required();
  train_cmd->add_option("--splits", ta.splits);
  train_cmd->add_option("--features", ta.features, "node feature file (N(0,1) features if omitted)");
  train_cmd->add_option("--depths", ta.depths);
  train_cmd->add_option("--bias", ta.bias)->check(CLI::IsMember({"on", "off", "both"}));
  train_cmd->add_option("--weights", ta.weights)->check(CLI::IsMember({"per-layer", "shared"}));
  train_cmd->add_option("--optimizer", ta.optimizer)->check(CLI::IsMember({"adam", "sgd"}));
  train_cmd->add_option("--dim", ta.dim)->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", ta.epochs);
  train_cmd->add_option("--lr", ta.lr);
  train_cmd->add_option("--seed", ta.seed);
  train_cmd->add_option("--out", ta.out, "per-depth accuracy CSV (stdout if omitted)");
  train_cmd->add_option("--energy-out", ta.energy_out, "trained energy profiles CSV");
  train_cmd->add_option("--history-out", ta.history_out, "per-epoch metrics CSV");
  ta.fit.add(train_cmd);

  CtArgs ca;
  auto* ct = app.add_subcommand("ct", "integrate continuous-time dynamics and record measures over time");
  add_graph_options(ct, ca.graph, ca.synthetic);
  ct->add_option("--dynamics", ca.dynamics)->check(CLI::IsMember({"heat", "graphcon", "gcn"}));
  ct->add_option("--t-end", ca.t_end);
  ct->add_option("--dt", ca.dt);
  ct->add_option("--stride", ca.stride, "steps between samples (default: about 100 samples)");
  ct->add_option("--integrator", ca.integrator)->check(CLI::IsMember({"euler", "rk4"}));
  ct->add_option("--activation", ca.activation)->check(CLI::IsMember({"relu", "tanh", "identity"}));
  ct->add_option("--coupling", ca.coupling)->check(CLI::IsMember({"neg-laplacian", "gcn"}));
  ct->add_option("--gamma", ca.gamma);
  ct->add_option("--alpha", ca.alpha);
  ct->add_option("--dim", ca.dim)->check(CLI::PositiveNumber);
  ct->add_option("--seed", ca.seed);
  ct->add_option("--measure", ca.measure);
  ct->add_option("--out", ca.out, "CSV path (stdout if omitted)");
  ct->add_option("--fit-out", ca.fit_out, "JSON fit path");
  ca.fit.add(ct);

  PlotArgs pl;
  auto* plot = app.add_subcommand("plot", "render series from a CSV as SVG");
  plot->add_option("--in", pl.in)->required();
  plot->add_option("--out", pl.out, "SVG path (stdout if omitted)");
  plot->add_option("--axes", pl.axes)->check(CLI::IsMember({"log-log", "log-linear"}));
  plot->add_option("--title", pl.title);
  plot->add_option("--measure", pl.measure);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (propagate->parsed()) return cmd_propagate(pa, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sa, out);
    if (fit->parsed()) return cmd_fit(fa, out);
    if (axioms->parsed()) return cmd_axioms(aa, out);
    if (train_cmd->parsed()) return cmd_train(ta, out);
    if (ct->parsed()) return cmd_ct(ca, out);
    if (plot->parsed()) return cmd_plot(pl, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace oversmooth
