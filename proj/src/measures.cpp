#include "oversmooth/measures.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

namespace oversmooth {

void check_features(const Matrix& x, const Graph& g) {
  if (static_cast<std::size_t>(x.rows()) != g.node_count())
    throw std::invalid_argument(
        fmt::format("feature matrix has {} rows but graph has {} nodes", x.rows(), g.node_count()));
  if (!x.allFinite()) throw std::invalid_argument("feature matrix contains non-finite entries");
}

namespace {

double lp_power(const Eigen::Ref<const RowVector>& d, double p) {
  if (p == 2.0) return d.squaredNorm();
  if (p == 1.0) return d.cwiseAbs().sum();
  return d.cwiseAbs().array().pow(p).sum();
}

}  // namespace

double dirichlet_energy(const Matrix& x, const Graph& g, const DirichletOptions& opts) {
  check_features(x, g);
  if (!(opts.p >= 1.0)) throw std::invalid_argument("Dirichlet exponent p must be >= 1");
  const auto v = static_cast<NodeId>(g.node_count());
  double total = 0.0;
  if (!opts.degree_normalized) {
    for (NodeId i = 0; i < v; ++i)
      for (NodeId j : g.neighbors(i)) total += lp_power(x.row(i) - x.row(j), opts.p);
  } else {
    std::vector<double> scale(v);
    for (NodeId i = 0; i < v; ++i) scale[i] = 1.0 / std::sqrt(1.0 + static_cast<double>(g.degree(i)));
    for (NodeId i = 0; i < v; ++i)
      for (NodeId j : g.neighbors(i))
        total += lp_power(scale[i] * x.row(i) - scale[j] * x.row(j), opts.p);
  }
  return total / static_cast<double>(v);
}

double dirichlet_measure(const Matrix& x, const Graph& g, const DirichletOptions& opts) {
  const double e = dirichlet_energy(x, g, opts);
  if (opts.p == 2.0) return std::sqrt(e);
  return std::pow(e, 1.0 / opts.p);
}

double mad(const Matrix& x, const Graph& g) {
  check_features(x, g);
  const auto v = static_cast<NodeId>(g.node_count());
  Eigen::VectorXd norms(v);
  for (NodeId i = 0; i < v; ++i) norms[i] = x.row(i).norm();
  double total = 0.0;
  for (NodeId i = 0; i < v; ++i) {
    if (norms[i] < kMadZeroNorm) continue;
    for (NodeId j : g.neighbors(i)) {
      if (norms[j] < kMadZeroNorm) continue;
      total += 1.0 - x.row(i).dot(x.row(j)) / (norms[i] * norms[j]);
    }
  }
  return total / static_cast<double>(v);
}

double component_sum_measure(const Matrix& x, const Graph& g, const Measure& base) {
  check_features(x, g);
  const auto comps = connected_components(g);
  if (comps.size() == 1) return base(x, g);
  double total = 0.0;
  for (const auto& comp : comps) {
    Graph sub = induced_subgraph(g, comp);
    Matrix rows(static_cast<Eigen::Index>(comp.size()), x.cols());
    for (std::size_t k = 0; k < comp.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = x.row(comp[k]);
    total += base(rows, sub);
  }
  return total;
}

Measure measure_by_name(const std::string& name) {
  if (name == "dirichlet")
    return [](const Matrix& x, const Graph& g) { return dirichlet_measure(x, g); };
  if (name == "dirichlet-energy")
    return [](const Matrix& x, const Graph& g) { return dirichlet_energy(x, g); };
  if (name == "dirichlet-normalized")
    return [](const Matrix& x, const Graph& g) {
      return dirichlet_measure(x, g, {.p = 2.0, .degree_normalized = true});
    };
  if (name == "mad") return [](const Matrix& x, const Graph& g) { return mad(x, g); };
  if (name.rfind("dirichlet-p", 0) == 0) {
    double p = 0.0;
    try {
      p = std::stod(name.substr(11));
    } catch (const std::exception&) {
      throw std::invalid_argument(fmt::format("bad Dirichlet exponent in '{}'", name));
    }
    if (!(p >= 1.0)) throw std::invalid_argument(fmt::format("Dirichlet exponent must be >= 1 in '{}'", name));
    return [p](const Matrix& x, const Graph& g) { return dirichlet_measure(x, g, {.p = p}); };
  }
  throw std::invalid_argument(fmt::format("unknown measure '{}'", name));
}

std::vector<std::string> known_measures() {
  return {"dirichlet", "dirichlet-energy", "dirichlet-normalized", "dirichlet-p<P>", "mad"};
}

AxiomReport verify_axioms(const Measure& measure, const Graph& g, std::size_t trials, double tol,
                          const AxiomOptions& opts) {
  if (trials == 0) throw std::invalid_argument("verify_axioms needs at least one trial");
  const auto v = static_cast<Eigen::Index>(g.node_count());
  const auto m = static_cast<Eigen::Index>(opts.width);
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> positive(0.1, 1.0);
  auto draw = [&]() { return opts.positive_features ? positive(rng) : normal(rng); };
  auto random_matrix = [&]() {
    Matrix x(v, m);
    for (Eigen::Index i = 0; i < v; ++i)
      for (Eigen::Index k = 0; k < m; ++k) x(i, k) = draw();
    return x;
  };

  AxiomReport report;
  auto record = [&report](int condition, std::string what, Matrix x, std::optional<Matrix> y = {}) {
    if (!report.counterexample)
      report.counterexample = AxiomCounterexample{condition, std::move(what), std::move(x), std::move(y)};
  };

  for (std::size_t t = 0; t < trials; ++t) {
    ++report.trials;

    RowVector c(m);
    for (Eigen::Index k = 0; k < m; ++k) c[k] = draw();
    Matrix constant = c.replicate(v, 1);
    const double mu_c = measure(constant, g);
    if (!(std::abs(mu_c) <= tol)) {
      report.constant_vanishes = false;
      record(1, fmt::format("constant features give mu = {:.6g}", mu_c), constant);
    }

    Matrix x = random_matrix();
    bool nonconstant = false;
    for (Eigen::Index i = 1; i < v && !nonconstant; ++i) nonconstant = (x.row(i) != x.row(0));
    if (nonconstant) {
      const double mu_x = measure(x, g);
      if (!(mu_x > tol)) {
        report.nonconstant_positive = false;
        record(1, fmt::format("non-constant features give mu = {:.6g}", mu_x), x);
      }
    }

    Matrix a = random_matrix();
    Matrix b = random_matrix();
    const double lhs = measure(a + b, g);
    const double rhs = measure(a, g) + measure(b, g);
    if (!(lhs <= rhs + tol)) {
      report.subadditive = false;
      record(2, fmt::format("mu(X+Y) = {:.6g} exceeds mu(X) + mu(Y) = {:.6g}", lhs, rhs), a, b);
    }
  }
  return report;
}

}  // namespace oversmooth
