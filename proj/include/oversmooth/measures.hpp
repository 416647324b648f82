#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oversmooth/graph.hpp"

namespace oversmooth {

struct DirichletOptions {
  double p = 2.0;
  // Compare x_i / sqrt(1 + d_i) against x_j / sqrt(1 + d_j) instead of raw rows.
  // Vanishes on rows proportional to sqrt(1 + d_i), so it is not a node-similarity
  // measure on irregular graphs.
  bool degree_normalized = false;
};

// (1/v) sum_i sum_{j in N(i)} ||x_i - x_j||_p^p. Every undirected edge is
// visited once from each endpoint.
double dirichlet_energy(const Matrix& x, const Graph& g, const DirichletOptions& opts = {});

// dirichlet_energy^(1/p); the canonical node-similarity measure for p = 2.
double dirichlet_measure(const Matrix& x, const Graph& g, const DirichletOptions& opts = {});

// Rows whose norm falls below this contribute nothing to mad().
inline constexpr double kMadZeroNorm = 1e-12;

// (1/v) sum_i sum_{j in N(i)} (1 - cos(x_i, x_j)).
double mad(const Matrix& x, const Graph& g);

using Measure = std::function<double(const Matrix&, const Graph&)>;

// Sum of `base` over connected components, each evaluated on its induced
// subgraph and the matching feature rows.
double component_sum_measure(const Matrix& x, const Graph& g, const Measure& base);

// Named measures used by the harness and the CLI:
// "dirichlet" (square root, p = 2), "dirichlet-energy" (no root),
// "dirichlet-normalized", "dirichlet-p<P>", "mad".
Measure measure_by_name(const std::string& name);
std::vector<std::string> known_measures();

void check_features(const Matrix& x, const Graph& g);

// Random search for violations of the node-similarity axioms.
struct AxiomOptions {
  std::size_t width = 3;
  // Draw features from U(0.1, 1) instead of N(0, 1).
  bool positive_features = false;
  std::uint64_t seed = 1;
};

struct AxiomCounterexample {
  int condition = 0;  // 1 = constant <=> zero, 2 = subadditivity
  std::string description;
  Matrix x;
  std::optional<Matrix> y;
};

struct AxiomReport {
  bool constant_vanishes = true;    // mu(constant) == 0
  bool nonconstant_positive = true; // mu(non-constant) > 0
  bool subadditive = true;          // mu(X + Y) <= mu(X) + mu(Y)
  std::size_t trials = 0;
  std::optional<AxiomCounterexample> counterexample;

  bool all_pass() const { return constant_vanishes && nonconstant_positive && subadditive; }
};

AxiomReport verify_axioms(const Measure& measure, const Graph& g, std::size_t trials, double tol,
                          const AxiomOptions& opts = {});

// One measure sampled along depth (layers) or time.
struct MeasureSeries {
  std::string measure;
  std::string run_id;
  std::vector<double> index;
  std::vector<double> values;

  void push(double at, double value) {
    index.push_back(at);
    values.push_back(value);
  }
  std::size_t size() const { return values.size(); }
};

void check_series(const MeasureSeries& s);

enum class DecayClass { exponential, algebraic, constant, undetermined };
std::string to_string(DecayClass c);

struct FitOptions {
  double floor = 1e-12;
  double min_rate = 0.05;
  double min_r2 = 0.95;
  // Natural-log width of the band that counts as constant (max/min < e^band).
  double constant_band = 0.5;
  // Leading samples dropped before fitting.
  std::size_t warmup = 0;
};

// mu(n) ~ C1 exp(-C2 n) fitted on log values. The algebraic alternative
// regresses log mu on log(n - n_0 + h), h being the first sample spacing.
struct DecayFit {
  double c1 = 0.0;
  double c2 = 0.0;
  double r2_exp = 0.0;
  double r2_alg = 0.0;
  double alg_exponent = 0.0;
  DecayClass classification = DecayClass::undetermined;
  // Position in the input series of the first value under the floor.
  std::optional<std::size_t> floor_index;
  std::size_t points_used = 0;
};

DecayFit fit_decay(const MeasureSeries& series, const FitOptions& opts = {});

}  // namespace oversmooth
