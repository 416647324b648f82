#pragma once

// Shared helpers for the unit tests: random instances and dense reference
// implementations that do not go through the library's sparse code paths.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "oversmooth/graph.hpp"

namespace testing {

using oversmooth::Edge;
using oversmooth::Graph;
using oversmooth::Matrix;
using oversmooth::NodeId;

inline Graph random_graph(std::size_t v, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < v; ++i)
    for (std::size_t j = i + 1; j < v; ++j)
      if (coin(rng)) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
  return Graph::from_edges(edges, v);
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, scale);
  Matrix x(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) x(i, k) = normal(rng);
  return x;
}

inline Eigen::MatrixXd dense_adjacency(const Graph& g) {
  const auto v = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(v, v);
  for (const auto& [i, j] : g.edges()) a(i, j) = a(j, i) = 1.0;
  return a;
}

inline Eigen::MatrixXd dense_laplacian(const Graph& g) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::MatrixXd d = a.rowwise().sum().asDiagonal();
  return d - a;
}

// D̂^{-1/2} (A + I) D̂^{-1/2} built densely.
inline Eigen::MatrixXd dense_normalized(const Graph& g) {
  const auto v = static_cast<Eigen::Index>(g.node_count());
  const Eigen::MatrixXd ah = dense_adjacency(g) + Eigen::MatrixXd::Identity(v, v);
  const Eigen::VectorXd s = ah.rowwise().sum().array().rsqrt();
  return s.asDiagonal() * ah * s.asDiagonal();
}

inline std::vector<NodeId> random_permutation(std::size_t v, std::uint64_t seed) {
  std::vector<NodeId> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

// Row i of x moves to row perm[i], matching oversmooth::permute.
inline Matrix permute_rows(const Matrix& x, const std::vector<NodeId>& perm) {
  Matrix out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.row(perm[static_cast<std::size_t>(i)]) = x.row(i);
  return out;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace testing
