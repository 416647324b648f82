#include "oversmooth/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace oversmooth {

Graph Graph::from_edges(std::span<const Edge> edges, std::size_t node_count) {
  if (node_count == 0) throw GraphError("graph must have at least one node");
  const auto v = static_cast<NodeId>(node_count);
  std::vector<std::vector<NodeId>> adj(node_count);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= v || b >= v)
      throw GraphError(fmt::format("edge ({}, {}) references a node outside [0, {})", a, b, v));
    if (a == b) throw GraphError(fmt::format("self-edge at node {}", a));
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  Graph g;
  g.offsets_.assign(1, 0);
  g.offsets_.reserve(node_count + 1);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
    g.indices_.insert(g.indices_.end(), list.begin(), list.end());
    g.offsets_.push_back(g.indices_.size());
  }
  return g;
}

bool Graph::has_edge(NodeId i, NodeId j) const {
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (NodeId i = 0; i < static_cast<NodeId>(node_count()); ++i)
    for (NodeId j : neighbors(i))
      if (i < j) out.emplace_back(i, j);
  return out;
}

std::uint64_t Graph::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t x) {
    for (int k = 0; k < 8; ++k) {
      h ^= (x >> (8 * k)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(node_count());
  for (const auto& [a, b] : edges()) {
    mix(static_cast<std::uint64_t>(a));
    mix(static_cast<std::uint64_t>(b));
  }
  return h;
}

namespace {

void require_positive(std::size_t n, const char* what) {
  if (n == 0) throw GraphError(fmt::format("{} must be positive", what));
}

}  // namespace

Graph grid2d(std::size_t height, std::size_t width) {
  require_positive(height, "grid height");
  require_positive(width, "grid width");
  std::vector<Edge> edges;
  auto id = [width](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * width + c); };
  for (std::size_t r = 0; r < height; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      if (c + 1 < width) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < height) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return Graph::from_edges(edges, height * width);
}

Graph ring(std::size_t nodes) {
  require_positive(nodes, "ring size");
  if (nodes < 3) return path(nodes);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i)
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>((i + 1) % nodes));
  return Graph::from_edges(edges, nodes);
}

Graph complete(std::size_t nodes) {
  require_positive(nodes, "complete graph size");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < nodes; ++i)
    for (std::size_t j = i + 1; j < nodes; ++j)
      edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
  return Graph::from_edges(edges, nodes);
}

Graph star(std::size_t nodes) {
  require_positive(nodes, "star size");
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < nodes; ++i) edges.emplace_back(0, static_cast<NodeId>(i));
  return Graph::from_edges(edges, nodes);
}

Graph barbell(std::size_t clique_size) {
  require_positive(clique_size, "barbell clique size");
  const std::size_t k = clique_size;
  std::vector<Edge> edges;
  for (std::size_t side = 0; side < 2; ++side) {
    const std::size_t base = side * k;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        edges.emplace_back(static_cast<NodeId>(base + i), static_cast<NodeId>(base + j));
  }
  edges.emplace_back(static_cast<NodeId>(k - 1), static_cast<NodeId>(k));
  return Graph::from_edges(edges, 2 * k);
}

Graph path(std::size_t nodes) {
  require_positive(nodes, "path length");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < nodes; ++i)
    edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(i + 1));
  return Graph::from_edges(edges, nodes);
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t v = g.node_count();
  std::vector<int> seen(v, 0);
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> stack;
  for (std::size_t s = 0; s < v; ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> comp;
    stack.push_back(static_cast<NodeId>(s));
    seen[s] = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (NodeId w : g.neighbors(u)) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<NodeId> local(g.node_count(), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = static_cast<NodeId>(k);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    for (NodeId w : g.neighbors(nodes[k]))
      if (local[w] > static_cast<NodeId>(k)) edges.emplace_back(static_cast<NodeId>(k), local[w]);
  return Graph::from_edges(edges, nodes.size());
}

Graph permute(const Graph& g, std::span<const NodeId> perm) {
  if (perm.size() != g.node_count()) throw GraphError("permutation size does not match node count");
  auto edges = g.edges();
  for (auto& [a, b] : edges) {
    a = perm[a];
    b = perm[b];
  }
  return Graph::from_edges(edges, g.node_count());
}

Matrix CsrMatrix::apply(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != rows)
    throw std::invalid_argument(fmt::format("operator has {} rows, input has {}", rows, x.rows()));
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      y.row(i).noalias() += values[k] * x.row(cols[k]);
  return y;
}

Matrix CsrMatrix::apply_transpose(const Matrix& x) const {
  if (static_cast<std::size_t>(x.rows()) != rows)
    throw std::invalid_argument(fmt::format("operator has {} rows, input has {}", rows, x.rows()));
  Matrix y = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      y.row(cols[k]).noalias() += values[k] * x.row(i);
  return y;
}

Eigen::MatrixXd CsrMatrix::to_dense() const {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(rows, rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) d(i, cols[k]) += values[k];
  return d;
}

CsrMatrix normalized_operator(const Graph& g) {
  const std::size_t v = g.node_count();
  std::vector<double> inv_sqrt(v);
  for (std::size_t i = 0; i < v; ++i)
    inv_sqrt[i] = 1.0 / std::sqrt(1.0 + static_cast<double>(g.degree(static_cast<NodeId>(i))));
  CsrMatrix p;
  p.rows = v;
  p.row_ptr.reserve(v + 1);
  p.cols.reserve(g.indices().size() + v);
  p.values.reserve(g.indices().size() + v);
  for (std::size_t i = 0; i < v; ++i) {
    const auto ni = static_cast<NodeId>(i);
    bool self_done = false;
    for (NodeId j : g.neighbors(ni)) {
      if (!self_done && j > ni) {
        p.cols.push_back(ni);
        p.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
        self_done = true;
      }
      p.cols.push_back(j);
      p.values.push_back(inv_sqrt[i] * inv_sqrt[j]);
    }
    if (!self_done) {
      p.cols.push_back(ni);
      p.values.push_back(inv_sqrt[i] * inv_sqrt[i]);
    }
    p.row_ptr.push_back(p.cols.size());
  }
  return p;
}

CsrMatrix laplacian(const Graph& g) {
  const std::size_t v = g.node_count();
  CsrMatrix l;
  l.rows = v;
  for (std::size_t i = 0; i < v; ++i) {
    const auto ni = static_cast<NodeId>(i);
    bool diag_done = false;
    for (NodeId j : g.neighbors(ni)) {
      if (!diag_done && j > ni) {
        l.cols.push_back(ni);
        l.values.push_back(static_cast<double>(g.degree(ni)));
        diag_done = true;
      }
      l.cols.push_back(j);
      l.values.push_back(-1.0);
    }
    if (!diag_done) {
      l.cols.push_back(ni);
      l.values.push_back(static_cast<double>(g.degree(ni)));
    }
    l.row_ptr.push_back(l.cols.size());
  }
  return l;
}

CsrMatrix mean_aggregator(const Graph& g) {
  const std::size_t v = g.node_count();
  CsrMatrix m;
  m.rows = v;
  for (std::size_t i = 0; i < v; ++i) {
    const auto ni = static_cast<NodeId>(i);
    const double w = g.degree(ni) > 0 ? 1.0 / static_cast<double>(g.degree(ni)) : 0.0;
    for (NodeId j : g.neighbors(ni)) {
      m.cols.push_back(j);
      m.values.push_back(w);
    }
    m.row_ptr.push_back(m.cols.size());
  }
  return m;
}

PowerIterationResult power_iteration(const CsrMatrix& op, std::size_t max_iterations,
                                     double tolerance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix x(op.rows, 1);
  for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, 0) = normal(rng);
  x /= x.norm();
  PowerIterationResult result;
  double previous = 0.0;
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    Matrix y = op.apply(x);
    // Rayleigh quotient keeps the sign of the dominant eigenvalue.
    const double rayleigh = x.col(0).dot(y.col(0));
    const double norm = y.norm();
    result.iterations = it;
    result.eigenvalue = rayleigh;
    if (norm == 0.0) {
      result.converged = true;
      break;
    }
    x = y / norm;
    if (it > 1 && std::abs(rayleigh - previous) <= tolerance * std::max(1.0, std::abs(rayleigh))) {
      result.converged = true;
      break;
    }
    previous = rayleigh;
  }
  return result;
}

GraphContext::GraphContext(Graph g)
    : graph(std::move(g)), normalized(normalized_operator(graph)), mean(mean_aggregator(graph)) {}

}  // namespace oversmooth
