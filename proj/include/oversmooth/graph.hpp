#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oversmooth {

using NodeId = std::int32_t;
using Edge = std::pair<NodeId, NodeId>;

// Node features, one row per node. Row-major so per-node access is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::RowVectorXd;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable simple undirected graph in compressed adjacency form.
// Neighbor lists are sorted and never contain the node itself.
class Graph {
 public:
  // Duplicates and both orientations are merged; self-edges are rejected.
  static Graph from_edges(std::span<const Edge> edges, std::size_t node_count);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return indices_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {indices_.data() + offsets_[i], indices_.data() + offsets_[i + 1]};
  }
  std::size_t degree(NodeId i) const { return offsets_[i + 1] - offsets_[i]; }
  bool has_edge(NodeId i, NodeId j) const;

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<NodeId>& indices() const { return indices_; }

  // Each undirected edge once, as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  // FNV-1a over the canonical edge list; labels output files.
  std::uint64_t content_hash() const;

  bool operator==(const Graph& other) const = default;

 private:
  Graph() = default;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> indices_;
};

// Deterministic synthetic graphs.
Graph grid2d(std::size_t height, std::size_t width);  // 4-neighbor lattice
Graph ring(std::size_t nodes);
Graph complete(std::size_t nodes);
Graph star(std::size_t nodes);                        // hub is node 0
Graph barbell(std::size_t clique_size);               // two cliques joined by one edge
Graph path(std::size_t nodes);

// Nodes in each connected component, ascending; components ordered by
// their smallest node id.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

// Subgraph induced by `nodes`; node k of the result is nodes[k].
Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes);

// Relabels node i to perm[i].
Graph permute(const Graph& g, std::span<const NodeId> perm);

// Square sparse matrix in CSR form.
struct CsrMatrix {
  std::size_t rows = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<NodeId> cols;
  std::vector<double> values;

  // Y = A X
  Matrix apply(const Matrix& x) const;
  // Y = A^T X
  Matrix apply_transpose(const Matrix& x) const;
  Eigen::MatrixXd to_dense() const;
};

// D̂^{-1/2} Â D̂^{-1/2} with Â = A + I.
CsrMatrix normalized_operator(const Graph& g);

// Combinatorial Laplacian D - A.
CsrMatrix laplacian(const Graph& g);

// Row-stochastic mean over the open neighborhood; empty rows stay zero.
CsrMatrix mean_aggregator(const Graph& g);

struct PowerIterationResult {
  double eigenvalue = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Largest-magnitude eigenvalue of a symmetric operator.
PowerIterationResult power_iteration(const CsrMatrix& op, std::size_t max_iterations = 10000,
                                     double tolerance = 1e-12, std::uint64_t seed = 7);

// A graph bundled with the operators the message-passing steps need.
struct GraphContext {
  explicit GraphContext(Graph g);

  Graph graph;
  CsrMatrix normalized;
  CsrMatrix mean;
};

}  // namespace oversmooth
