#pragma once

#include <cstddef>
#include <vector>

#include "oversmooth/graph.hpp"

namespace oversmooth {

// Reverse-mode tape over dense matrices. Records are appended in evaluation
// order, so the record list is already topologically sorted.
class Tape {
 public:
  using Var = std::size_t;

  Var input(Matrix value);
  Var matmul(Var a, Var b);
  // op * x; the operator must outlive the tape.
  Var spmm(const CsrMatrix& op, Var x);
  // x + 1 b, with b a 1 x k row.
  Var add_bias(Var x, Var b);
  Var relu(Var x);
  Var row_softmax(Var x);
  // -mean over `rows` of log probs(row, labels[row]); result is 1 x 1.
  Var cross_entropy(Var probs, std::vector<int> labels, std::vector<std::size_t> rows);

  const Matrix& value(Var v) const;
  const Matrix& grad(Var v) const;
  double scalar(Var v) const;

  // Replaces an input value; call forward() to recompute the dependents.
  void set_value(Var v, Matrix value);
  void forward();
  // Seeds d(out)/d(out) = 1 for a 1 x 1 output; gradients accumulate into
  // every record it depends on, so a Var used twice sums its contributions.
  void backward(Var out);

  std::size_t size() const { return nodes_.size(); }

 private:
  enum class Op { input, matmul, spmm, add_bias, relu, row_softmax, cross_entropy };

  struct Node {
    explicit Node(Op op, Var a = 0, Var b = 0) : op(op), a(a), b(b) {}
    Op op;
    Var a = 0;
    Var b = 0;
    const CsrMatrix* sparse = nullptr;
    std::vector<int> labels;
    std::vector<std::size_t> rows;
    Matrix value;
    Matrix grad;
  };

  Var push(Node node);
  void evaluate(Node& n) const;
  void check(Var v) const;

  std::vector<Node> nodes_;
};

}  // namespace oversmooth
