#include "oversmooth/autodiff.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace oversmooth {

void Tape::check(Var v) const {
  if (v >= nodes_.size()) throw std::out_of_range(fmt::format("tape has no record {}", v));
}

Tape::Var Tape::push(Node node) {
  evaluate(node);
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

Tape::Var Tape::input(Matrix value) {
  Node n(Op::input);
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

Tape::Var Tape::matmul(Var a, Var b) {
  check(a);
  check(b);
  if (nodes_[a].value.cols() != nodes_[b].value.rows())
    throw std::invalid_argument(fmt::format("matmul shape mismatch: {}x{} times {}x{}", nodes_[a].value.rows(),
                                            nodes_[a].value.cols(), nodes_[b].value.rows(), nodes_[b].value.cols()));
  Node n(Op::matmul, a, b);
  return push(std::move(n));
}

Tape::Var Tape::spmm(const CsrMatrix& op, Var x) {
  check(x);
  if (static_cast<Eigen::Index>(op.rows) != nodes_[x].value.rows())
    throw std::invalid_argument("sparse operator and features differ in row count");
  Node n(Op::spmm, x);
  n.sparse = &op;
  return push(std::move(n));
}

Tape::Var Tape::add_bias(Var x, Var b) {
  check(x);
  check(b);
  if (nodes_[b].value.rows() != 1 || nodes_[b].value.cols() != nodes_[x].value.cols())
    throw std::invalid_argument("bias must be a single row matching the feature width");
  Node n(Op::add_bias, x, b);
  return push(std::move(n));
}

Tape::Var Tape::relu(Var x) {
  check(x);
  Node n(Op::relu, x);
  return push(std::move(n));
}

Tape::Var Tape::row_softmax(Var x) {
  check(x);
  Node n(Op::row_softmax, x);
  return push(std::move(n));
}

Tape::Var Tape::cross_entropy(Var probs, std::vector<int> labels, std::vector<std::size_t> rows) {
  check(probs);
  const Matrix& p = nodes_[probs].value;
  if (rows.empty()) throw std::invalid_argument("cross-entropy over an empty mask");
  if (labels.size() != static_cast<std::size_t>(p.rows()))
    throw std::invalid_argument("one label per row is required");
  for (auto r : rows) {
    if (r >= labels.size()) throw std::out_of_range("mask row out of range");
    if (labels[r] < 0 || labels[r] >= p.cols())
      throw std::out_of_range(fmt::format("label {} outside [0, {})", labels[r], p.cols()));
  }
  Node n(Op::cross_entropy, probs);
  n.labels = std::move(labels);
  n.rows = std::move(rows);
  return push(std::move(n));
}

const Matrix& Tape::value(Var v) const {
  check(v);
  return nodes_[v].value;
}

const Matrix& Tape::grad(Var v) const {
  check(v);
  return nodes_[v].grad;
}

double Tape::scalar(Var v) const {
  const Matrix& m = value(v);
  if (m.size() != 1) throw std::invalid_argument("record is not a scalar");
  return m(0, 0);
}

void Tape::set_value(Var v, Matrix value) {
  check(v);
  Node& n = nodes_[v];
  if (n.op != Op::input) throw std::invalid_argument("only inputs can be assigned");
  if (value.rows() != n.value.rows() || value.cols() != n.value.cols())
    throw std::invalid_argument("assigned value changes the input shape");
  n.value = std::move(value);
}

void Tape::evaluate(Node& n) const {
  switch (n.op) {
    case Op::input: break;
    case Op::matmul: n.value = nodes_[n.a].value * nodes_[n.b].value; break;
    case Op::spmm: n.value = n.sparse->apply(nodes_[n.a].value); break;
    case Op::add_bias: n.value = nodes_[n.a].value.rowwise() + RowVector(nodes_[n.b].value.row(0)); break;
    case Op::relu: n.value = nodes_[n.a].value.cwiseMax(0.0); break;
    case Op::row_softmax: {
      const Matrix& x = nodes_[n.a].value;
      n.value.resize(x.rows(), x.cols());
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double top = x.row(i).maxCoeff();
        n.value.row(i) = (x.row(i).array() - top).exp().matrix();
        n.value.row(i) /= n.value.row(i).sum();
      }
      break;
    }
    case Op::cross_entropy: {
      const Matrix& p = nodes_[n.a].value;
      double total = 0.0;
      for (auto r : n.rows) total -= std::log(p(static_cast<Eigen::Index>(r), n.labels[r]));
      n.value = Matrix::Constant(1, 1, total / static_cast<double>(n.rows.size()));
      break;
    }
  }
}

void Tape::forward() {
  for (auto& n : nodes_) evaluate(n);
}

void Tape::backward(Var out) {
  check(out);
  if (nodes_[out].value.size() != 1) throw std::invalid_argument("backward needs a scalar output");
  for (auto& n : nodes_) n.grad = Matrix::Zero(n.value.rows(), n.value.cols());
  nodes_[out].grad(0, 0) = 1.0;

  for (Var k = out + 1; k-- > 0;) {
    Node& n = nodes_[k];
    const Matrix& g = n.grad;
    switch (n.op) {
      case Op::input: break;
      case Op::matmul:
        nodes_[n.a].grad.noalias() += g * nodes_[n.b].value.transpose();
        nodes_[n.b].grad.noalias() += nodes_[n.a].value.transpose() * g;
        break;
      case Op::spmm: nodes_[n.a].grad += n.sparse->apply_transpose(g); break;
      case Op::add_bias:
        nodes_[n.a].grad += g;
        nodes_[n.b].grad += g.colwise().sum();
        break;
      case Op::relu:
        nodes_[n.a].grad.array() += (nodes_[n.a].value.array() > 0.0).cast<double>() * g.array();
        break;
      case Op::row_softmax: {
        // dx = s * (g - <g, s>) row by row.
        const Matrix& s = n.value;
        const Eigen::VectorXd inner = (g.array() * s.array()).rowwise().sum();
        nodes_[n.a].grad.array() += s.array() * (g.colwise() - inner).array();
        break;
      }
      case Op::cross_entropy: {
        const Matrix& p = nodes_[n.a].value;
        const double scale = g(0, 0) / static_cast<double>(n.rows.size());
        for (auto r : n.rows) {
          const auto i = static_cast<Eigen::Index>(r);
          nodes_[n.a].grad(i, n.labels[r]) -= scale / p(i, n.labels[r]);
        }
        break;
      }
    }
  }
}

}  // namespace oversmooth
