#pragma once

#include <vector>

#include "gcfx/common.hpp"

namespace gcfx {

namespace la {

/// Matrix products with a fixed sequential accumulation order (plain loops,
/// innermost index k). Results are bitwise reproducible across shapes: rows
/// of zeros contributed by block-diagonal batching cannot change any entry.
Mat matmul(const Mat& a, const Mat& b);     // a * b
Mat matmul_nt(const Mat& a, const Mat& b);  // a * b^T
Mat matmul_tn(const Mat& a, const Mat& b);  // a^T * b

}  // namespace la

/// Reverse-mode tape over dense matrices.
///
/// Values are Eigen matrices (row vectors are 1 x d). Nodes are appended in
/// topological order by construction; backward() runs one reverse sweep from
/// a scalar (1 x 1) root. Constants never receive gradients.
class Tape {
 public:
  using NodeId = int;

  enum class Op {
    leaf_const,
    leaf_param,
    add,
    sub,
    mul,            // elementwise
    matmul,         // a * b
    matmul_nt,      // a * b^T
    add_rowvec,     // matrix + row vector broadcast over rows
    scale,          // a * scalar
    relu,
    tanh_fn,
    sigmoid,
    exp_fn,
    log_fn,
    square,
    clamp,          // zero gradient outside [lo, hi]
    colsum,         // sum over rows -> 1 x c
    row_broadcast,  // 1 x c -> n x c
    hcat,           // [a, b]
    sum_all,        // -> 1 x 1
    rsub_scalar     // scalar - a
  };

  NodeId constant(Mat v);
  NodeId param(Mat v);

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId matmul(NodeId a, NodeId b);
  NodeId matmul_nt(NodeId a, NodeId b);
  NodeId add_rowvec(NodeId m, NodeId r);
  NodeId scale(NodeId a, double s);
  NodeId relu(NodeId a);
  NodeId tanh_fn(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId exp_fn(NodeId a);
  NodeId log_fn(NodeId a);
  NodeId square(NodeId a);
  NodeId clamp(NodeId a, double lo, double hi);
  NodeId colsum(NodeId a);
  NodeId row_broadcast(NodeId r, int rows);
  NodeId hcat(NodeId a, NodeId b);
  NodeId sum_all(NodeId a);
  NodeId rsub_scalar(double s, NodeId a);  // s - a

  const Mat& value(NodeId id) const { return nodes_[id].value; }
  const Mat& grad(NodeId id) const;
  /// False when no gradient reached the node (then its gradient is zero).
  bool has_grad(NodeId id) const { return nodes_[id].grad.size() != 0; }

  /// Reverse sweep from a 1x1 root. Gradients accumulate; call reset_grads()
  /// before reusing the tape for another root.
  void backward(NodeId root);
  void reset_grads();

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Op op;
    NodeId a = -1;
    NodeId b = -1;
    double s0 = 0.0;
    double s1 = 0.0;
    Mat value;
    Mat grad;
    bool needs_grad = false;
  };

  NodeId push(Node n);
  void accumulate(NodeId id, const Mat& g);

  std::vector<Node> nodes_;
};

}  // namespace gcfx
