#include "gcfx/tape.hpp"

namespace gcfx {

namespace la {

Mat matmul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::argument, "tape",
                "matmul shape mismatch: " + std::to_string(a.rows()) + "x" +
                    std::to_string(a.cols()) + " * " + std::to_string(b.rows()) +
                    "x" + std::to_string(b.cols()));
  Mat c(a.rows(), b.cols());
  const Eigen::Index n = a.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

Mat matmul_nt(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols())
    throw Error(ErrorKind::argument, "tape", "matmul_nt shape mismatch");
  Mat c(a.rows(), b.rows());
  const Eigen::Index n = a.cols();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += a(i, k) * b(j, k);
      c(i, j) = s;
    }
  }
  return c;
}

Mat matmul_tn(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows())
    throw Error(ErrorKind::argument, "tape", "matmul_tn shape mismatch");
  Mat c(a.cols(), b.cols());
  const Eigen::Index n = a.rows();
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) s += a(k, i) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

}  // namespace la

Tape::NodeId Tape::push(Node n) {
  nodes_.push_back(std::move(n));
  return static_cast<NodeId>(nodes_.size() - 1);
}

Tape::NodeId Tape::constant(Mat v) {
  Node n;
  n.op = Op::leaf_const;
  n.value = std::move(v);
  n.needs_grad = false;
  return push(std::move(n));
}

Tape::NodeId Tape::param(Mat v) {
  Node n;
  n.op = Op::leaf_param;
  n.value = std::move(v);
  n.needs_grad = true;
  return push(std::move(n));
}

namespace {

void check_same_shape(const Mat& a, const Mat& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::argument, "tape",
                std::string(what) + " shape mismatch");
}

}  // namespace

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  check_same_shape(nodes_[a].value, nodes_[b].value, "add");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.value = nodes_[a].value + nodes_[b].value;
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  check_same_shape(nodes_[a].value, nodes_[b].value, "sub");
  Node n;
  n.op = Op::sub;
  n.a = a;
  n.b = b;
  n.value = nodes_[a].value - nodes_[b].value;
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
  check_same_shape(nodes_[a].value, nodes_[b].value, "mul");
  Node n;
  n.op = Op::mul;
  n.a = a;
  n.b = b;
  n.value = nodes_[a].value.cwiseProduct(nodes_[b].value);
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  Node n;
  n.op = Op::matmul;
  n.a = a;
  n.b = b;
  n.value = la::matmul(nodes_[a].value, nodes_[b].value);
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::matmul_nt(NodeId a, NodeId b) {
  Node n;
  n.op = Op::matmul_nt;
  n.a = a;
  n.b = b;
  n.value = la::matmul_nt(nodes_[a].value, nodes_[b].value);
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::add_rowvec(NodeId m, NodeId r) {
  const Mat& mv = nodes_[m].value;
  const Mat& rv = nodes_[r].value;
  if (rv.rows() != 1 || rv.cols() != mv.cols())
    throw Error(ErrorKind::argument, "tape", "add_rowvec shape mismatch");
  Node n;
  n.op = Op::add_rowvec;
  n.a = m;
  n.b = r;
  n.value = mv.rowwise() + rv.row(0);
  n.needs_grad = nodes_[m].needs_grad || nodes_[r].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::scale(NodeId a, double s) {
  Node n;
  n.op = Op::scale;
  n.a = a;
  n.s0 = s;
  n.value = nodes_[a].value * s;
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::relu(NodeId a) {
  Node n;
  n.op = Op::relu;
  n.a = a;
  n.value = nodes_[a].value.cwiseMax(0.0);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::tanh_fn(NodeId a) {
  Node n;
  n.op = Op::tanh_fn;
  n.a = a;
  n.value = nodes_[a].value.array().tanh().matrix();
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::sigmoid(NodeId a) {
  Node n;
  n.op = Op::sigmoid;
  n.a = a;
  n.value = (1.0 / (1.0 + (-nodes_[a].value.array()).exp())).matrix();
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::exp_fn(NodeId a) {
  Node n;
  n.op = Op::exp_fn;
  n.a = a;
  n.value = nodes_[a].value.array().exp().matrix();
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::log_fn(NodeId a) {
  Node n;
  n.op = Op::log_fn;
  n.a = a;
  n.value = nodes_[a].value.array().log().matrix();
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::square(NodeId a) {
  Node n;
  n.op = Op::square;
  n.a = a;
  n.value = nodes_[a].value.cwiseProduct(nodes_[a].value);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::clamp(NodeId a, double lo, double hi) {
  Node n;
  n.op = Op::clamp;
  n.a = a;
  n.s0 = lo;
  n.s1 = hi;
  n.value = nodes_[a].value.cwiseMax(lo).cwiseMin(hi);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::colsum(NodeId a) {
  Node n;
  n.op = Op::colsum;
  n.a = a;
  const Mat& v = nodes_[a].value;
  Mat out = Mat::Zero(1, v.cols());
  for (Eigen::Index i = 0; i < v.rows(); ++i) out.row(0) += v.row(i);
  n.value = std::move(out);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::row_broadcast(NodeId r, int rows) {
  const Mat& rv = nodes_[r].value;
  if (rv.rows() != 1)
    throw Error(ErrorKind::argument, "tape", "row_broadcast expects 1 x c");
  Node n;
  n.op = Op::row_broadcast;
  n.a = r;
  n.value = rv.replicate(rows, 1);
  n.needs_grad = nodes_[r].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::hcat(NodeId a, NodeId b) {
  const Mat& av = nodes_[a].value;
  const Mat& bv = nodes_[b].value;
  if (av.rows() != bv.rows())
    throw Error(ErrorKind::argument, "tape", "hcat row mismatch");
  Node n;
  n.op = Op::hcat;
  n.a = a;
  n.b = b;
  Mat out(av.rows(), av.cols() + bv.cols());
  out.leftCols(av.cols()) = av;
  out.rightCols(bv.cols()) = bv;
  n.value = std::move(out);
  n.needs_grad = nodes_[a].needs_grad || nodes_[b].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::sum_all(NodeId a) {
  Node n;
  n.op = Op::sum_all;
  n.a = a;
  const Mat& v = nodes_[a].value;
  double s = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) s += v(i, j);
  n.value = Mat::Constant(1, 1, s);
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

Tape::NodeId Tape::rsub_scalar(double s, NodeId a) {
  Node n;
  n.op = Op::rsub_scalar;
  n.a = a;
  n.s0 = s;
  n.value = (s - nodes_[a].value.array()).matrix();
  n.needs_grad = nodes_[a].needs_grad;
  return push(std::move(n));
}

const Mat& Tape::grad(NodeId id) const {
  const Node& n = nodes_[id];
  if (n.grad.size() == 0)
    throw Error(ErrorKind::argument, "tape",
                "gradient requested before backward()");
  return n.grad;
}

void Tape::accumulate(NodeId id, const Mat& g) {
  Node& n = nodes_[id];
  if (!n.needs_grad) return;
  if (n.grad.size() == 0)
    n.grad = Mat::Zero(n.value.rows(), n.value.cols());
  n.grad += g;
}

void Tape::reset_grads() {
  for (Node& n : nodes_) n.grad.resize(0, 0);
}

void Tape::backward(NodeId root) {
  const Node& r = nodes_[root];
  if (r.value.rows() != 1 || r.value.cols() != 1)
    throw Error(ErrorKind::argument, "tape", "backward root must be 1x1");
  if (!r.needs_grad) return;

  // pass-local adjoints so repeated backward() calls each add exactly one
  // full gradient to the persistent buffers
  std::vector<Mat> adj(nodes_.size());
  const auto spread = [&](NodeId id, const Mat& g) {
    const Node& t = nodes_[id];
    if (!t.needs_grad) return;
    if (adj[id].size() == 0)
      adj[id] = Mat::Zero(t.value.rows(), t.value.cols());
    adj[id] += g;
  };
  spread(root, Mat::Constant(1, 1, 1.0));

  for (NodeId id = root; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || adj[id].size() == 0) continue;
    const Mat& g = adj[id];
    switch (n.op) {
      case Op::leaf_const:
      case Op::leaf_param:
        break;
      case Op::add:
        spread(n.a, g);
        spread(n.b, g);
        break;
      case Op::sub:
        spread(n.a, g);
        spread(n.b, -g);
        break;
      case Op::mul:
        spread(n.a, g.cwiseProduct(nodes_[n.b].value));
        spread(n.b, g.cwiseProduct(nodes_[n.a].value));
        break;
      case Op::matmul:
        // c = a b : da = g b^T, db = a^T g
        spread(n.a, la::matmul_nt(g, nodes_[n.b].value));
        spread(n.b, la::matmul_tn(nodes_[n.a].value, g));
        break;
      case Op::matmul_nt:
        // c = a b^T : da = g b, db = g^T a
        spread(n.a, la::matmul(g, nodes_[n.b].value));
        spread(n.b, la::matmul_tn(g, nodes_[n.a].value));
        break;
      case Op::add_rowvec: {
        spread(n.a, g);
        Mat gr = Mat::Zero(1, g.cols());
        for (Eigen::Index i = 0; i < g.rows(); ++i) gr.row(0) += g.row(i);
        spread(n.b, gr);
        break;
      }
      case Op::scale:
        spread(n.a, g * n.s0);
        break;
      case Op::relu: {
        const Mat& x = nodes_[n.a].value;
        spread(n.a, (x.array() > 0.0).cast<double>().matrix().cwiseProduct(g));
        break;
      }
      case Op::tanh_fn: {
        const Mat& t = n.value;
        spread(n.a, ((1.0 - t.array().square()) * g.array()).matrix());
        break;
      }
      case Op::sigmoid: {
        const Mat& s = n.value;
        spread(n.a, (s.array() * (1.0 - s.array()) * g.array()).matrix());
        break;
      }
      case Op::exp_fn:
        spread(n.a, n.value.cwiseProduct(g));
        break;
      case Op::log_fn:
        spread(n.a, g.cwiseQuotient(nodes_[n.a].value));
        break;
      case Op::square:
        spread(n.a, 2.0 * nodes_[n.a].value.cwiseProduct(g));
        break;
      case Op::clamp: {
        const Mat& x = nodes_[n.a].value;
        Mat mask = ((x.array() >= n.s0) && (x.array() <= n.s1))
                       .cast<double>()
                       .matrix();
        spread(n.a, mask.cwiseProduct(g));
        break;
      }
      case Op::colsum:
        spread(n.a, g.replicate(nodes_[n.a].value.rows(), 1));
        break;
      case Op::row_broadcast: {
        Mat gr = Mat::Zero(1, g.cols());
        for (Eigen::Index i = 0; i < g.rows(); ++i) gr.row(0) += g.row(i);
        spread(n.a, gr);
        break;
      }
      case Op::hcat: {
        const Eigen::Index ac = nodes_[n.a].value.cols();
        spread(n.a, g.leftCols(ac));
        spread(n.b, g.rightCols(g.cols() - ac));
        break;
      }
      case Op::sum_all:
        spread(n.a, Mat::Constant(nodes_[n.a].value.rows(),
                                      nodes_[n.a].value.cols(), g(0, 0)));
        break;
      case Op::rsub_scalar:
        spread(n.a, -g);
        break;
    }
  }
  for (NodeId id = 0; id <= root; ++id)
    if (adj[id].size() != 0) accumulate(id, adj[id]);
}

}  // namespace gcfx
