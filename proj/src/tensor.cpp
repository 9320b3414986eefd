#include "navhint/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace navhint {

namespace {
void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}
}  // namespace

Tape::Id Tape::push(Node node) {
  if (!node.external) node.grad.assign(node.owned.size(), 0.0);
  nodes_.push_back(std::move(node));
  return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::leaf(Tensor* param) {
  require(param != nullptr, "leaf: null parameter");
  Node n;
  n.external = param;
  return push(std::move(n));
}

Tape::Id Tape::constant(Tensor value) {
  Node n;
  n.owned = std::move(value);
  return push(std::move(n));
}

const Tensor& Tape::val(Id id) const { return nodes_.at(id).value(); }

double Tape::scalar(Id id) const {
  const Tensor& t = val(id);
  require(t.size() == 1, "scalar: not a 1x1 tensor");
  return t.v[0];
}

// Gradient buffer access: external leaves accumulate straight into the
// parameter's grad field.
std::vector<double>& Tape::gbuf(Id id) {
  return nodes_[id].external ? nodes_[id].external->g : nodes_[id].grad;
}

Tape::Id Tape::matmul(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.cols == B.rows, "matmul: inner dimension mismatch");
  Node n;
  n.owned = Tensor(A.rows, B.cols);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t k = 0; k < A.cols; ++k) {
      double av = A.at(i, k);
      if (av == 0.0) continue;
      for (std::size_t j = 0; j < B.cols; ++j)
        n.owned.at(i, j) += av * B.at(k, j);
    }
  Id out = push(std::move(n));
  nodes_[out].back = [a, b, out](Tape& t) {
    const Tensor& A = t.val(a);
    const Tensor& B = t.val(b);
    auto& ga = t.gbuf(a);
    auto& gb = t.gbuf(b);
    auto& go = t.gbuf(out);
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t j = 0; j < B.cols; ++j) {
        double g = go[i * B.cols + j];
        if (g == 0.0) continue;
        for (std::size_t k = 0; k < A.cols; ++k) {
          ga[i * A.cols + k] += g * B.at(k, j);
          gb[k * B.cols + j] += g * A.at(i, k);
        }
      }
  };
  return out;
}

Tape::Id Tape::matmul_nt(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.cols == B.cols, "matmul_nt: dimension mismatch");
  Node n;
  n.owned = Tensor(A.rows, B.rows);
  for (std::size_t i = 0; i < A.rows; ++i)
    for (std::size_t j = 0; j < B.rows; ++j) {
      double dot = 0;
      for (std::size_t k = 0; k < A.cols; ++k) dot += A.at(i, k) * B.at(j, k);
      n.owned.at(i, j) = dot;
    }
  Id out = push(std::move(n));
  nodes_[out].back = [a, b, out](Tape& t) {
    const Tensor& A = t.val(a);
    const Tensor& B = t.val(b);
    auto& ga = t.gbuf(a);
    auto& gb = t.gbuf(b);
    auto& go = t.gbuf(out);
    for (std::size_t i = 0; i < A.rows; ++i)
      for (std::size_t j = 0; j < B.rows; ++j) {
        double g = go[i * B.rows + j];
        if (g == 0.0) continue;
        for (std::size_t k = 0; k < A.cols; ++k) {
          ga[i * A.cols + k] += g * B.at(j, k);
          gb[j * B.cols + k] += g * A.at(i, k);
        }
      }
  };
  return out;
}

Tape::Id Tape::add(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.rows == B.rows && A.cols == B.cols, "add: shape mismatch");
  Node n;
  n.owned = Tensor(A.rows, A.cols);
  for (std::size_t i = 0; i < A.size(); ++i) n.owned.v[i] = A.v[i] + B.v[i];
  Id out = push(std::move(n));
  nodes_[out].back = [a, b, out](Tape& t) {
    auto& go = t.gbuf(out);
    auto& ga = t.gbuf(a);
    auto& gb = t.gbuf(b);
    for (std::size_t i = 0; i < go.size(); ++i) {
      ga[i] += go[i];
      gb[i] += go[i];
    }
  };
  return out;
}

Tape::Id Tape::add_row_broadcast(Id m, Id row) {
  const Tensor& M = val(m);
  const Tensor& R = val(row);
  require(R.rows == 1 && R.cols == M.cols, "add_row_broadcast: shape mismatch");
  Node n;
  n.owned = Tensor(M.rows, M.cols);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j)
      n.owned.at(i, j) = M.at(i, j) + R.at(0, j);
  Id out = push(std::move(n));
  nodes_[out].back = [m, row, out](Tape& t) {
    const Tensor& M = t.val(m);
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    auto& gr = t.gbuf(row);
    for (std::size_t i = 0; i < M.rows; ++i)
      for (std::size_t j = 0; j < M.cols; ++j) {
        gm[i * M.cols + j] += go[i * M.cols + j];
        gr[j] += go[i * M.cols + j];
      }
  };
  return out;
}

Tape::Id Tape::scale(Id a, double s) {
  const Tensor& A = val(a);
  Node n;
  n.owned = Tensor(A.rows, A.cols);
  for (std::size_t i = 0; i < A.size(); ++i) n.owned.v[i] = A.v[i] * s;
  Id out = push(std::move(n));
  nodes_[out].back = [a, s, out](Tape& t) {
    auto& go = t.gbuf(out);
    auto& ga = t.gbuf(a);
    for (std::size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * s;
  };
  return out;
}

Tape::Id Tape::tanh_op(Id a) {
  const Tensor& A = val(a);
  Node n;
  n.owned = Tensor(A.rows, A.cols);
  for (std::size_t i = 0; i < A.size(); ++i) n.owned.v[i] = std::tanh(A.v[i]);
  Id out = push(std::move(n));
  nodes_[out].back = [a, out](Tape& t) {
    const Tensor& O = t.val(out);
    auto& go = t.gbuf(out);
    auto& ga = t.gbuf(a);
    for (std::size_t i = 0; i < go.size(); ++i)
      ga[i] += go[i] * (1.0 - O.v[i] * O.v[i]);
  };
  return out;
}

Tape::Id Tape::softmax_rows(Id a) {
  const Tensor& A = val(a);
  Node n;
  n.owned = Tensor(A.rows, A.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    double mx = A.at(i, 0);
    for (std::size_t j = 1; j < A.cols; ++j) mx = std::max(mx, A.at(i, j));
    double sum = 0;
    for (std::size_t j = 0; j < A.cols; ++j) {
      double e = std::exp(A.at(i, j) - mx);
      n.owned.at(i, j) = e;
      sum += e;
    }
    for (std::size_t j = 0; j < A.cols; ++j) n.owned.at(i, j) /= sum;
  }
  Id out = push(std::move(n));
  nodes_[out].back = [a, out](Tape& t) {
    const Tensor& O = t.val(out);
    auto& go = t.gbuf(out);
    auto& ga = t.gbuf(a);
    for (std::size_t i = 0; i < O.rows; ++i) {
      double dot = 0;
      for (std::size_t j = 0; j < O.cols; ++j)
        dot += go[i * O.cols + j] * O.at(i, j);
      for (std::size_t j = 0; j < O.cols; ++j)
        ga[i * O.cols + j] += O.at(i, j) * (go[i * O.cols + j] - dot);
    }
  };
  return out;
}

Tape::Id Tape::scale_rows(Id m, Id weights) {
  const Tensor& M = val(m);
  const Tensor& W = val(weights);
  require(W.rows == 1 && W.cols == M.rows, "scale_rows: shape mismatch");
  Node n;
  n.owned = Tensor(M.rows, M.cols);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j)
      n.owned.at(i, j) = M.at(i, j) * W.at(0, i);
  Id out = push(std::move(n));
  nodes_[out].back = [m, weights, out](Tape& t) {
    const Tensor& M = t.val(m);
    const Tensor& W = t.val(weights);
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    auto& gw = t.gbuf(weights);
    for (std::size_t i = 0; i < M.rows; ++i)
      for (std::size_t j = 0; j < M.cols; ++j) {
        gm[i * M.cols + j] += go[i * M.cols + j] * W.at(0, i);
        gw[i] += go[i * M.cols + j] * M.at(i, j);
      }
  };
  return out;
}

Tape::Id Tape::mean_rows(Id m) {
  const Tensor& M = val(m);
  Node n;
  n.owned = Tensor(1, M.cols);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = 0; j < M.cols; ++j)
      n.owned.at(0, j) += M.at(i, j) / static_cast<double>(M.rows);
  Id out = push(std::move(n));
  nodes_[out].back = [m, out](Tape& t) {
    const Tensor& M = t.val(m);
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    for (std::size_t i = 0; i < M.rows; ++i)
      for (std::size_t j = 0; j < M.cols; ++j)
        gm[i * M.cols + j] += go[j] / static_cast<double>(M.rows);
  };
  return out;
}

Tape::Id Tape::concat_rows(const std::vector<Id>& parts) {
  require(!parts.empty(), "concat_rows: empty");
  std::size_t cols = val(parts[0]).cols, rows = 0;
  for (Id p : parts) {
    require(val(p).cols == cols, "concat_rows: column mismatch");
    rows += val(p).rows;
  }
  Node n;
  n.owned = Tensor(rows, cols);
  std::size_t r = 0;
  for (Id p : parts) {
    const Tensor& P = val(p);
    std::copy(P.v.begin(), P.v.end(), n.owned.v.begin() + r * cols);
    r += P.rows;
  }
  Id out = push(std::move(n));
  nodes_[out].back = [parts, cols, out](Tape& t) {
    auto& go = t.gbuf(out);
    std::size_t r = 0;
    for (Id p : parts) {
      const Tensor& P = t.val(p);
      auto& gp = t.gbuf(p);
      for (std::size_t i = 0; i < P.size(); ++i) gp[i] += go[r * cols + i];
      r += P.rows;
    }
  };
  return out;
}

Tape::Id Tape::concat_cols(Id a, Id b) {
  const Tensor& A = val(a);
  const Tensor& B = val(b);
  require(A.rows == B.rows, "concat_cols: row mismatch");
  Node n;
  n.owned = Tensor(A.rows, A.cols + B.cols);
  for (std::size_t i = 0; i < A.rows; ++i) {
    for (std::size_t j = 0; j < A.cols; ++j) n.owned.at(i, j) = A.at(i, j);
    for (std::size_t j = 0; j < B.cols; ++j)
      n.owned.at(i, A.cols + j) = B.at(i, j);
  }
  Id out = push(std::move(n));
  nodes_[out].back = [a, b, out](Tape& t) {
    const Tensor& A = t.val(a);
    const Tensor& B = t.val(b);
    auto& go = t.gbuf(out);
    auto& ga = t.gbuf(a);
    auto& gb = t.gbuf(b);
    std::size_t cols = A.cols + B.cols;
    for (std::size_t i = 0; i < A.rows; ++i) {
      for (std::size_t j = 0; j < A.cols; ++j)
        ga[i * A.cols + j] += go[i * cols + j];
      for (std::size_t j = 0; j < B.cols; ++j)
        gb[i * B.cols + j] += go[i * cols + A.cols + j];
    }
  };
  return out;
}

Tape::Id Tape::slice_rows(Id m, std::size_t r0, std::size_t r1) {
  const Tensor& M = val(m);
  require(r0 < r1 && r1 <= M.rows, "slice_rows: bad range");
  Node n;
  n.owned = Tensor(r1 - r0, M.cols);
  std::copy(M.v.begin() + r0 * M.cols, M.v.begin() + r1 * M.cols,
            n.owned.v.begin());
  Id out = push(std::move(n));
  nodes_[out].back = [m, r0, out](Tape& t) {
    const Tensor& O = t.val(out);
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    for (std::size_t i = 0; i < O.size(); ++i)
      gm[r0 * O.cols + i] += go[i];
  };
  return out;
}

Tape::Id Tape::slice_cols(Id m, std::size_t c0, std::size_t c1) {
  const Tensor& M = val(m);
  require(c0 < c1 && c1 <= M.cols, "slice_cols: bad range");
  Node n;
  n.owned = Tensor(M.rows, c1 - c0);
  for (std::size_t i = 0; i < M.rows; ++i)
    for (std::size_t j = c0; j < c1; ++j)
      n.owned.at(i, j - c0) = M.at(i, j);
  Id out = push(std::move(n));
  nodes_[out].back = [m, c0, out](Tape& t) {
    const Tensor& M = t.val(m);
    const Tensor& O = t.val(out);
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    for (std::size_t i = 0; i < O.rows; ++i)
      for (std::size_t j = 0; j < O.cols; ++j)
        gm[i * M.cols + c0 + j] += go[i * O.cols + j];
  };
  return out;
}

Tape::Id Tape::reshape(Id m, std::size_t rows, std::size_t cols) {
  const Tensor& M = val(m);
  require(rows * cols == M.size(), "reshape: size mismatch");
  Node n;
  n.owned = Tensor(rows, cols);
  n.owned.v = M.v;
  Id out = push(std::move(n));
  nodes_[out].back = [m, out](Tape& t) {
    auto& go = t.gbuf(out);
    auto& gm = t.gbuf(m);
    for (std::size_t i = 0; i < go.size(); ++i) gm[i] += go[i];
  };
  return out;
}

Tape::Id Tape::embedding_rows(Id table, const std::vector<int>& ids) {
  const Tensor& T = val(table);
  Node n;
  n.owned = Tensor(ids.size(), T.cols);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    require(ids[i] >= 0 && static_cast<std::size_t>(ids[i]) < T.rows,
            "embedding_rows: id out of range");
    for (std::size_t j = 0; j < T.cols; ++j)
      n.owned.at(i, j) = T.at(ids[i], j);
  }
  Id out = push(std::move(n));
  nodes_[out].back = [table, ids, out](Tape& t) {
    const Tensor& T = t.val(table);
    auto& go = t.gbuf(out);
    auto& gt = t.gbuf(table);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < T.cols; ++j)
        gt[ids[i] * T.cols + j] += go[i * T.cols + j];
  };
  return out;
}

Tape::Id Tape::cross_entropy(Id logits_row, int target) {
  const Tensor& L = val(logits_row);
  require(L.rows == 1, "cross_entropy: logits must be a single row");
  require(target >= 0 && static_cast<std::size_t>(target) < L.cols,
          "cross_entropy: target out of range");
  double mx = *std::max_element(L.v.begin(), L.v.end());
  double sum = 0;
  for (double x : L.v) sum += std::exp(x - mx);
  double log_z = mx + std::log(sum);
  Node n;
  n.owned = Tensor(1, 1);
  n.owned.v[0] = log_z - L.v[target];
  Id out = push(std::move(n));
  nodes_[out].back = [logits_row, target, log_z, out](Tape& t) {
    const Tensor& L = t.val(logits_row);
    auto& go = t.gbuf(out);
    auto& gl = t.gbuf(logits_row);
    for (std::size_t j = 0; j < L.cols; ++j) {
      double p = std::exp(L.v[j] - log_z);
      gl[j] += go[0] * (p - (static_cast<int>(j) == target ? 1.0 : 0.0));
    }
  };
  return out;
}

Tape::Id Tape::weighted_sum(const std::vector<Id>& scalars,
                            const std::vector<double>& weights) {
  require(scalars.size() == weights.size(), "weighted_sum: size mismatch");
  Node n;
  n.owned = Tensor(1, 1);
  for (std::size_t i = 0; i < scalars.size(); ++i)
    n.owned.v[0] += weights[i] * scalar(scalars[i]);
  Id out = push(std::move(n));
  nodes_[out].back = [scalars, weights, out](Tape& t) {
    auto& go = t.gbuf(out);
    for (std::size_t i = 0; i < scalars.size(); ++i)
      t.gbuf(scalars[i])[0] += go[0] * weights[i];
  };
  return out;
}

void Tape::backward(Id loss) {
  require(val(loss).size() == 1, "backward: loss must be scalar");
  gbuf(loss)[0] += 1.0;
  for (Id i = loss; i >= 0; --i)
    if (nodes_[i].back) nodes_[i].back(*this);
}

bool Tape::all_finite() const {
  for (const auto& n : nodes_)
    for (double x : n.value().v)
      if (!std::isfinite(x)) return false;
  return true;
}

#undef GBUF

}  // namespace navhint
