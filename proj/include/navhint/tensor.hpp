#ifndef NAVHINT_TENSOR_HPP
#define NAVHINT_TENSOR_HPP

#include <cstddef>
#include <deque>
#include <functional>
#include <string>
#include <vector>

namespace navhint {

// Dense 2-D tensor with a gradient buffer. Parameters live outside the tape
// and accumulate gradients across a forward/backward pass.
struct Tensor {
  std::size_t rows = 0, cols = 0;
  std::vector<double> v;
  std::vector<double> g;

  Tensor() = default;
  Tensor(std::size_t r, std::size_t c)
      : rows(r), cols(c), v(r * c, 0.0), g(r * c, 0.0) {}

  std::size_t size() const { return rows * cols; }
  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }
  void zero_grad() { std::fill(g.begin(), g.end(), 0.0); }
};

// Reverse-mode tape. Build a graph per forward pass, call backward(loss)
// once, read gradients off parameter tensors.
class Tape {
 public:
  using Id = int;

  Id leaf(Tensor* param);
  Id constant(Tensor value);

  const Tensor& val(Id id) const;
  double scalar(Id id) const;

  Id matmul(Id a, Id b);     // (m,k) x (k,n) -> (m,n)
  Id matmul_nt(Id a, Id b);  // (m,d) x (n,d)^T -> (m,n)
  Id add(Id a, Id b);        // same shape
  Id add_row_broadcast(Id m, Id row);  // (n,d) + (1,d)
  Id scale(Id a, double s);
  Id tanh_op(Id a);
  Id softmax_rows(Id a);
  Id scale_rows(Id m, Id weights);  // (n,d) rows scaled by (1,n)
  Id mean_rows(Id m);               // (n,d) -> (1,d)
  Id concat_rows(const std::vector<Id>& parts);
  Id concat_cols(Id a, Id b);  // (n,p) | (n,q) -> (n,p+q)
  Id slice_rows(Id m, std::size_t r0, std::size_t r1);
  Id slice_cols(Id m, std::size_t c0, std::size_t c1);
  Id reshape(Id m, std::size_t rows, std::size_t cols);
  Id embedding_rows(Id table, const std::vector<int>& ids);

  // -log softmax(logits_row)[target]; logits must be (1,V).
  Id cross_entropy(Id logits_row, int target);
  Id weighted_sum(const std::vector<Id>& scalars,
                  const std::vector<double>& weights);

  void backward(Id loss);

  bool all_finite() const;

 private:
  struct Node {
    Tensor owned;
    Tensor* external = nullptr;
    std::function<void(Tape&)> back;
    Tensor& value() { return external ? *external : owned; }
    const Tensor& value() const { return external ? *external : owned; }
    std::vector<double> grad;  // same layout as value
  };

  std::vector<double>& gbuf(Id id);
  Id push(Node node);

  std::deque<Node> nodes_;

  friend struct TapeTestPeer;
};

}  // namespace navhint

#endif
