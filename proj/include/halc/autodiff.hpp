#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "halc/common.hpp"
#include "halc/tensor.hpp"

namespace halc {

// Reverse-mode gradient tape over dense tensors.
//
// Ops append nodes; backward() replays the recorded graph in reverse
// creation order, which is a topological order by construction. With
// gradients disabled the same ops run value-only, so inference and training
// share one forward implementation.
class Tape {
  public:
    using Id = int32_t;

    explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    bool grad_enabled() const { return grad_enabled_; }
    size_t size() const { return nodes_.size(); }
    void clear() { nodes_.clear(); }

    // Leaf referencing caller-owned storage (parameters). The tensor must
    // outlive the tape.
    Id param(const Tensor& t);
    // Leaf owning a copy; gradients are tracked but usually ignored.
    Id constant(Tensor t);

    const Tensor& val(Id id) const;
    const Tensor& grad(Id id) const;

    // ---- ops ----
    Id matmul(Id a, Id b);
    Id transpose(Id a);
    Id add(Id a, Id b);           // same shape
    Id sub(Id a, Id b);           // same shape
    Id mul(Id a, Id b);           // elementwise, same shape
    Id add_rowvec(Id a, Id bias); // [m,n] + [n] broadcast over rows
    Id scale(Id a, double c);
    Id gelu(Id a);
    Id softplus(Id a);
    Id layer_norm(Id x, Id gamma, Id beta, double eps);
    Id softmax_rows(Id a);
    Id log_softmax_rows(Id a);
    Id l2_normalize_rows(Id a);
    Id gather_rows(Id table, std::vector<int> ids);
    Id slice_rows(Id a, int64_t r0, int64_t r1);
    Id slice_cols(Id a, int64_t c0, int64_t c1);
    Id concat_rows(std::span<const Id> parts);
    Id concat_cols(std::span<const Id> parts);
    Id mean_rows(Id a);                       // [m,n] -> [1,n]
    Id pick_sum(Id a, std::vector<int> ids);  // sum_i a[i, ids[i]] -> [1]
    Id sum_all(Id a);
    Id mean_all(Id a);
    Id stack_scalars(std::span<const Id> scalars);  // n x [1] -> [n]

    // Seeds d(root)/d(root) = 1 and accumulates gradients for every node.
    // root must be a scalar.
    void backward(Id root);

  private:
    struct Node {
        Tensor own;
        const Tensor* ref = nullptr;  // set for param leaves
        Tensor grad;
        std::function<void(Tape&)> back;  // empty for leaves
    };

    const Tensor& node_val(const Node& n) const { return n.ref ? *n.ref : n.own; }
    Id push(Tensor value, std::function<void(Tape&)> back);
    Tensor& grad_mut(Id id);
    void check(Id id) const;

    std::vector<Node> nodes_;
    bool grad_enabled_;
};

}  // namespace halc
