#include "halc/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace halc {

namespace {
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double norm_cdf(double x) { return 0.5 * (1.0 + std::erf(x * kInvSqrt2)); }
double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }
}  // namespace

void Tape::check(Id id) const {
    if (id < 0 || static_cast<size_t>(id) >= nodes_.size()) {
        throw UsageError("tape: node id " + std::to_string(id) + " not recorded");
    }
}

const Tensor& Tape::val(Id id) const {
    check(id);
    return node_val(nodes_[static_cast<size_t>(id)]);
}

const Tensor& Tape::grad(Id id) const {
    check(id);
    const Node& n = nodes_[static_cast<size_t>(id)];
    if (n.grad.v.empty()) throw UsageError("tape: gradients not recorded for this node");
    return n.grad;
}

Tensor& Tape::grad_mut(Id id) { return nodes_[static_cast<size_t>(id)].grad; }

// next node id; ops compute this before push so closures can reach their own grad
Tape::Id Tape::push(Tensor value, std::function<void(Tape&)> back) {
    Node n;
    if (grad_enabled_) {
        n.grad = Tensor::zeros(value.shape);
        n.back = std::move(back);
    }
    n.own = std::move(value);
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::param(const Tensor& t) {
    Node n;
    n.ref = &t;
    if (grad_enabled_) n.grad = Tensor::zeros(t.shape);
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::constant(Tensor t) {
    Node n;
    if (grad_enabled_) n.grad = Tensor::zeros(t.shape);
    n.own = std::move(t);
    nodes_.push_back(std::move(n));
    return static_cast<Id>(nodes_.size() - 1);
}

Tape::Id Tape::matmul(Id a, Id b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (A.cols() != B.rows()) throw UsageError("matmul: inner dimensions differ");
    const int64_t m = A.rows(), k = A.cols(), n = B.cols();
    Tensor C = Tensor::zeros({m, n});
    matmul_acc(A.v.data(), B.v.data(), C.v.data(), m, k, n);
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, b, self, m, k, n](Tape& t) {
        const Tensor& dC = t.grad(self);
        matmul_acc_nt(dC.v.data(), t.val(b).v.data(), t.grad_mut(a).v.data(), m, k, n);
        matmul_acc_tn(t.val(a).v.data(), dC.v.data(), t.grad_mut(b).v.data(), m, k, n);
    });
}

Tape::Id Tape::transpose(Id a) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    Tensor T = Tensor::zeros({n, m});
    for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) T.v[static_cast<size_t>(j * m + i)] = A.v[static_cast<size_t>(i * n + j)];
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(T), [a, self, m, n](Tape& t) {
        const Tensor& dT = t.grad(self);
        Tensor& dA = t.grad_mut(a);
        for (int64_t i = 0; i < m; ++i)
            for (int64_t j = 0; j < n; ++j)
                dA.v[static_cast<size_t>(i * n + j)] += dT.v[static_cast<size_t>(j * m + i)];
    });
}

Tape::Id Tape::add(Id a, Id b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) throw UsageError("add: shape mismatch");
    Tensor C = A;
    for (size_t i = 0; i < C.v.size(); ++i) C.v[i] += B.v[i];
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, b, self](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        Tensor& db = t.grad_mut(b);
        for (size_t i = 0; i < d.v.size(); ++i) {
            da.v[i] += d.v[i];
            db.v[i] += d.v[i];
        }
    });
}

Tape::Id Tape::sub(Id a, Id b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) throw UsageError("sub: shape mismatch");
    Tensor C = A;
    for (size_t i = 0; i < C.v.size(); ++i) C.v[i] -= B.v[i];
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, b, self](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        Tensor& db = t.grad_mut(b);
        for (size_t i = 0; i < d.v.size(); ++i) {
            da.v[i] += d.v[i];
            db.v[i] -= d.v[i];
        }
    });
}

Tape::Id Tape::mul(Id a, Id b) {
    const Tensor& A = val(a);
    const Tensor& B = val(b);
    if (!A.same_shape(B)) throw UsageError("mul: shape mismatch");
    Tensor C = A;
    for (size_t i = 0; i < C.v.size(); ++i) C.v[i] *= B.v[i];
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, b, self](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& A2 = t.val(a);
        const Tensor& B2 = t.val(b);
        Tensor& da = t.grad_mut(a);
        Tensor& db = t.grad_mut(b);
        for (size_t i = 0; i < d.v.size(); ++i) {
            da.v[i] += d.v[i] * B2.v[i];
            db.v[i] += d.v[i] * A2.v[i];
        }
    });
}

Tape::Id Tape::add_rowvec(Id a, Id bias) {
    const Tensor& A = val(a);
    const Tensor& B = val(bias);
    const int64_t m = A.rows(), n = A.cols();
    if (B.numel() != n) throw UsageError("add_rowvec: bias length mismatch");
    Tensor C = A;
    for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) C.v[static_cast<size_t>(i * n + j)] += B.v[static_cast<size_t>(j)];
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, bias, self, m, n](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        Tensor& db = t.grad_mut(bias);
        for (int64_t i = 0; i < m; ++i)
            for (int64_t j = 0; j < n; ++j) {
                double g = d.v[static_cast<size_t>(i * n + j)];
                da.v[static_cast<size_t>(i * n + j)] += g;
                db.v[static_cast<size_t>(j)] += g;
            }
    });
}

Tape::Id Tape::scale(Id a, double c) {
    Tensor C = val(a);
    for (double& x : C.v) x *= c;
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, c, self](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        for (size_t i = 0; i < d.v.size(); ++i) da.v[i] += c * d.v[i];
    });
}

Tape::Id Tape::gelu(Id a) {
    const Tensor& A = val(a);
    Tensor C = A;
    for (double& x : C.v) x = x * norm_cdf(x);
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, self](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& A2 = t.val(a);
        Tensor& da = t.grad_mut(a);
        for (size_t i = 0; i < d.v.size(); ++i) {
            double x = A2.v[i];
            da.v[i] += d.v[i] * (norm_cdf(x) + x * norm_pdf(x));
        }
    });
}

Tape::Id Tape::softplus(Id a) {
    const Tensor& A = val(a);
    Tensor C = A;
    for (double& x : C.v) x = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(C), [a, self](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& A2 = t.val(a);
        Tensor& da = t.grad_mut(a);
        for (size_t i = 0; i < d.v.size(); ++i) {
            double x = A2.v[i];
            double s = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
            da.v[i] += d.v[i] * s;
        }
    });
}

Tape::Id Tape::layer_norm(Id x, Id gamma, Id beta, double eps) {
    const Tensor& X = val(x);
    const Tensor& G = val(gamma);
    const Tensor& B = val(beta);
    const int64_t m = X.rows(), n = X.cols();
    if (G.numel() != n || B.numel() != n) throw UsageError("layer_norm: gamma/beta length mismatch");

    Tensor Y = Tensor::zeros({m, n});
    // cache of x-hat and reciprocal std per row for the backward pass
    auto xhat = std::make_shared<std::vector<double>>(static_cast<size_t>(m * n));
    auto rstd = std::make_shared<std::vector<double>>(static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) {
        const double* xr = X.v.data() + i * n;
        double mean = 0.0;
        for (int64_t j = 0; j < n; ++j) mean += xr[j];
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (int64_t j = 0; j < n; ++j) {
            double c = xr[j] - mean;
            var += c * c;
        }
        var /= static_cast<double>(n);
        double rs = 1.0 / std::sqrt(var + eps);
        (*rstd)[static_cast<size_t>(i)] = rs;
        for (int64_t j = 0; j < n; ++j) {
            double xh = (xr[j] - mean) * rs;
            (*xhat)[static_cast<size_t>(i * n + j)] = xh;
            Y.v[static_cast<size_t>(i * n + j)] = G.v[static_cast<size_t>(j)] * xh + B.v[static_cast<size_t>(j)];
        }
    }
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [x, gamma, beta, self, m, n, xhat, rstd](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& G2 = t.val(gamma);
        Tensor& dx = t.grad_mut(x);
        Tensor& dg = t.grad_mut(gamma);
        Tensor& db = t.grad_mut(beta);
        for (int64_t i = 0; i < m; ++i) {
            const double* dr = d.v.data() + i * n;
            const double* xh = xhat->data() + i * n;
            double rs = (*rstd)[static_cast<size_t>(i)];
            double sum_dxhat = 0.0, sum_dxhat_xhat = 0.0;
            for (int64_t j = 0; j < n; ++j) {
                double dxh = dr[j] * G2.v[static_cast<size_t>(j)];
                sum_dxhat += dxh;
                sum_dxhat_xhat += dxh * xh[j];
                dg.v[static_cast<size_t>(j)] += dr[j] * xh[j];
                db.v[static_cast<size_t>(j)] += dr[j];
            }
            double inv_n = 1.0 / static_cast<double>(n);
            for (int64_t j = 0; j < n; ++j) {
                double dxh = dr[j] * G2.v[static_cast<size_t>(j)];
                dx.v[static_cast<size_t>(i * n + j)] +=
                    (dxh - inv_n * sum_dxhat - xh[j] * inv_n * sum_dxhat_xhat) * rs;
            }
        }
    });
}

Tape::Id Tape::softmax_rows(Id a) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    Tensor P = Tensor::zeros({m, n});
    for (int64_t i = 0; i < m; ++i) {
        const double* xr = A.v.data() + i * n;
        double* pr = P.v.data() + i * n;
        double mx = xr[0];
        for (int64_t j = 1; j < n; ++j) mx = std::max(mx, xr[j]);
        double z = 0.0;
        for (int64_t j = 0; j < n; ++j) {
            pr[j] = std::exp(xr[j] - mx);
            z += pr[j];
        }
        for (int64_t j = 0; j < n; ++j) pr[j] /= z;
    }
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(P), [a, self, m, n](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& P2 = t.val(self);
        Tensor& da = t.grad_mut(a);
        for (int64_t i = 0; i < m; ++i) {
            const double* dr = d.v.data() + i * n;
            const double* pr = P2.v.data() + i * n;
            double dotv = 0.0;
            for (int64_t j = 0; j < n; ++j) dotv += dr[j] * pr[j];
            for (int64_t j = 0; j < n; ++j) da.v[static_cast<size_t>(i * n + j)] += pr[j] * (dr[j] - dotv);
        }
    });
}

Tape::Id Tape::log_softmax_rows(Id a) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    Tensor Y = Tensor::zeros({m, n});
    for (int64_t i = 0; i < m; ++i) {
        const double* xr = A.v.data() + i * n;
        double* yr = Y.v.data() + i * n;
        double mx = xr[0];
        for (int64_t j = 1; j < n; ++j) mx = std::max(mx, xr[j]);
        double z = 0.0;
        for (int64_t j = 0; j < n; ++j) z += std::exp(xr[j] - mx);
        double lse = mx + std::log(z);
        for (int64_t j = 0; j < n; ++j) yr[j] = xr[j] - lse;
    }
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [a, self, m, n](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& Y2 = t.val(self);
        Tensor& da = t.grad_mut(a);
        for (int64_t i = 0; i < m; ++i) {
            const double* dr = d.v.data() + i * n;
            const double* yr = Y2.v.data() + i * n;
            double dsum = 0.0;
            for (int64_t j = 0; j < n; ++j) dsum += dr[j];
            for (int64_t j = 0; j < n; ++j)
                da.v[static_cast<size_t>(i * n + j)] += dr[j] - std::exp(yr[j]) * dsum;
        }
    });
}

Tape::Id Tape::l2_normalize_rows(Id a) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    Tensor Y = Tensor::zeros({m, n});
    auto rnorm = std::make_shared<std::vector<double>>(static_cast<size_t>(m));
    for (int64_t i = 0; i < m; ++i) {
        const double* xr = A.v.data() + i * n;
        double r = std::max(l2_norm({xr, static_cast<size_t>(n)}), 1e-12);
        (*rnorm)[static_cast<size_t>(i)] = r;
        for (int64_t j = 0; j < n; ++j) Y.v[static_cast<size_t>(i * n + j)] = xr[j] / r;
    }
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [a, self, m, n, rnorm](Tape& t) {
        const Tensor& d = t.grad(self);
        const Tensor& Y2 = t.val(self);
        Tensor& da = t.grad_mut(a);
        for (int64_t i = 0; i < m; ++i) {
            const double* dr = d.v.data() + i * n;
            const double* yr = Y2.v.data() + i * n;
            double r = (*rnorm)[static_cast<size_t>(i)];
            double dotv = 0.0;
            for (int64_t j = 0; j < n; ++j) dotv += dr[j] * yr[j];
            for (int64_t j = 0; j < n; ++j)
                da.v[static_cast<size_t>(i * n + j)] += (dr[j] - yr[j] * dotv) / r;
        }
    });
}

Tape::Id Tape::gather_rows(Id table, std::vector<int> ids) {
    const Tensor& T = val(table);
    const int64_t n = T.cols();
    Tensor Y = Tensor::zeros({static_cast<int64_t>(ids.size()), n});
    for (size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0 || ids[i] >= T.rows()) throw UsageError("gather_rows: index out of range");
        std::copy_n(T.v.data() + static_cast<int64_t>(ids[i]) * n, n, Y.v.data() + static_cast<int64_t>(i) * n);
    }
    const Id self = static_cast<Id>(nodes_.size());
    auto idv = std::make_shared<std::vector<int>>(std::move(ids));
    return push(std::move(Y), [table, self, n, idv](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& dt = t.grad_mut(table);
        for (size_t i = 0; i < idv->size(); ++i) {
            const double* dr = d.v.data() + static_cast<int64_t>(i) * n;
            double* tr = dt.v.data() + static_cast<int64_t>((*idv)[i]) * n;
            for (int64_t j = 0; j < n; ++j) tr[j] += dr[j];
        }
    });
}

Tape::Id Tape::slice_rows(Id a, int64_t r0, int64_t r1) {
    const Tensor& A = val(a);
    const int64_t n = A.cols();
    if (r0 < 0 || r1 > A.rows() || r0 >= r1) throw UsageError("slice_rows: bad range");
    Tensor Y = Tensor::zeros({r1 - r0, n});
    std::copy_n(A.v.data() + r0 * n, (r1 - r0) * n, Y.v.data());
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [a, self, r0, r1, n](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        for (int64_t i = 0; i < (r1 - r0) * n; ++i) da.v[static_cast<size_t>(r0 * n + i)] += d.v[static_cast<size_t>(i)];
    });
}

Tape::Id Tape::slice_cols(Id a, int64_t c0, int64_t c1) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    if (c0 < 0 || c1 > n || c0 >= c1) throw UsageError("slice_cols: bad range");
    const int64_t w = c1 - c0;
    Tensor Y = Tensor::zeros({m, w});
    for (int64_t i = 0; i < m; ++i)
        std::copy_n(A.v.data() + i * n + c0, w, Y.v.data() + i * w);
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [a, self, m, n, c0, w](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        for (int64_t i = 0; i < m; ++i)
            for (int64_t j = 0; j < w; ++j)
                da.v[static_cast<size_t>(i * n + c0 + j)] += d.v[static_cast<size_t>(i * w + j)];
    });
}

Tape::Id Tape::concat_rows(std::span<const Id> parts) {
    if (parts.empty()) throw UsageError("concat_rows: no parts");
    const int64_t n = val(parts[0]).cols();
    int64_t m = 0;
    for (Id p : parts) {
        if (val(p).cols() != n) throw UsageError("concat_rows: column mismatch");
        m += val(p).rows();
    }
    Tensor Y = Tensor::zeros({m, n});
    int64_t off = 0;
    for (Id p : parts) {
        const Tensor& P = val(p);
        std::copy_n(P.v.data(), P.numel(), Y.v.data() + off);
        off += P.numel();
    }
    const Id self = static_cast<Id>(nodes_.size());
    auto pv = std::make_shared<std::vector<Id>>(parts.begin(), parts.end());
    return push(std::move(Y), [self, pv](Tape& t) {
        const Tensor& d = t.grad(self);
        int64_t off2 = 0;
        for (Id p : *pv) {
            Tensor& dp = t.grad_mut(p);
            for (size_t i = 0; i < dp.v.size(); ++i) dp.v[i] += d.v[static_cast<size_t>(off2) + i];
            off2 += static_cast<int64_t>(dp.v.size());
        }
    });
}

Tape::Id Tape::concat_cols(std::span<const Id> parts) {
    if (parts.empty()) throw UsageError("concat_cols: no parts");
    const int64_t m = val(parts[0]).rows();
    int64_t n = 0;
    for (Id p : parts) {
        if (val(p).rows() != m) throw UsageError("concat_cols: row mismatch");
        n += val(p).cols();
    }
    Tensor Y = Tensor::zeros({m, n});
    int64_t off = 0;
    for (Id p : parts) {
        const Tensor& P = val(p);
        const int64_t w = P.cols();
        for (int64_t i = 0; i < m; ++i)
            std::copy_n(P.v.data() + i * w, w, Y.v.data() + i * n + off);
        off += w;
    }
    const Id self = static_cast<Id>(nodes_.size());
    auto pv = std::make_shared<std::vector<Id>>(parts.begin(), parts.end());
    return push(std::move(Y), [self, pv, m, n](Tape& t) {
        const Tensor& d = t.grad(self);
        int64_t off2 = 0;
        for (Id p : *pv) {
            Tensor& dp = t.grad_mut(p);
            const int64_t w = dp.cols();
            for (int64_t i = 0; i < m; ++i)
                for (int64_t j = 0; j < w; ++j)
                    dp.v[static_cast<size_t>(i * w + j)] += d.v[static_cast<size_t>(i * n + off2 + j)];
            off2 += w;
        }
    });
}

Tape::Id Tape::mean_rows(Id a) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    Tensor Y = Tensor::zeros({1, n});
    for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j) Y.v[static_cast<size_t>(j)] += A.v[static_cast<size_t>(i * n + j)];
    for (int64_t j = 0; j < n; ++j) Y.v[static_cast<size_t>(j)] /= static_cast<double>(m);
    const Id self = static_cast<Id>(nodes_.size());
    return push(std::move(Y), [a, self, m, n](Tape& t) {
        const Tensor& d = t.grad(self);
        Tensor& da = t.grad_mut(a);
        const double inv_m = 1.0 / static_cast<double>(m);
        for (int64_t i = 0; i < m; ++i)
            for (int64_t j = 0; j < n; ++j) da.v[static_cast<size_t>(i * n + j)] += d.v[static_cast<size_t>(j)] * inv_m;
    });
}

Tape::Id Tape::pick_sum(Id a, std::vector<int> ids) {
    const Tensor& A = val(a);
    const int64_t m = A.rows(), n = A.cols();
    if (static_cast<int64_t>(ids.size()) != m) throw UsageError("pick_sum: ids length must equal row count");
    double s = 0.0;
    for (int64_t i = 0; i < m; ++i) {
        if (ids[static_cast<size_t>(i)] < 0 || ids[static_cast<size_t>(i)] >= n)
            throw UsageError("pick_sum: index out of range");
        s += A.v[static_cast<size_t>(i * n + ids[static_cast<size_t>(i)])];
    }
    const Id self = static_cast<Id>(nodes_.size());
    auto idv = std::make_shared<std::vector<int>>(std::move(ids));
    return push(Tensor::scalar(s), [a, self, n, idv](Tape& t) {
        double g = t.grad(self).v[0];
        Tensor& da = t.grad_mut(a);
        for (size_t i = 0; i < idv->size(); ++i)
            da.v[static_cast<size_t>(static_cast<int64_t>(i) * n + (*idv)[i])] += g;
    });
}

Tape::Id Tape::sum_all(Id a) {
    const Tensor& A = val(a);
    double s = 0.0;
    for (double x : A.v) s += x;
    const Id self = static_cast<Id>(nodes_.size());
    return push(Tensor::scalar(s), [a, self](Tape& t) {
        double g = t.grad(self).v[0];
        Tensor& da = t.grad_mut(a);
        for (double& x : da.v) x += g;
    });
}

Tape::Id Tape::mean_all(Id a) {
    const Tensor& A = val(a);
    double s = 0.0;
    for (double x : A.v) s += x;
    const double inv = 1.0 / static_cast<double>(A.numel());
    const Id self = static_cast<Id>(nodes_.size());
    return push(Tensor::scalar(s * inv), [a, self, inv](Tape& t) {
        double g = t.grad(self).v[0] * inv;
        Tensor& da = t.grad_mut(a);
        for (double& x : da.v) x += g;
    });
}

Tape::Id Tape::stack_scalars(std::span<const Id> scalars) {
    if (scalars.empty()) throw UsageError("stack_scalars: empty");
    Tensor Y = Tensor::zeros({static_cast<int64_t>(scalars.size())});
    for (size_t i = 0; i < scalars.size(); ++i) {
        if (val(scalars[i]).numel() != 1) throw UsageError("stack_scalars: non-scalar part");
        Y.v[i] = val(scalars[i]).v[0];
    }
    const Id self = static_cast<Id>(nodes_.size());
    auto pv = std::make_shared<std::vector<Id>>(scalars.begin(), scalars.end());
    return push(std::move(Y), [self, pv](Tape& t) {
        const Tensor& d = t.grad(self);
        for (size_t i = 0; i < pv->size(); ++i) t.grad_mut((*pv)[i]).v[0] += d.v[i];
    });
}

void Tape::backward(Id root) {
    check(root);
    if (!grad_enabled_) throw UsageError("tape: backward on a gradient-disabled tape");
    if (val(root).numel() != 1) throw UsageError("tape: backward root must be scalar");
    grad_mut(root).v[0] = 1.0;
    for (size_t i = nodes_.size(); i-- > 0;) {
        if (nodes_[i].back) nodes_[i].back(*this);
    }
}

}  // namespace halc
