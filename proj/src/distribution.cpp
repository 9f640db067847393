#include "halc/distribution.hpp"

#include <algorithm>

namespace halc {

TokenDistribution softmax(std::span<const double> logits) {
    if (logits.empty()) throw NumericError("softmax: empty logits");
    double mx = logits[0];
    for (double x : logits) {
        if (!std::isfinite(x)) throw NumericError("softmax: non-finite logit");
        mx = std::max(mx, x);
    }
    TokenDistribution out;
    out.p.resize(logits.size());
    double z = 0.0;
    for (size_t i = 0; i < logits.size(); ++i) {
        out.p[i] = std::exp(logits[i] - mx);
        z += out.p[i];
    }
    for (double& x : out.p) x /= z;
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

double log_sigmoid(double x) {
    // -softplus(-x), stable on both tails
    if (x >= 0.0) return -std::log1p(std::exp(-x));
    return x - std::log1p(std::exp(x));
}

int sample_categorical(const TokenDistribution& dist, Rng& rng) {
    if (dist.p.empty()) throw NumericError("sample_categorical: empty distribution");
    double sum = 0.0;
    for (double x : dist.p) {
        if (!std::isfinite(x) || x < 0.0) throw NumericError("sample_categorical: negative or non-finite entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw NumericError("sample_categorical: entries do not sum to 1");

    double u = rng.uniform() * sum;
    double c = 0.0;
    int last_positive = -1;
    for (size_t i = 0; i < dist.p.size(); ++i) {
        if (dist.p[i] > 0.0) last_positive = static_cast<int>(i);
        c += dist.p[i];
        if (u < c && dist.p[i] > 0.0) return static_cast<int>(i);
    }
    return last_positive;  // u landed on the tail of accumulated rounding
}

int argmax(const TokenDistribution& dist) {
    int best = 0;
    for (size_t i = 1; i < dist.p.size(); ++i) {
        if (dist.p[i] > dist.p[static_cast<size_t>(best)]) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace halc
