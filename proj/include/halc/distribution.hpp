#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "halc/common.hpp"
#include "halc/rng.hpp"

namespace halc {

// Probability simplex over the caption vocabulary.
struct TokenDistribution {
    std::vector<double> p;

    size_t size() const { return p.size(); }
    double operator[](size_t i) const { return p[i]; }
};

// Max-subtracted softmax. Throws NumericError on non-finite input.
TokenDistribution softmax(std::span<const double> logits);

// Numerically symmetric sigmoid: sigma(-x) == 1 - sigma(x) to machine precision.
double sigmoid(double x);

// log(sigma(x)) computed without intermediate overflow.
double log_sigmoid(double x);

// Validates the simplex (entries >= 0, sum within 1e-9 of 1), then draws an
// index with p[index] > 0. Throws NumericError on a non-simplex input.
int sample_categorical(const TokenDistribution& dist, Rng& rng);

// Greedy pick: lowest index among maxima, so ties break deterministically.
int argmax(const TokenDistribution& dist);

}  // namespace halc
