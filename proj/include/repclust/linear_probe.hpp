#pragma once

#include <cstdint>
#include <vector>

#include "repclust/features_io.hpp"

namespace repclust {

struct ProbeConfig {
    std::size_t epochs = 1000;
    double learning_rate = 0.5;
    double test_fraction = 0.2;

    void validate() const;
};

/// Multinomial logistic regression on raw features: logits = x·W + b.
struct LinearProbe {
    Matrix weights;  // d×C
    Vector bias;     // C

    Matrix logits(const Matrix& x) const;
    std::vector<std::uint32_t> predict(const Matrix& x) const;
};

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Seeded shuffle; the first ⌈fraction·n⌉ indices form the test set. Both
/// halves are returned sorted.
Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed);

struct ProbeResult {
    LinearProbe probe;
    double accuracy = 0.0;  // held-out
    Split split;
    std::vector<double> loss_trace;
};

/// Full-batch gradient descent on the mean cross-entropy of the training
/// split. Features are standardized with training statistics during
/// optimization and the scaling is folded back into the returned weights.
ProbeResult train_linear_probe(const FeatureMatrix& x, const LabelVector& y,
                               std::uint64_t split_seed, const ProbeConfig& cfg = {});

}  // namespace repclust
