#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "repclust/features_io.hpp"
#include "repclust/rld_graph.hpp"

namespace repclust {

struct TrainConfig {
    std::size_t epochs = 300;
    double learning_rate = 0.01;
    double mask_lo = 0.05;
    double mask_hi = 0.5;
    std::uint64_t seed = 0;
    std::vector<std::size_t> hidden{64, 64};
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const;
};

/// Graph convolution stack Z^(l) = σ(Ã(α_l) Z^(l−1) W^(l)) with ReLU on
/// hidden layers and raw logits at the output.
struct GcnModel {
    std::vector<Matrix> weights;  // W^(l) is F_{l−1}×F_l
    std::vector<double> alpha;    // one scale per layer
    std::uint64_t seed = 0;
    TrainConfig config;

    std::size_t num_layers() const noexcept { return weights.size(); }
    std::vector<std::size_t> dims() const;

    /// Glorot-uniform weights, α = 1 in every layer.
    static GcnModel initialize(const std::vector<std::size_t>& dims, std::uint64_t seed);

    void validate() const;
};

/// Dense Ã = D̂^{−1/2}(αA + I)D̂^{−1/2}, D̂ the row sums of αA + I.
/// Throws ComputationError if a degree is ≤ 0.
Matrix normalize_adjacency(const AdjacencyMatrix& a, double alpha);

Matrix gcn_forward(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x);

/// One-hot label rows, zeroed for the hidden nodes.
Matrix label_features(const LabelVector& y, std::span<const std::size_t> hidden_nodes);

struct GcnGradient {
    double loss = 0.0;
    std::vector<Matrix> weights;
    std::vector<double> alpha;
};

/// Mean softmax cross-entropy over loss_nodes and its exact gradient with
/// respect to every W^(l) and α_l (including the path through D̂).
GcnGradient gcn_loss_gradient(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x,
                              const LabelVector& y, std::span<const std::size_t> loss_nodes);

double gcn_loss(const GcnModel& m, const AdjacencyMatrix& a, const Matrix& x,
                const LabelVector& y, std::span<const std::size_t> loss_nodes);

struct GcnTrainResult {
    GcnModel model;
    std::vector<double> loss_trace;
};

/// Transductive masked-node training. Each epoch draws a mask rate from
/// (mask_lo, mask_hi), masks ⌈rate·n⌉ of the non-holdout nodes, zeroes the
/// features of masked and holdout nodes, and takes one Adam step on the
/// masked cross-entropy. Holdout nodes never contribute labels or loss.
GcnTrainResult train_gcn(const AdjacencyMatrix& a, const LabelVector& y, const TrainConfig& cfg,
                         std::span<const std::size_t> holdout = {});

/// Accuracy on test_mask with test features zeroed and the remaining nodes
/// one-hot; argmax ties go to the lowest class.
double evaluate_gcn(const GcnModel& m, const AdjacencyMatrix& a, const LabelVector& y,
                    std::span<const std::size_t> test_mask);

/// Index of the largest entry per row, ties to the lowest column.
std::vector<std::uint32_t> argmax_rows(const Matrix& logits);

void save_gcn_model(const GcnModel& m, const std::string& path);
GcnModel load_gcn_model(const std::string& path);

}  // namespace repclust
