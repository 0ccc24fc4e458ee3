#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repclust/features_io.hpp"

namespace repclust {

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;  // scaled against ∂KL/∂y / 4
    double exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    std::size_t momentum_switch = 250;
    double init_sigma = 1e-4;
    std::uint64_t seed = 0;

    void validate(std::size_t n) const;
};

struct Embedding {
    Matrix coords;                 // n×2
    double kl = 0.0;               // KL(P‖Q) at the returned coordinates
    std::vector<double> kl_trace;  // KL(P‖Q) before each update
    Matrix affinities;             // symmetric joint P
};

inline constexpr std::size_t kMaxTsnePoints = 10000;
inline constexpr double kPerplexityTolerance = 1e-5;

/// Gaussian conditional distribution over the neighbors of one point whose
/// perplexity 2^H matches the target within 1e-5 relative. Input holds the
/// squared distances to the other points.
std::vector<double> calibrate_row(std::span<const double> sq_distances, double perplexity);

/// Perplexity achieved by a probability row, 2^H with H in bits.
double row_perplexity(std::span<const double> row);

/// Symmetrized joint affinities (P_{j|i} + P_{i|j}) / 2n over squared
/// Euclidean distances.
Matrix joint_affinities(const FeatureMatrix& x, double perplexity);

/// KL(P‖Q) with the Student-t kernel q_ij ∝ (1 + ‖y_i − y_j‖²)^{-1}.
double tsne_kl(const Matrix& p, const Matrix& y);

/// ∂KL/∂y_i = 4 Σ_j (p_ij − q_ij)(y_i − y_j)(1 + ‖y_i − y_j‖²)^{-1}.
Matrix tsne_gradient(const Matrix& p, const Matrix& y);

/// Exact t-SNE with early exaggeration, momentum and per-coordinate
/// gains, from a seeded isotropic Gaussian start.
Embedding tsne(const FeatureMatrix& x, const TsneConfig& cfg);

/// Mean same-label pairwise distance divided by the mean pairwise distance.
/// Values well below 1 mean classes are visible as clusters.
double cluster_visibility(const Matrix& coords, const LabelVector& y);

}  // namespace repclust
