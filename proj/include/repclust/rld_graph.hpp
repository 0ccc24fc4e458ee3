#pragma once

#include <cstddef>

#include "repclust/features_io.hpp"
#include "repclust/linalg.hpp"

namespace repclust {

enum class DistanceKind { euclidean, cosine_distance };

DistanceKind parse_distance_kind(const std::string& name);
const char* to_string(DistanceKind kind) noexcept;

/// Negated pairwise distances scaled by √d and the mean off-diagonal
/// distance. Off-diagonal entries are finite and ≤ 0, exactly symmetric;
/// the diagonal holds -inf.
class SimilarityMatrix {
public:
    std::size_t size() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    const Matrix& data() const noexcept { return data_; }
    double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    /// Mean distance over ordered pairs p ≠ q used as the normalizer.
    double mean_distance() const noexcept { return mean_distance_; }

private:
    friend SimilarityMatrix similarity_matrix(const FeatureMatrix&, DistanceKind);
    Matrix data_;
    double mean_distance_ = 0.0;
};

/// Nonnegative symmetric weights with zero diagonal and cached degrees.
class AdjacencyMatrix {
public:
    AdjacencyMatrix() = default;

    /// Validates an arbitrary weight matrix: square, finite, nonnegative,
    /// zero diagonal, symmetric within 1e-9 relative.
    static AdjacencyMatrix from_weights(Matrix weights);

    std::size_t size() const noexcept { return static_cast<std::size_t>(data_.rows()); }
    const Matrix& data() const noexcept { return data_; }
    double operator()(std::size_t i, std::size_t j) const {
        return data_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
    /// k_i = Σ_j A_ij
    const Vector& degrees() const noexcept { return degrees_; }
    /// 2m = Σ_ij A_ij
    double total_weight() const noexcept { return total_weight_; }

private:
    friend AdjacencyMatrix adjacency_matrix(const SimilarityMatrix&, double);
    void cache_degrees();

    Matrix data_;
    Vector degrees_;
    double total_weight_ = 0.0;
};

/// Throws InvalidArgument for n < 2, ComputationError when every point
/// coincides (zero mean distance) or a cosine distance meets a zero row.
SimilarityMatrix similarity_matrix(const FeatureMatrix& x,
                                   DistanceKind kind = DistanceKind::euclidean);

/// Temperature-scaled doubly normalized graph
///   A_ij = n² u_ij / (r_i c_j),  u_ij = exp(S_ij / t)²,
/// with r and c the row and column sums of u. Evaluated in log space:
/// ℓ_ij = 2 S_ij / t, log r_i by log-sum-exp, and since S is exactly
/// symmetric log c_j = log r_j. A_ij is computed once per unordered pair.
AdjacencyMatrix adjacency_matrix(const SimilarityMatrix& s, double t);

/// Q = (1/2m) Σ_ij [A_ij − k_i k_j / 2m] δ(y_i, y_j), reduced per class in
/// a fixed order.
double modularity(const AdjacencyMatrix& a, const LabelVector& y);

inline constexpr double kDefaultTemperature = 0.1;

/// Relative local density: modularity of the temperature graph of x
/// against its labels.
double rld(const FeatureMatrix& x, const LabelVector& y, double t = kDefaultTemperature,
           DistanceKind kind = DistanceKind::euclidean);

}  // namespace repclust
