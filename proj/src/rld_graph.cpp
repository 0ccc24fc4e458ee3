#include "repclust/rld_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "repclust/parallel.hpp"

namespace repclust {

DistanceKind parse_distance_kind(const std::string& name) {
    if (name == "euclidean") return DistanceKind::euclidean;
    if (name == "cosine" || name == "cosine_distance") return DistanceKind::cosine_distance;
    throw InvalidArgument("unknown distance '" + name + "' (expected euclidean or cosine)");
}

const char* to_string(DistanceKind kind) noexcept {
    return kind == DistanceKind::euclidean ? "euclidean" : "cosine_distance";
}

SimilarityMatrix similarity_matrix(const FeatureMatrix& x, DistanceKind kind) {
    const auto n = static_cast<Eigen::Index>(x.rows());
    if (n < 2) throw InvalidArgument("similarity matrix needs at least two points");
    const Matrix& X = x.data();

    Vector inv_norms;
    if (kind == DistanceKind::cosine_distance) {
        inv_norms.resize(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double norm = X.row(i).norm();
            if (!(norm > 0.0))
                throw ComputationError("cosine distance undefined for zero-norm row " +
                                       std::to_string(i));
            inv_norms(i) = 1.0 / norm;
        }
    }

    Matrix dist(n, n);
    std::vector<double> row_sums(static_cast<std::size_t>(n), 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        double acc = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double d;
            if (kind == DistanceKind::euclidean) {
                d = (X.row(i) - X.row(j)).norm();
            } else {
                d = std::max(0.0, 1.0 - X.row(i).dot(X.row(j)) * inv_norms(i) * inv_norms(j));
            }
            dist(i, j) = d;
            dist(j, i) = d;
            acc += d;
        }
        row_sums[ui] = acc;
    });

    double total = 0.0;
    for (double s : row_sums) total += s;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    const double mean = total / pairs;
    if (!(mean > 0.0))
        throw ComputationError("degenerate geometry: all points coincide (mean distance 0)");

    const double scale = -1.0 / (std::sqrt(static_cast<double>(X.cols())) * mean);
    SimilarityMatrix s;
    s.mean_distance_ = mean;
    s.data_ = dist * scale;
    s.data_.diagonal().setConstant(-std::numeric_limits<double>::infinity());
    return s;
}

AdjacencyMatrix AdjacencyMatrix::from_weights(Matrix weights) {
    if (weights.rows() != weights.cols() || weights.rows() < 1)
        throw InvalidArgument("adjacency matrix must be square and non-empty");
    const Eigen::Index n = weights.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0)
            throw InvalidArgument("adjacency diagonal must be zero (row " + std::to_string(i) + ")");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double w = weights(i, j);
            if (!std::isfinite(w) || w < 0.0)
                throw InvalidArgument("adjacency weights must be finite and nonnegative");
            const double v = weights(j, i);
            if (std::abs(w - v) > 1e-9 * std::max(std::abs(w), std::abs(v)))
                throw InvalidArgument("adjacency matrix is not symmetric at (" +
                                      std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    AdjacencyMatrix a;
    a.data_ = std::move(weights);
    a.cache_degrees();
    return a;
}

void AdjacencyMatrix::cache_degrees() {
    const Eigen::Index n = data_.rows();
    degrees_.resize(n);
    total_weight_ = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        double k = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) k += data_(i, j);
        degrees_(i) = k;
        total_weight_ += k;
    }
}

AdjacencyMatrix adjacency_matrix(const SimilarityMatrix& s, double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw InvalidArgument("temperature must be a finite positive number");
    const auto n = static_cast<Eigen::Index>(s.size());
    if (n < 2) throw ComputationError("adjacency undefined: a row has no finite similarity");
    const Matrix& S = s.data();
    const double scale = 2.0 / t;

    // log r_i = log Σ_k exp(ℓ_ik); the -inf diagonal contributes nothing.
    Vector log_r(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        double peak = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < n; ++k)
            if (k != i) peak = std::max(peak, scale * S(i, k));
        double acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
            if (k != i) acc += std::exp(scale * S(i, k) - peak);
        log_r(i) = peak + std::log(acc);
    });

    const double log_n2 = 2.0 * std::log(static_cast<double>(n));
    AdjacencyMatrix a;
    a.data_.setZero(n, n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double w = std::exp(log_n2 + scale * S(i, j) - log_r(i) - log_r(j));
            a.data_(i, j) = w;
            a.data_(j, i) = w;
        }
    });
    if (!a.data_.allFinite())
        throw ComputationError("adjacency overflow: temperature too small for this geometry");
    a.cache_degrees();
    return a;
}

double modularity(const AdjacencyMatrix& a, const LabelVector& y) {
    const std::size_t n = a.size();
    if (y.size() != n)
        throw InvalidArgument("modularity: " + std::to_string(n) + " nodes but " +
                              std::to_string(y.size()) + " labels");
    const double two_m = a.total_weight();
    if (!(two_m > 0.0)) throw ComputationError("modularity undefined for zero total edge weight");

    const Matrix& A = a.data();
    std::vector<double> within(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double acc = 0.0;
        const auto yi = y[i];
        for (std::size_t j = 0; j < n; ++j)
            if (y[j] == yi) acc += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        within[i] = acc;
    });

    std::vector<double> class_degree(y.num_classes(), 0.0);
    double internal = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        internal += within[i];
        class_degree[y[i]] += a.degrees()(static_cast<Eigen::Index>(i));
    }
    double expected = 0.0;
    for (double kc : class_degree) expected += (kc / two_m) * (kc / two_m);
    return internal / two_m - expected;
}

double rld(const FeatureMatrix& x, const LabelVector& y, double t, DistanceKind kind) {
    if (y.size() != x.rows())
        throw InvalidArgument("rld: " + std::to_string(x.rows()) + " points but " +
                              std::to_string(y.size()) + " labels");
    return modularity(adjacency_matrix(similarity_matrix(x, kind), t), y);
}

}  // namespace repclust
