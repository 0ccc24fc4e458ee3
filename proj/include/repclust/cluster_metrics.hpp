#pragma once

#include <vector>

#include "repclust/features_io.hpp"

namespace repclust {

struct ClusterStats {
    Matrix centroids;                  // k×d, row i is μ_i
    Vector global_centroid;            // μ
    std::vector<std::size_t> counts;   // n_i
    std::size_t k = 0;
    std::size_t n = 0;
};

ClusterStats cluster_stats(const FeatureMatrix& x, const LabelVector& y);

struct ChScore {
    double value = 0.0;
    double between = 0.0;  // Σ n_i ‖μ_i − μ‖²
    double within = 0.0;   // Σ_i Σ_{x∈C_i} ‖x − μ_i‖²
    /// Set when the within-cluster dispersion is zero; value is then +inf.
    bool zero_within_dispersion = false;
};

/// Calinski–Harabasz variance ratio. Requires 2 ≤ k ≤ n − 1 with every
/// class non-empty.
ChScore ch_score(const FeatureMatrix& x, const LabelVector& y);

struct ChiResult {
    std::size_t k = 0;
    double value = 0.0;
    std::vector<double> per_point;
};

/// Class homogeneity index: mean fraction of each point's k most
/// cosine-similar other points that share its label. Rows are normalized
/// first unless already flagged unit-normalized. Ties go to the lower index.
ChiResult chi(const FeatureMatrix& x, const LabelVector& y, std::size_t k);

}  // namespace repclust
