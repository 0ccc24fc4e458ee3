#include "repclust/cluster_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "repclust/parallel.hpp"

namespace repclust {

namespace {

void check_sizes(const FeatureMatrix& x, const LabelVector& y) {
    if (y.size() != x.rows())
        throw InvalidArgument(std::to_string(x.rows()) + " points but " +
                              std::to_string(y.size()) + " labels");
}

}  // namespace

ClusterStats cluster_stats(const FeatureMatrix& x, const LabelVector& y) {
    check_sizes(x, y);
    const Matrix& X = x.data();
    ClusterStats st;
    st.n = x.rows();
    st.k = y.num_classes();
    st.counts = y.class_counts();
    st.centroids.setZero(static_cast<Eigen::Index>(st.k), X.cols());
    for (std::size_t i = 0; i < st.n; ++i)
        st.centroids.row(y[i]) += X.row(static_cast<Eigen::Index>(i));
    for (std::size_t c = 0; c < st.k; ++c)
        if (st.counts[c] > 0) st.centroids.row(static_cast<Eigen::Index>(c)) /= double(st.counts[c]);
    st.global_centroid = X.colwise().sum().transpose() / static_cast<double>(st.n);
    return st;
}

ChScore ch_score(const FeatureMatrix& x, const LabelVector& y) {
    check_sizes(x, y);
    const std::size_t n = x.rows();
    const std::size_t k = y.num_classes();
    if (k < 2 || k >= n)
        throw InvalidArgument("CH score needs 2 ≤ k ≤ n−1 clusters (k=" + std::to_string(k) +
                              ", n=" + std::to_string(n) + ")");
    y.require_all_classes_present();

    const ClusterStats st = cluster_stats(x, y);
    const Matrix& X = x.data();
    ChScore out;
    for (std::size_t c = 0; c < k; ++c)
        out.between += double(st.counts[c]) *
                       (st.centroids.row(static_cast<Eigen::Index>(c)).transpose() -
                        st.global_centroid)
                           .squaredNorm();
    for (std::size_t i = 0; i < n; ++i)
        out.within +=
            (X.row(static_cast<Eigen::Index>(i)) - st.centroids.row(y[i])).squaredNorm();

    if (out.within == 0.0) {
        out.zero_within_dispersion = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    out.value = (out.between / double(k - 1)) / (out.within / double(n - k));
    return out;
}

ChiResult chi(const FeatureMatrix& x, const LabelVector& y, std::size_t k) {
    check_sizes(x, y);
    const std::size_t n = x.rows();
    if (k < 1 || k + 1 > n)
        throw InvalidArgument("CHI neighborhood k=" + std::to_string(k) + " outside [1, " +
                              std::to_string(n > 0 ? n - 1 : 0) + "]");

    const FeatureMatrix unit = x.unit_normalized() ? x : normalize_rows(x);
    const Matrix& U = unit.data();

    ChiResult out;
    out.k = k;
    out.per_point.assign(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        const auto row = U.row(static_cast<Eigen::Index>(i));
        std::vector<std::pair<double, std::size_t>> cand;
        cand.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cand.emplace_back(row.dot(U.row(static_cast<Eigen::Index>(j))), j);
        auto closer = [](const auto& a, const auto& b) {
            return a.first > b.first || (a.first == b.first && a.second < b.second);
        };
        std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1),
                         cand.end(), closer);
        std::size_t same = 0;
        for (std::size_t m = 0; m < k; ++m)
            if (y[cand[m].second] == y[i]) ++same;
        out.per_point[i] = double(same) / double(k);
    });
    out.value = std::accumulate(out.per_point.begin(), out.per_point.end(), 0.0) / double(n);
    return out;
}

}  // namespace repclust
