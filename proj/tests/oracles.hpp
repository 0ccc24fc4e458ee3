#pragma once
// Independent reference computations for the test suites. Nothing here
// calls into the library's numerical code paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <unistd.h>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "repclust/linalg.hpp"

namespace oracle {

using repclust::Matrix;

/// Plain double loop over every (i, j) pair of the modularity definition.
inline double naive_modularity(const Matrix& A, const std::vector<std::uint32_t>& y) {
    const auto n = A.rows();
    double two_m = 0.0;
    std::vector<double> k(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            k[static_cast<std::size_t>(i)] += A(i, j);
            two_m += A(i, j);
        }
    double q = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (y[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(j)])
                q += A(i, j) - k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)] / two_m;
    return q / two_m;
}

/// Direct A_ij = n² exp(S_ij/t)² / (Σ_k exp(S_ik/t)² · Σ_k exp(S_kj/t)²).
inline Matrix direct_adjacency(const Matrix& S, double t) {
    const auto n = S.rows();
    Matrix u(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const double e = i == j ? 0.0 : std::exp(S(i, j) / t);
            u(i, j) = e * e;
        }
    const Eigen::VectorXd r = u.rowwise().sum();
    const Eigen::RowVectorXd c = u.colwise().sum();
    Matrix a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = double(n) * double(n) * u(i, j) / (r(i) * c(j));
    return a;
}

/// Whole RLD pipeline in long double with direct exponentials (the wider
/// exponent range avoids underflow at t = 0.1 for desk-scale data).
inline double dense_rld(const Matrix& X, const std::vector<std::uint32_t>& y, double t) {
    const auto n = X.rows(), d = X.cols();
    std::vector<long double> dist(static_cast<std::size_t>(n * n), 0.0L);
    long double total = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            long double s = 0.0L;
            for (Eigen::Index c = 0; c < d; ++c) {
                const long double diff = (long double)X(i, c) - (long double)X(j, c);
                s += diff * diff;
            }
            dist[static_cast<std::size_t>(i * n + j)] = std::sqrt(s);
            total += std::sqrt(s);
        }
    const long double mean = total / ((long double)n * (long double)(n - 1));
    const long double norm = std::sqrt((long double)d) * mean;
    std::vector<long double> u(static_cast<std::size_t>(n * n), 0.0L), r(static_cast<std::size_t>(n), 0.0L);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) continue;
            const long double e = std::exp(-dist[static_cast<std::size_t>(i * n + j)] / norm / (long double)t);
            u[static_cast<std::size_t>(i * n + j)] = e * e;
            r[static_cast<std::size_t>(i)] += e * e;
        }
    std::vector<long double> k(static_cast<std::size_t>(n), 0.0L);
    std::vector<long double> a(static_cast<std::size_t>(n * n));
    long double two_m = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const long double w = (long double)n * n * u[static_cast<std::size_t>(i * n + j)] /
                                  (r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(j)]);
            a[static_cast<std::size_t>(i * n + j)] = w;
            k[static_cast<std::size_t>(i)] += w;
            two_m += w;
        }
    long double q = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (y[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(j)])
                q += a[static_cast<std::size_t>(i * n + j)] -
                     k[static_cast<std::size_t>(i)] * k[static_cast<std::size_t>(j)] / two_m;
    return double(q / two_m);
}

/// Full-sort CHI with cosine similarity on unnormalized rows.
inline double brute_chi(const Matrix& X, const std::vector<std::uint32_t>& y, std::size_t k) {
    const auto n = X.rows();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<std::pair<double, Eigen::Index>> order;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double cos = X.row(i).dot(X.row(j)) / (X.row(i).norm() * X.row(j).norm());
            order.emplace_back(-cos, j);
        }
        std::sort(order.begin(), order.end());
        std::size_t same = 0;
        for (std::size_t m = 0; m < k; ++m)
            if (y[static_cast<std::size_t>(order[m].second)] == y[static_cast<std::size_t>(i)]) ++same;
        sum += double(same) / double(k);
    }
    return sum / double(n);
}

/// Clopper–Pearson bounds through Boost's inverse incomplete beta.
inline std::pair<double, double> boost_clopper_pearson(std::uint64_t x, std::uint64_t n, double level) {
    const double alpha = 1.0 - level;
    const double lo = x == 0 ? 0.0 : boost::math::ibeta_inv(double(x), double(n - x + 1), alpha / 2);
    const double hi = x == n ? 1.0 : boost::math::ibeta_inv(double(x + 1), double(n - x), 1 - alpha / 2);
    return {lo, hi};
}

inline double binomial_pmf(std::uint64_t x, std::uint64_t n, double p) {
    if (p == 0.0) return x == 0 ? 1.0 : 0.0;
    if (p == 1.0) return x == n ? 1.0 : 0.0;
    const double logc = std::lgamma(double(n) + 1) - std::lgamma(double(x) + 1) - std::lgamma(double(n - x) + 1);
    return std::exp(logc + double(x) * std::log(p) + double(n - x) * std::log1p(-p));
}

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Matrix random_matrix(std::mt19937_64& gen, Eigen::Index rows, Eigen::Index cols, double sd = 1.0) {
    std::normal_distribution<double> nd(0.0, sd);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(gen);
    return m;
}

/// Haar-ish random orthogonal matrix from a QR factorization.
inline Matrix random_orthogonal(std::mt19937_64& gen, Eigen::Index d) {
    const Matrix g = random_matrix(gen, d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    return q;
}

inline std::vector<std::uint32_t> random_labels(std::mt19937_64& gen, std::size_t n, std::uint32_t classes) {
    std::vector<std::uint32_t> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<std::uint32_t>(i % classes);
    std::shuffle(y.begin(), y.end(), gen);
    return y;
}

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    static std::uint64_t counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("repclust-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace oracle
