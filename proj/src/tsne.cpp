#include "repclust/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "repclust/parallel.hpp"
#include "repclust/rng.hpp"

namespace repclust {

void TsneConfig::validate(std::size_t n) const {
    if (n > kMaxTsnePoints)
        throw InvalidArgument("exact t-SNE supports at most " + std::to_string(kMaxTsnePoints) +
                              " points");
    if (!(perplexity >= 2.0) || !std::isfinite(perplexity))
        throw InvalidArgument("perplexity must be ≥ 2");
    if (!(perplexity < double(n)))
        throw InvalidArgument("perplexity " + std::to_string(perplexity) + " must be below n=" +
                              std::to_string(n));
    if (iterations < 1) throw InvalidArgument("t-SNE needs at least one iteration");
    if (!(learning_rate > 0.0)) throw InvalidArgument("t-SNE learning rate must be positive");
    if (!(exaggeration >= 1.0)) throw InvalidArgument("early exaggeration must be ≥ 1");
    if (!(init_sigma > 0.0)) throw InvalidArgument("initialization sigma must be positive");
}

double row_perplexity(std::span<const double> row) {
    double h = 0.0;
    for (double p : row)
        if (p > 0.0) h -= p * std::log(p);
    return std::exp(h);
}

std::vector<double> calibrate_row(std::span<const double> sq_distances, double perplexity) {
    const std::size_t m = sq_distances.size();
    if (m == 0) throw InvalidArgument("calibrate_row needs at least one neighbor");
    if (!(perplexity > 0.0) || !(perplexity < double(m) + 1.0))
        throw InvalidArgument("perplexity must lie in (0, n)");
    const double dmin = *std::min_element(sq_distances.begin(), sq_distances.end());
    double spread = 0.0;
    for (double d : sq_distances) spread += d - dmin;
    spread /= double(m);

    std::vector<double> p(m);
    // Entropy in nats of the row at precision beta; fills p normalized.
    auto evaluate = [&](double beta) {
        double z = 0.0, weighted = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double shifted = sq_distances[j] - dmin;
            p[j] = std::exp(-beta * shifted);
            z += p[j];
            weighted += p[j] * shifted;
        }
        for (auto& v : p) v /= z;
        return std::log(z) + beta * weighted / z;
    };

    const double target = std::log(perplexity);
    double beta = spread > 0.0 ? 1.0 / spread : 1.0;
    double lo = 0.0, hi = std::numeric_limits<double>::infinity();
    for (int step = 0; step < 200; ++step) {
        const double h = evaluate(beta);
        const double achieved = std::exp(h);
        if (std::abs(achieved - perplexity) <= kPerplexityTolerance * perplexity) return p;
        if (h > target) {
            lo = beta;
            beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
        } else {
            hi = beta;
            beta = 0.5 * (beta + lo);
        }
    }
    throw ComputationError("perplexity calibration did not converge after 200 steps (target " +
                           std::to_string(perplexity) + ")");
}

Matrix joint_affinities(const FeatureMatrix& x, double perplexity) {
    const std::size_t n = x.rows();
    if (n < 2) throw InvalidArgument("t-SNE needs at least two points");
    const Matrix& X = x.data();
    Matrix cond = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    parallel_for(n, [&](std::size_t i) {
        std::vector<double> d;
        d.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i)
                d.push_back((X.row(static_cast<Eigen::Index>(i)) - X.row(static_cast<Eigen::Index>(j)))
                                .squaredNorm());
        const auto row = calibrate_row(d, perplexity);
        std::size_t k = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) cond(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[k++];
    });
    Matrix p = (cond + cond.transpose()) / (2.0 * double(n));
    return p;
}

namespace {

// Student-t kernel values (diagonal zero) and their total.
double student_kernel(const Matrix& y, Matrix& num) {
    const auto n = y.rows();
    num.resize(n, n);
    std::vector<double> row_sum(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) {
                num(i, j) = 0.0;
                continue;
            }
            const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
            num(i, j) = 1.0 / (1.0 + dx * dx + dy * dy);
            acc += num(i, j);
        }
        row_sum[ui] = acc;
    });
    double z = 0.0;
    for (double s : row_sum) z += s;
    return z;
}

double kl_from_kernel(const Matrix& p, const Matrix& num, double z) {
    const auto n = p.rows();
    std::vector<double> row_kl(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        double acc = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double pij = p(i, j);
            if (j != i && pij > 0.0) acc += pij * std::log(pij * z / num(i, j));
        }
        row_kl[ui] = acc;
    });
    double kl = 0.0;
    for (double v : row_kl) kl += v;
    return kl;
}

void gradient_from_kernel(const Matrix& p, const Matrix& y, const Matrix& num, double z,
                          double exaggeration, Matrix& grad) {
    const auto n = p.rows();
    grad.resize(n, 2);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ui) {
        const auto i = static_cast<Eigen::Index>(ui);
        double gx = 0.0, gy = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double w = (exaggeration * p(i, j) - num(i, j) / z) * num(i, j);
            gx += w * (y(i, 0) - y(j, 0));
            gy += w * (y(i, 1) - y(j, 1));
        }
        grad(i, 0) = 4.0 * gx;
        grad(i, 1) = 4.0 * gy;
    });
}

void check_embedding_shapes(const Matrix& p, const Matrix& y) {
    if (p.rows() != p.cols() || p.rows() != y.rows() || y.cols() != 2)
        throw InvalidArgument("t-SNE expects an n×n affinity matrix and n×2 coordinates");
}

}  // namespace

double tsne_kl(const Matrix& p, const Matrix& y) {
    check_embedding_shapes(p, y);
    Matrix num;
    const double z = student_kernel(y, num);
    return kl_from_kernel(p, num, z);
}

Matrix tsne_gradient(const Matrix& p, const Matrix& y) {
    check_embedding_shapes(p, y);
    Matrix num, grad;
    const double z = student_kernel(y, num);
    gradient_from_kernel(p, y, num, z, 1.0, grad);
    return grad;
}

Embedding tsne(const FeatureMatrix& x, const TsneConfig& cfg) {
    const std::size_t n = x.rows();
    cfg.validate(n);

    Embedding out;
    out.affinities = joint_affinities(x, cfg.perplexity);
    const Matrix& P = out.affinities;

    Rng rng(cfg.seed);
    Matrix y(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        const double a = rng.normal(0.0, cfg.init_sigma);
        y(i, 0) = a;
        y(i, 1) = rng.normal(0.0, cfg.init_sigma);
    }
    Matrix update = Matrix::Zero(y.rows(), 2);
    Matrix gains = Matrix::Ones(y.rows(), 2);
    Matrix num, grad;

    out.kl_trace.reserve(cfg.iterations);
    for (std::size_t it = 0; it < cfg.iterations; ++it) {
        const double z = student_kernel(y, num);
        out.kl_trace.push_back(kl_from_kernel(P, num, z));
        const double ex = it < cfg.exaggeration_iterations ? cfg.exaggeration : 1.0;
        gradient_from_kernel(P, y, num, z, ex, grad);
        if (!grad.allFinite())
            throw ComputationError("t-SNE diverged at iteration " + std::to_string(it) +
                                   " (non-finite gradient)");

        const double momentum = it < cfg.momentum_switch ? cfg.initial_momentum : cfg.final_momentum;
        for (Eigen::Index i = 0; i < y.rows(); ++i)
            for (Eigen::Index d = 0; d < 2; ++d) {
                const bool same_sign = (grad(i, d) > 0.0) == (update(i, d) > 0.0);
                gains(i, d) = same_sign ? gains(i, d) * 0.8 : gains(i, d) + 0.2;
                gains(i, d) = std::max(gains(i, d), 0.01);
                // The step size applies to the gradient without its constant factor 4.
                update(i, d) = momentum * update(i, d) - cfg.learning_rate * gains(i, d) * 0.25 * grad(i, d);
            }
        y += update;
        const Eigen::RowVector2d mean = y.colwise().mean();
        y.rowwise() -= mean;
    }
    out.kl = tsne_kl(P, y);
    if (!std::isfinite(out.kl) || !y.allFinite())
        throw ComputationError("t-SNE produced non-finite coordinates");
    out.coords = std::move(y);
    return out;
}

double cluster_visibility(const Matrix& coords, const LabelVector& y) {
    const auto n = coords.rows();
    if (static_cast<std::size_t>(n) != y.size())
        throw InvalidArgument("visibility: label count differs from point count");
    double same = 0.0, all = 0.0;
    std::size_t n_same = 0, n_all = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = (coords.row(i) - coords.row(j)).norm();
            all += d;
            ++n_all;
            if (y[static_cast<std::size_t>(i)] == y[static_cast<std::size_t>(j)]) {
                same += d;
                ++n_same;
            }
        }
    if (n_same == 0 || n_all == 0 || all == 0.0)
        throw InvalidArgument("visibility needs at least one same-label pair and spread points");
    return (same / double(n_same)) / (all / double(n_all));
}

}  // namespace repclust
