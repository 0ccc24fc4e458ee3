#include "repclust/linear_probe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repclust/gcn.hpp"
#include "repclust/rng.hpp"

namespace repclust {

void ProbeConfig::validate() const {
    if (epochs < 1) throw InvalidArgument("probe epochs must be ≥ 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw InvalidArgument("probe learning rate must be positive");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InvalidArgument("test fraction must lie in (0, 1)");
}

Matrix LinearProbe::logits(const Matrix& x) const {
    Matrix z = x * weights;
    z.rowwise() += bias.transpose();
    return z;
}

std::vector<std::uint32_t> LinearProbe::predict(const Matrix& x) const {
    return argmax_rows(logits(x));
}

Split train_test_split(std::size_t n, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InvalidArgument("test fraction must lie in (0, 1)");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    const auto n_test = std::min(
        n > 0 ? n - 1 : 0,
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(test_fraction * double(n)))));
    Split s;
    s.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(s.test.begin(), s.test.end());
    std::sort(s.train.begin(), s.train.end());
    return s;
}

ProbeResult train_linear_probe(const FeatureMatrix& x, const LabelVector& y,
                               std::uint64_t split_seed, const ProbeConfig& cfg) {
    cfg.validate();
    const std::size_t n = x.rows();
    if (y.size() != n) throw InvalidArgument("probe: label count differs from point count");
    if (n < 10) throw InvalidArgument("linear probe needs at least 10 points");
    const auto C = static_cast<Eigen::Index>(y.num_classes());
    const auto d = static_cast<Eigen::Index>(x.cols());

    ProbeResult out;
    out.split = train_test_split(n, cfg.test_fraction, split_seed);
    const auto& train = out.split.train;
    const auto n_train = static_cast<Eigen::Index>(train.size());

    Matrix xs(n_train, d);
    Matrix onehot = Matrix::Zero(n_train, C);
    for (Eigen::Index r = 0; r < n_train; ++r) {
        xs.row(r) = x.data().row(static_cast<Eigen::Index>(train[static_cast<std::size_t>(r)]));
        onehot(r, y[train[static_cast<std::size_t>(r)]]) = 1.0;
    }
    const Vector mean = xs.colwise().mean().transpose();
    Vector scale(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double var = (xs.col(j).array() - mean(j)).square().mean();
        scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
    }
    for (Eigen::Index r = 0; r < n_train; ++r)
        xs.row(r) = (xs.row(r) - mean.transpose()).cwiseQuotient(scale.transpose());

    Matrix w = Matrix::Zero(d, C);
    Vector b = Vector::Zero(C);
    const double inv_n = 1.0 / double(n_train);
    out.loss_trace.reserve(cfg.epochs);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        Matrix z = xs * w;
        z.rowwise() += b.transpose();
        double loss = 0.0;
        for (Eigen::Index r = 0; r < n_train; ++r) {
            const double peak = z.row(r).maxCoeff();
            z.row(r).array() = (z.row(r).array() - peak).exp();
            const double sum = z.row(r).sum();
            loss -= std::log(z(r, y[train[static_cast<std::size_t>(r)]]) / sum);
            z.row(r) /= sum;
        }
        loss *= inv_n;
        if (!std::isfinite(loss))
            throw ComputationError("linear probe diverged at epoch " + std::to_string(epoch));
        out.loss_trace.push_back(loss);
        const Matrix g = (z - onehot) * inv_n;
        w -= cfg.learning_rate * (xs.transpose() * g);
        b -= cfg.learning_rate * g.colwise().sum().transpose();
    }

    out.probe.weights = scale.cwiseInverse().asDiagonal() * w;
    out.probe.bias = b - (out.probe.weights.transpose() * mean);

    const auto& test = out.split.test;
    Matrix xt(static_cast<Eigen::Index>(test.size()), d);
    for (std::size_t r = 0; r < test.size(); ++r)
        xt.row(static_cast<Eigen::Index>(r)) = x.data().row(static_cast<Eigen::Index>(test[r]));
    const auto pred = out.probe.predict(xt);
    std::size_t correct = 0;
    for (std::size_t r = 0; r < test.size(); ++r)
        if (pred[r] == y[test[r]]) ++correct;
    out.accuracy = double(correct) / double(test.size());
    return out;
}

}  // namespace repclust
