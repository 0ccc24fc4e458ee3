#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "repclust/rng.hpp"
#include "repclust/tsne.hpp"

using namespace repclust;

namespace {

// Independent KL(P‖Q) from the stored joint P and coordinates.
double kl_oracle(const Matrix& p, const Matrix& y) {
    const auto n = p.rows();
    long double z = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) z += 1.0L / (1.0L + (long double)(y.row(i) - y.row(j)).squaredNorm());
    long double kl = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            const long double q = 1.0L / (1.0L + (long double)(y.row(i) - y.row(j)).squaredNorm()) / z;
            kl += p(i, j) * std::log((long double)p(i, j) / q);
        }
    return double(kl);
}

Matrix two_blobs(std::uint64_t seed, Eigen::Index per_blob) {
    Rng rng(seed);
    Matrix x(2 * per_blob, 2);
    for (Eigen::Index i = 0; i < 2 * per_blob; ++i) {
        x(i, 0) = (i < per_blob ? 0.0 : 50.0) + rng.normal();
        x(i, 1) = rng.normal();
    }
    return x;
}

}  // namespace

TEST_CASE("equidistant neighbors give a uniform row") {
    const std::vector<double> d{4.0, 4.0};
    const auto row = calibrate_row(d, 2.0);
    CHECK(row[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(row[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("calibrated rows hit the requested perplexity") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 10 + gen() % 300;
        std::vector<double> d(m);
        const double scale = std::pow(10.0, 6.0 * u(gen) - 3.0);
        for (auto& v : d) v = scale * u(gen) * u(gen);
        const double perplexity = 2.0 + (double(m) - 2.5) * u(gen);
        const auto row = calibrate_row(d, perplexity);
        double sum = 0.0;
        for (double p : row) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(std::abs(sum - 1.0) < 1e-12);
        CHECK(std::abs(row_perplexity(row) - perplexity) <= 1e-5 * perplexity);
    }
    const std::vector<double> d{1.0, 2.0};
    CHECK_THROWS_AS(calibrate_row(d, 3.0), InvalidArgument);
}

TEST_CASE("joint affinities are a symmetric distribution") {
    std::mt19937_64 gen(8);
    const Matrix x = oracle::random_matrix(gen, 60, 5);
    const Matrix p = joint_affinities(FeatureMatrix(x), 15.0);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(p.minCoeff() >= 0.0);
    CHECK(std::abs(p.sum() - 1.0) < 1e-9);
    CHECK(p.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937_64 gen(9);
    const Matrix x = oracle::random_matrix(gen, 20, 4);
    const Matrix p = joint_affinities(FeatureMatrix(x), 5.0);
    const Matrix y = oracle::random_matrix(gen, 20, 2);
    const Matrix g = tsne_gradient(p, y);
    const double eps = 1e-5;
    for (Eigen::Index i = 0; i < 20; ++i)
        for (Eigen::Index j = 0; j < 2; ++j) {
            Matrix a = y, b = y;
            a(i, j) += eps;
            b(i, j) -= eps;
            const double fd = (tsne_kl(p, a) - tsne_kl(p, b)) / (2 * eps);
            CHECK(oracle::relative_error(g(i, j), fd) < 1e-4);
        }
    CHECK(std::abs(tsne_kl(p, y) - kl_oracle(p, y)) < 1e-12);
}

TEST_CASE("two far blobs separate and the run is reproducible") {
    const Matrix x = two_blobs(3, 50);
    TsneConfig cfg;
    cfg.perplexity = 10.0;
    cfg.seed = 5;
    const Embedding e = tsne(FeatureMatrix(x), cfg);
    REQUIRE(e.coords.rows() == 100);
    CHECK(e.coords.allFinite());

    const Eigen::RowVector2d c0 = e.coords.topRows(50).colwise().mean(), c1 = e.coords.bottomRows(50).colwise().mean();
    double spread = 0.0;
    for (Eigen::Index i = 0; i < 100; ++i) spread += (e.coords.row(i) - (i < 50 ? c0 : c1)).norm();
    spread /= 100.0;
    CHECK((c0 - c1).norm() > 5.0 * spread);

    CHECK(e.kl >= 0.0);
    CHECK(std::abs(e.kl - kl_oracle(e.affinities, e.coords)) < 1e-9);
    REQUIRE(e.kl_trace.size() == cfg.iterations);

    // 50-iteration moving average over the final third, up to summation rounding.
    const auto& tr = e.kl_trace;
    std::vector<double> avg;
    for (std::size_t k = 49; k < tr.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = k - 49; j <= k; ++j) s += tr[j];
        avg.push_back(s / 50.0);
    }
    const std::size_t from = 2 * tr.size() / 3 - 49;
    for (std::size_t k = from + 1; k < avg.size(); ++k) CHECK(avg[k] <= avg[k - 1] + 1e-12 * avg[k - 1]);

    const Embedding again = tsne(FeatureMatrix(x), cfg);
    CHECK((again.coords - e.coords).cwiseAbs().maxCoeff() == 0.0);
    CHECK(again.kl == e.kl);
}

TEST_CASE("cluster visibility") {
    Matrix y(4, 2);
    y << 0, 0, 0, 1, 10, 0, 10, 1;
    const double v = cluster_visibility(y, LabelVector({0, 0, 1, 1}));
    // same-label mean distance 1, overall mean (1 + 1 + 4·~10.02) / 6
    const double overall = (2.0 + 2.0 * 10.0 + 2.0 * std::sqrt(101.0)) / 6.0;
    CHECK(v == doctest::Approx(1.0 / overall).epsilon(1e-12));
    CHECK(cluster_visibility(y, LabelVector({0, 1, 0, 1})) > 1.0);
}

TEST_CASE("configuration limits") {
    std::mt19937_64 gen(1);
    const FeatureMatrix x(oracle::random_matrix(gen, 10, 2));
    TsneConfig cfg;
    cfg.perplexity = 10.0;
    CHECK_THROWS_AS(tsne(x, cfg), InvalidArgument);
    cfg.perplexity = 1.5;
    CHECK_THROWS_AS(tsne(x, cfg), InvalidArgument);
    cfg.perplexity = 3.0;
    cfg.iterations = 0;
    CHECK_THROWS_AS(tsne(x, cfg), InvalidArgument);
    cfg.iterations = 10;
    CHECK_THROWS_AS(cfg.validate(kMaxTsnePoints + 1), InvalidArgument);
}
