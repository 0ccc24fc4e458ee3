#include <cmath>
#include <random>

#include "doctest.h"
#include "repclust/report.hpp"

using namespace repclust;

TEST_CASE("average ranks with ties") {
    const std::vector<double> v{10, 20, 10, 30};
    CHECK(average_ranks(v) == std::vector<double>{1.5, 3, 1.5, 4});
}

TEST_CASE("spearman of ordered and reversed pairs") {
    const std::vector<double> x{1, 2, 3};
    CHECK(spearman(x, std::vector<double>{1, 2, 3}) == doctest::Approx(1.0));
    CHECK(spearman(x, std::vector<double>{3, 2, 1}) == doctest::Approx(-1.0));
    CHECK(std::isnan(spearman(x, std::vector<double>{5, 5, 5})));
    CHECK(std::isnan(spearman(std::vector<double>{1}, std::vector<double>{2})));
}

TEST_CASE("spearman is bounded and rank based") {
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(12), y(12), ey(12);
        for (std::size_t i = 0; i < 12; ++i) {
            x[i] = nd(gen);
            y[i] = 0.5 * x[i] + nd(gen);
            ey[i] = std::exp(y[i]);
        }
        const double r = spearman(x, y);
        CHECK(r >= -1.0);
        CHECK(r <= 1.0);
        CHECK(spearman(x, ey) == doctest::Approx(r).epsilon(1e-12));
    }
}

TEST_CASE("svg rendering") {
    const std::string svg = scatter_svg({{0.1, 0.9, "run<a>"}, {0.5, 0.4, "b"}}, "rld", "accuracy", "t");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("run&lt;a&gt;") != std::string::npos);
    std::size_t circles = 0;
    for (auto p = svg.find("<circle"); p != std::string::npos; p = svg.find("<circle", p + 1)) ++circles;
    CHECK(circles == 2);
}
