#include <cmath>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "repclust/overlap.hpp"
#include "repclust/parallel.hpp"

using namespace repclust;

namespace {

ToyImage pair_image(std::uint8_t a, std::uint8_t b) { return ToyImage(1, 2, 1, {a, b}); }

AugmentationPipeline flip_only(const ToyImage& img) {
    AugmentationPipeline p = AugmentationPipeline::identity(img);
    p.flip_probability = 0.5;
    return p;
}

ToyImage gradient(std::size_t h, std::size_t w, std::size_t c, int shift) {
    std::vector<std::uint8_t> px(h * w * c);
    for (std::size_t i = 0; i < px.size(); ++i) px[i] = std::uint8_t((i * 37 + std::size_t(shift)) % 251);
    return ToyImage(h, w, c, px);
}

}  // namespace

TEST_CASE("augmentation basics") {
    const ToyImage img = gradient(4, 5, 3, 0);
    Rng rng(1);
    CHECK(augment(img, AugmentationPipeline::identity(img), rng) == img);
    CHECK(flip_horizontal(flip_horizontal(img)) == img);
    AugmentationPipeline p = AugmentationPipeline::identity(pair_image(10, 20));
    p.flip_probability = 1.0;
    CHECK(augment(pair_image(10, 20), p, rng) == pair_image(20, 10));

    AugmentationPipeline padded{1, 4, 5, 0.0};
    const ToyImage corner = augment_at(img, padded, 0, 0, false);
    CHECK(corner.at(0, 0, 0) == 0);
    CHECK(corner.at(1, 1, 2) == img.at(0, 0, 2));

    AugmentationPipeline too_big{0, 5, 5, 0.0};
    CHECK_THROWS_AS(augment(img, too_big, rng), InvalidArgument);
    AugmentationPipeline bad_prob{0, 4, 5, 1.5};
    CHECK_THROWS_AS(augment(img, bad_prob, rng), InvalidArgument);
}

TEST_CASE("identical constant images always match") {
    const ToyImage img = ToyImage::filled(3, 3, 1, 128);
    const TrialResult r = overlap_probability(img, img, AugmentationPipeline::identity(img), 5000, 3);
    CHECK(r.matches == 5000);
    CHECK(r.estimate == 1.0);
    CHECK(r.interval.hi == 1.0);
    CHECK(exact_overlap_enumerate(img, img, AugmentationPipeline::identity(img)) == 1.0);
}

TEST_CASE("disjoint supports never match") {
    const ToyImage black = ToyImage::filled(8, 8, 3, 0), white = ToyImage::filled(8, 8, 3, 255);
    const AugmentationPipeline p{2, 8, 8, 0.5};
    const TrialResult r = overlap_probability(black, white, p, 200000, 9);
    CHECK(r.matches == 0);
    CHECK(r.interval.lo == 0.0);
    CHECK(exact_overlap_enumerate(black, white, p) == 0.0);
    CHECK(exact_overlap_enumerate(black, gradient(8, 8, 3, 1), AugmentationPipeline::identity(black)) == 0.0);
}

TEST_CASE("flip-only swapped pair") {
    const ToyImage x1 = pair_image(1, 2), x2 = pair_image(2, 1);
    const auto p = flip_only(x1);
    CHECK(exact_overlap_enumerate(x1, x2, p) == 0.5);
    const TrialResult r = overlap_probability(x1, x2, p, 100000, 42);
    CHECK(std::abs(r.estimate - 0.5) < 3.0 * std::sqrt(0.25 / 1e5));
    CHECK(r.interval.lo <= r.estimate);
    CHECK(r.estimate <= r.interval.hi);

    int inside = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        if (std::abs(overlap_probability(x1, x2, p, 10000, seed).estimate - 0.5) < 3.0 * std::sqrt(0.25 / 1e4)) ++inside;
    CHECK(inside >= 198);
}

TEST_CASE("Monte Carlo agrees with enumeration") {
    const ToyImage x1 = gradient(3, 3, 1, 0);
    std::vector<std::uint8_t> shifted(9, 0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 1; c < 3; ++c) shifted[r * 3 + c] = x1.at(r, c - 1, 0);
    const ToyImage x2(3, 3, 1, shifted);
    const AugmentationPipeline p{1, 3, 3, 0.5};
    const double truth = exact_overlap_enumerate(x1, x2, p);
    CHECK(truth > 0.0);
    int covered = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const TrialResult r = overlap_probability(x1, x2, p, 4000, seed);
        if (r.interval.lo <= truth && truth <= r.interval.hi) ++covered;
    }
    CHECK(covered >= 95);
}

TEST_CASE("results do not depend on the worker count") {
    const ToyImage x1 = pair_image(1, 2), x2 = pair_image(2, 1);
    set_thread_count(1);
    const auto a = overlap_probability(x1, x2, flip_only(x1), 300000, 5);
    set_thread_count(4);
    const auto b = overlap_probability(x1, x2, flip_only(x1), 300000, 5);
    set_thread_count(0);
    CHECK(a.matches == b.matches);
    CHECK(a.interval.hi == b.interval.hi);
}

TEST_CASE("overlap preconditions") {
    const ToyImage small = ToyImage::filled(2, 2, 1, 0), other = ToyImage::filled(2, 3, 1, 0);
    CHECK_THROWS_AS(overlap_probability(small, other, AugmentationPipeline::identity(small), 10, 1), InvalidArgument);
    CHECK_THROWS_AS(overlap_probability(small, small, AugmentationPipeline::identity(small), 0, 1), InvalidArgument);
    const ToyImage big = ToyImage::filled(600, 600, 1, 0);
    CHECK_THROWS_AS(exact_overlap_enumerate(big, big, AugmentationPipeline{400, 600, 600, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(ToyImage(2, 2, 1, {1, 2, 3}), InvalidArgument);
}

TEST_CASE("netpbm round trip and ascii variants") {
    const auto dir = oracle::scratch_dir("pbm");
    for (std::size_t c : {1, 3}) {
        const ToyImage img = gradient(5, 7, c, 3);
        const auto path = (dir / (c == 1 ? "g.pgm" : "c.ppm")).string();
        save_netpbm(img, path);
        CHECK(load_netpbm(path) == img);
    }
    std::ofstream(dir / "a.pgm") << "P2\n# comment\n2 1\n255\n7 200\n";
    CHECK(load_netpbm((dir / "a.pgm").string()) == ToyImage(1, 2, 1, {7, 200}));
    std::ofstream(dir / "a.ppm") << "P3 1 1 255 1 2 3\n";
    CHECK(load_netpbm((dir / "a.ppm").string()) == ToyImage(1, 1, 3, {1, 2, 3}));
    std::ofstream(dir / "bad.pgm") << "P2 2 1 255 7\n";
    CHECK_THROWS_AS(load_netpbm((dir / "bad.pgm").string()), FormatError);
    CHECK_THROWS_AS(load_netpbm((dir / "missing.pgm").string()), IoError);
}
