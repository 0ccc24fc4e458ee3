#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "repclust/binomial.hpp"
#include "repclust/error.hpp"
#include "repclust/rng.hpp"

namespace repclust {

/// Integer image, row-major with interleaved channels.
struct ToyImage {
    std::size_t height = 0;
    std::size_t width = 0;
    std::size_t channels = 1;
    std::vector<std::uint8_t> pixels;

    ToyImage() = default;
    ToyImage(std::size_t h, std::size_t w, std::size_t c, std::vector<std::uint8_t> px);

    static ToyImage filled(std::size_t h, std::size_t w, std::size_t c, std::uint8_t value);

    std::uint8_t at(std::size_t r, std::size_t col, std::size_t ch) const {
        return pixels[(r * width + col) * channels + ch];
    }
    bool same_shape(const ToyImage& o) const {
        return height == o.height && width == o.width && channels == o.channels;
    }
    friend bool operator==(const ToyImage&, const ToyImage&) = default;
};

/// Zero padding, a uniformly placed crop, then a horizontal flip.
struct AugmentationPipeline {
    std::size_t pad = 0;
    std::size_t crop_height = 0;
    std::size_t crop_width = 0;
    double flip_probability = 0.0;

    /// Full-size crop, no pad, no flip.
    static AugmentationPipeline identity(const ToyImage& img);

    /// Throws InvalidArgument if the crop does not fit the padded image.
    void validate(const ToyImage& img) const;

    std::size_t offsets_y(const ToyImage& img) const { return img.height + 2 * pad - crop_height + 1; }
    std::size_t offsets_x(const ToyImage& img) const { return img.width + 2 * pad - crop_width + 1; }
};

ToyImage flip_horizontal(const ToyImage& img);

/// Crop at (offset_y, offset_x) of the zero-padded image, optionally flipped.
ToyImage augment_at(const ToyImage& img, const AugmentationPipeline& p, std::size_t offset_y,
                    std::size_t offset_x, bool flip);

/// Draws offset_y, offset_x, then the flip, in that order.
ToyImage augment(const ToyImage& img, const AugmentationPipeline& p, Rng& rng);

struct TrialResult {
    std::uint64_t trials = 0;
    std::uint64_t matches = 0;
    double estimate = 0.0;
    ConfidenceInterval interval;
};

/// Trials per independent RNG stream. Stream s uses Rng::stream(seed, s),
/// so the count depends only on (seed, trials) and never on threading.
inline constexpr std::uint64_t kTrialsPerStream = 1u << 16;

/// Monte Carlo estimate of P(y1 = y2) for y1 ~ f(·|x1), y2 ~ f(·|x2), with
/// equality as exact byte comparison.
TrialResult overlap_probability(const ToyImage& x1, const ToyImage& x2,
                                const AugmentationPipeline& p, std::uint64_t trials,
                                std::uint64_t seed, double level = 0.95);

inline constexpr std::size_t kMaxEnumeratedOutcomes = 1000000;

/// Exact Σ_y f(y|x1) f(y|x2) by enumerating every (offset, flip) outcome.
double exact_overlap_enumerate(const ToyImage& x1, const ToyImage& x2,
                               const AugmentationPipeline& p);

/// Netpbm: P2/P5 grayscale and P3/P6 RGB with maxval ≤ 255.
ToyImage load_netpbm(const std::string& path);
/// Writes binary P5 (1 channel) or P6 (3 channels).
void save_netpbm(const ToyImage& img, const std::string& path);

}  // namespace repclust
