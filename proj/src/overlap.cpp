#include "repclust/overlap.hpp"

#include <algorithm>
#include <cstring>
#include <string_view>
#include <unordered_map>

#include "repclust/error.hpp"
#include "repclust/parallel.hpp"

namespace repclust {

ToyImage::ToyImage(std::size_t h, std::size_t w, std::size_t c, std::vector<std::uint8_t> px)
    : height(h), width(w), channels(c), pixels(std::move(px)) {
    if (h < 1 || w < 1 || c < 1) throw InvalidArgument("image dimensions must be ≥ 1");
    if (pixels.size() != h * w * c)
        throw InvalidArgument("image has " + std::to_string(pixels.size()) + " values, expected " +
                              std::to_string(h * w * c));
}

ToyImage ToyImage::filled(std::size_t h, std::size_t w, std::size_t c, std::uint8_t value) {
    return ToyImage(h, w, c, std::vector<std::uint8_t>(h * w * c, value));
}

AugmentationPipeline AugmentationPipeline::identity(const ToyImage& img) {
    return AugmentationPipeline{0, img.height, img.width, 0.0};
}

void AugmentationPipeline::validate(const ToyImage& img) const {
    if (crop_height < 1 || crop_width < 1) throw InvalidArgument("crop size must be ≥ 1");
    if (crop_height > img.height + 2 * pad || crop_width > img.width + 2 * pad)
        throw InvalidArgument("crop " + std::to_string(crop_height) + "x" +
                              std::to_string(crop_width) + " larger than padded image " +
                              std::to_string(img.height + 2 * pad) + "x" +
                              std::to_string(img.width + 2 * pad));
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
        throw InvalidArgument("flip probability must lie in [0, 1]");
}

ToyImage flip_horizontal(const ToyImage& img) {
    ToyImage out = img;
    for (std::size_t r = 0; r < img.height; ++r)
        for (std::size_t c = 0; c < img.width; ++c)
            for (std::size_t ch = 0; ch < img.channels; ++ch)
                out.pixels[(r * img.width + c) * img.channels + ch] =
                    img.at(r, img.width - 1 - c, ch);
    return out;
}

namespace {

void render(const ToyImage& img, const AugmentationPipeline& p, std::size_t oy, std::size_t ox,
            bool flip, std::uint8_t* out) {
    const std::size_t C = img.channels;
    for (std::size_t r = 0; r < p.crop_height; ++r) {
        const std::size_t py = oy + r;
        const bool row_in = py >= p.pad && py < p.pad + img.height;
        for (std::size_t c = 0; c < p.crop_width; ++c) {
            const std::size_t src_c = flip ? p.crop_width - 1 - c : c;
            const std::size_t px = ox + src_c;
            std::uint8_t* dst = out + (r * p.crop_width + c) * C;
            if (row_in && px >= p.pad && px < p.pad + img.width) {
                std::memcpy(dst, &img.pixels[((py - p.pad) * img.width + (px - p.pad)) * C], C);
            } else {
                std::memset(dst, 0, C);
            }
        }
    }
}

struct Draw {
    std::size_t oy, ox;
    bool flip;
};

Draw draw(const ToyImage& img, const AugmentationPipeline& p, Rng& rng) {
    Draw d;
    d.oy = static_cast<std::size_t>(rng.below(p.offsets_y(img)));
    d.ox = static_cast<std::size_t>(rng.below(p.offsets_x(img)));
    d.flip = rng.bernoulli(p.flip_probability);
    return d;
}

}  // namespace

ToyImage augment_at(const ToyImage& img, const AugmentationPipeline& p, std::size_t offset_y,
                    std::size_t offset_x, bool flip) {
    p.validate(img);
    if (offset_y >= p.offsets_y(img) || offset_x >= p.offsets_x(img))
        throw InvalidArgument("crop offset outside the padded image");
    ToyImage out;
    out.height = p.crop_height;
    out.width = p.crop_width;
    out.channels = img.channels;
    out.pixels.resize(out.height * out.width * out.channels);
    render(img, p, offset_y, offset_x, flip, out.pixels.data());
    return out;
}

ToyImage augment(const ToyImage& img, const AugmentationPipeline& p, Rng& rng) {
    p.validate(img);
    const Draw d = draw(img, p, rng);
    return augment_at(img, p, d.oy, d.ox, d.flip);
}

TrialResult overlap_probability(const ToyImage& x1, const ToyImage& x2,
                                const AugmentationPipeline& p, std::uint64_t trials,
                                std::uint64_t seed, double level) {
    if (!x1.same_shape(x2)) throw InvalidArgument("overlap: images differ in dimensions");
    if (trials < 1) throw InvalidArgument("overlap: trials must be ≥ 1");
    p.validate(x1);

    const std::uint64_t streams = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
    const std::size_t bytes = p.crop_height * p.crop_width * x1.channels;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(streams), 0);
    parallel_for(static_cast<std::size_t>(streams), [&](std::size_t s) {
        Rng rng = Rng::stream(seed, s);
        const std::uint64_t begin = std::uint64_t(s) * kTrialsPerStream;
        const std::uint64_t count = std::min(kTrialsPerStream, trials - begin);
        std::vector<std::uint8_t> a(bytes), b(bytes);
        std::uint64_t hits = 0;
        for (std::uint64_t t = 0; t < count; ++t) {
            const Draw d1 = draw(x1, p, rng);
            const Draw d2 = draw(x2, p, rng);
            render(x1, p, d1.oy, d1.ox, d1.flip, a.data());
            render(x2, p, d2.oy, d2.ox, d2.flip, b.data());
            if (std::memcmp(a.data(), b.data(), bytes) == 0) ++hits;
        }
        counts[s] = hits;
    });

    TrialResult r;
    r.trials = trials;
    for (auto c : counts) r.matches += c;
    r.estimate = double(r.matches) / double(trials);
    r.interval = clopper_pearson(r.matches, trials, level);
    return r;
}

namespace {

// Distribution over distinct augmented outputs, keyed by raw bytes.
std::unordered_map<std::string, double> output_distribution(const ToyImage& img,
                                                            const AugmentationPipeline& p) {
    std::vector<std::pair<bool, double>> flips;
    if (p.flip_probability < 1.0) flips.emplace_back(false, 1.0 - p.flip_probability);
    if (p.flip_probability > 0.0) flips.emplace_back(true, p.flip_probability);
    const std::size_t ny = p.offsets_y(img), nx = p.offsets_x(img);
    const double offset_prob = 1.0 / (double(ny) * double(nx));

    std::unordered_map<std::string, double> dist;
    std::string buf(p.crop_height * p.crop_width * img.channels, '\0');
    for (std::size_t oy = 0; oy < ny; ++oy)
        for (std::size_t ox = 0; ox < nx; ++ox)
            for (const auto& [flip, fp] : flips) {
                render(img, p, oy, ox, flip, reinterpret_cast<std::uint8_t*>(buf.data()));
                dist[buf] += offset_prob * fp;
            }
    return dist;
}

}  // namespace

double exact_overlap_enumerate(const ToyImage& x1, const ToyImage& x2,
                               const AugmentationPipeline& p) {
    if (!x1.same_shape(x2)) throw InvalidArgument("overlap: images differ in dimensions");
    p.validate(x1);
    const std::size_t flips = (p.flip_probability > 0.0 && p.flip_probability < 1.0) ? 2 : 1;
    const double outcomes = double(p.offsets_y(x1)) * double(p.offsets_x(x1)) * double(flips);
    if (outcomes > double(kMaxEnumeratedOutcomes))
        throw InvalidArgument("outcome space of " + std::to_string(std::uint64_t(outcomes)) +
                              " exceeds the enumeration limit of " +
                              std::to_string(kMaxEnumeratedOutcomes));

    const auto d1 = output_distribution(x1, p);
    const auto d2 = output_distribution(x2, p);
    double total = 0.0;
    // Iterate the smaller map; the sum is order-independent only up to
    // rounding, so sort keys for a reproducible result.
    const auto& small = d1.size() <= d2.size() ? d1 : d2;
    const auto& large = d1.size() <= d2.size() ? d2 : d1;
    std::vector<const std::pair<const std::string, double>*> entries;
    entries.reserve(small.size());
    for (const auto& e : small) entries.push_back(&e);
    std::sort(entries.begin(), entries.end(), [](auto* a, auto* b) { return a->first < b->first; });
    for (const auto* e : entries)
        if (auto it = large.find(e->first); it != large.end()) total += e->second * it->second;
    return total;
}

}  // namespace repclust
