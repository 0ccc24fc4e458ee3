#include "repclust/synthetic.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "repclust/rld_graph.hpp"
#include "repclust/rng.hpp"

namespace repclust {

namespace {

constexpr std::array<std::pair<SynthKind, const char*>, 6> kKinds{{
    {SynthKind::uniform, "uniform"},
    {SynthKind::circle, "circle"},
    {SynthKind::lines, "lines"},
    {SynthKind::local_blobs, "local_blobs"},
    {SynthKind::random_lines, "random_lines"},
    {SynthKind::gaussian_mixture, "gaussian_mixture"},
}};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

SynthKind parse_synth_kind(const std::string& name) {
    for (const auto& [kind, label] : kKinds)
        if (name == label) return kind;
    throw InvalidArgument("unknown synthetic kind '" + name + "'");
}

const char* to_string(SynthKind kind) noexcept {
    for (const auto& [k, label] : kKinds)
        if (k == kind) return label;
    return "unknown";
}

std::map<std::string, double> default_params(SynthKind kind) {
    switch (kind) {
        case SynthKind::uniform: return {};
        case SynthKind::circle:
            return {{"radius_min", 0.2}, {"radius_span", 0.6}, {"angular_jitter", 0.02},
                    {"radial_jitter", 0.01}};
        case SynthKind::lines: return {{"length", 1.0}, {"spacing", 0.1}, {"jitter", 0.01}};
        case SynthKind::local_blobs: return {{"sub_blobs", 8.0}, {"sigma", 0.01}};
        case SynthKind::random_lines:
            return {{"length", 0.5}, {"jitter", 0.02}, {"min_separation", 0.5}, {"extent", 2.0}};
        case SynthKind::gaussian_mixture: return {{"sigma", 0.05}, {"radius", 1.0}};
    }
    return {};
}

double SynthConfig::param(const std::string& name) const {
    if (auto it = params.find(name); it != params.end()) return it->second;
    const auto defaults = default_params(kind);
    if (auto it = defaults.find(name); it != defaults.end()) return it->second;
    throw InvalidArgument(std::string("parameter '") + name + "' does not apply to " +
                          to_string(kind));
}

void SynthConfig::validate() const {
    if (classes < 1 || n < classes)
        throw InvalidArgument("synthetic config needs n ≥ C ≥ 1 (n=" + std::to_string(n) +
                              ", C=" + std::to_string(classes) + ")");
    const auto defaults = default_params(kind);
    for (const auto& [name, value] : params) {
        if (!defaults.count(name))
            throw InvalidArgument("parameter '" + name + "' does not apply to " + to_string(kind));
        if (!(value > 0.0) || !std::isfinite(value))
            throw InvalidArgument("parameter '" + name + "' must be positive");
    }
    if (kind == SynthKind::local_blobs && param("sub_blobs") != std::floor(param("sub_blobs")))
        throw InvalidArgument("sub_blobs must be an integer");
}

Dataset generate(const SynthConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n;
    const std::size_t C = cfg.classes;
    Rng rng(cfg.seed);
    Matrix pts(static_cast<Eigen::Index>(n), 2);
    std::vector<std::uint32_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::uint32_t>(i % C);

    std::vector<std::size_t> per_class(C, 0);
    for (auto l : labels) ++per_class[l];
    // Position of point i within its class.
    auto rank = [C](std::size_t i) { return i / C; };

    auto set = [&](std::size_t i, double x, double y) {
        pts(static_cast<Eigen::Index>(i), 0) = x;
        pts(static_cast<Eigen::Index>(i), 1) = y;
    };

    switch (cfg.kind) {
        case SynthKind::uniform: {
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rng.uniform();
                set(i, x, rng.uniform());
            }
            for (std::size_t i = n; i > 1; --i) std::swap(labels[i - 1], labels[rng.below(i)]);
            break;
        }
        case SynthKind::circle: {
            const double rmin = cfg.param("radius_min"), span = cfg.param("radius_span");
            const double ajit = cfg.param("angular_jitter"), rjit = cfg.param("radial_jitter");
            std::vector<double> phase(C);
            for (auto& p : phase) p = rng.uniform(0.0, kTwoPi);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t c = labels[i];
                const double theta =
                    phase[c] + kTwoPi * double(rank(i)) / double(per_class[c]) + rng.normal(0.0, ajit);
                const double r = rmin + span * double(c) / double(C) + rng.normal(0.0, rjit);
                set(i, r * std::cos(theta), r * std::sin(theta));
            }
            break;
        }
        case SynthKind::lines: {
            const double len = cfg.param("length"), spacing = cfg.param("spacing");
            const double jit = cfg.param("jitter");
            for (std::size_t i = 0; i < n; ++i) {
                const double x = rng.uniform(0.0, len);
                set(i, x, spacing * double(labels[i]) + rng.normal(0.0, jit));
            }
            break;
        }
        case SynthKind::local_blobs: {
            const auto blobs = static_cast<std::size_t>(cfg.param("sub_blobs"));
            const double sigma = cfg.param("sigma");
            Matrix centers(static_cast<Eigen::Index>(C * blobs), 2);
            for (Eigen::Index b = 0; b < centers.rows(); ++b) {
                centers(b, 0) = rng.uniform();
                centers(b, 1) = rng.uniform();
            }
            for (std::size_t i = 0; i < n; ++i) {
                const auto b = static_cast<Eigen::Index>(labels[i] * blobs + rank(i) % blobs);
                const double x = centers(b, 0) + rng.normal(0.0, sigma);
                set(i, x, centers(b, 1) + rng.normal(0.0, sigma));
            }
            break;
        }
        case SynthKind::random_lines: {
            const double len = cfg.param("length"), jit = cfg.param("jitter");
            const double sep = cfg.param("min_separation"), extent = cfg.param("extent");
            std::vector<std::array<double, 2>> centers;
            std::size_t attempts = 0;
            while (centers.size() < C) {
                if (++attempts > 100000)
                    throw InvalidArgument("cannot place " + std::to_string(C) +
                                          " segment centers at separation " + std::to_string(sep) +
                                          " within extent " + std::to_string(extent));
                const std::array<double, 2> cand{rng.uniform(0.0, extent), rng.uniform(0.0, extent)};
                bool ok = true;
                for (const auto& c : centers)
                    if (std::hypot(c[0] - cand[0], c[1] - cand[1]) < sep) ok = false;
                if (ok) centers.push_back(cand);
            }
            std::vector<double> angle(C);
            for (auto& a : angle) a = rng.uniform(0.0, std::numbers::pi);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t c = labels[i];
                const double along = rng.uniform(-0.5 * len, 0.5 * len);
                const double across = rng.normal(0.0, jit);
                const double ca = std::cos(angle[c]), sa = std::sin(angle[c]);
                set(i, centers[c][0] + along * ca - across * sa,
                    centers[c][1] + along * sa + across * ca);
            }
            break;
        }
        case SynthKind::gaussian_mixture: {
            const double sigma = cfg.param("sigma"), radius = cfg.param("radius");
            for (std::size_t i = 0; i < n; ++i) {
                const double theta = kTwoPi * double(labels[i]) / double(C);
                const double x = radius * std::cos(theta) + rng.normal(0.0, sigma);
                set(i, x, radius * std::sin(theta) + rng.normal(0.0, sigma));
            }
            break;
        }
    }

    std::map<std::string, std::string> prov{{"kind", to_string(cfg.kind)},
                                            {"seed", std::to_string(cfg.seed)},
                                            {"n", std::to_string(n)},
                                            {"classes", std::to_string(C)}};
    for (const auto& [name, value] : default_params(cfg.kind)) {
        (void)value;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", cfg.param(name));
        prov[name] = buf;
    }
    return Dataset(FeatureMatrix(std::move(pts)), LabelVector(std::move(labels), C),
                   to_string(cfg.kind), std::move(prov));
}

std::vector<SuiteEntry> figure2_suite(std::uint64_t seed, std::size_t n, std::size_t classes,
                                      double t) {
    static constexpr std::array<const char*, 6> kLetters{"a", "b", "c", "d", "e", "f"};
    std::vector<SuiteEntry> out;
    for (std::size_t i = 0; i < kKinds.size(); ++i) {
        SuiteEntry e;
        e.config.kind = kKinds[i].first;
        e.config.n = n;
        e.config.classes = classes;
        e.config.seed = seed;
        e.name = std::string(kLetters[i]) + "_" + kKinds[i].second;
        e.data = generate(e.config);
        e.rld = rld(e.data.features, e.data.labels, t);
        e.ch = ch_score(e.data.features, e.data.labels);
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace repclust
