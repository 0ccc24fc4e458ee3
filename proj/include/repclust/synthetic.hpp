#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repclust/cluster_metrics.hpp"
#include "repclust/features_io.hpp"

namespace repclust {

enum class SynthKind { uniform, circle, lines, local_blobs, random_lines, gaussian_mixture };

SynthKind parse_synth_kind(const std::string& name);
const char* to_string(SynthKind kind) noexcept;

/// Generator settings. `params` overrides the per-kind defaults returned by
/// default_params(); unknown names are rejected.
///
///   uniform           none (points on [0,1]², labels shuffled)
///   circle            radius_min 0.2, radius_span 0.6, angular_jitter 0.02,
///                     radial_jitter 0.01: ring c has radius min + span·c/C
///   lines             length 1, spacing 0.1, jitter 0.01: parallel segments
///   local_blobs       sub_blobs 8, sigma 0.01: sub-blob centers on [0,1]²
///   random_lines      length 0.5, jitter 0.02, min_separation 0.5, extent 2
///   gaussian_mixture  sigma 0.05, radius 1: centers on a circle
struct SynthConfig {
    SynthKind kind = SynthKind::uniform;
    std::size_t n = 400;
    std::size_t classes = 4;
    std::map<std::string, double> params;
    std::uint64_t seed = 0;

    double param(const std::string& name) const;
    void validate() const;
};

std::map<std::string, double> default_params(SynthKind kind);

/// n 2-D points; label of point i is i mod C before any shuffle, so class
/// counts differ by at most one.
Dataset generate(const SynthConfig& cfg);

struct SuiteEntry {
    std::string name;
    SynthConfig config;
    Dataset data;
    double rld = 0.0;
    ChScore ch;
};

/// The six reference configurations (a)–(f) with default parameters, their
/// RLD at the given temperature and their CH scores.
std::vector<SuiteEntry> figure2_suite(std::uint64_t seed, std::size_t n = 400,
                                      std::size_t classes = 4, double t = 0.1);

}  // namespace repclust
