#pragma once

#include <cstdint>

#include "repclust/error.hpp"

namespace repclust {

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified
/// Lentz), using the reflection I_x(a,b) = 1 − I_{1−x}(b,a) on the slowly
/// converging side.
double regularized_incomplete_beta(double x, double a, double b);

/// x with I_x(a, b) = p, found by bisection on [0, 1] until the bracket
/// cannot shrink further (relative width below 1e-15).
double beta_quantile(double p, double a, double b);

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 1.0;
    double level = 0.95;
};

/// Exact two-sided Clopper–Pearson interval for x successes in n trials.
/// Boundary cases use closed forms: x = 0 gives hi = 1 − (α/2)^{1/n},
/// x = n gives lo = (α/2)^{1/n}.
ConfidenceInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials,
                                   double level = 0.95);

}  // namespace repclust
