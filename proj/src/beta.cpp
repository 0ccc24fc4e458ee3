#include "repclust/binomial.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "repclust/error.hpp"

namespace repclust {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Continued fraction for the incomplete beta; converges for x < (a+1)/(a+b+2).
double beta_continued_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 1000000;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw ComputationError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidArgument("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0))
        return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
    return 1.0 - std::exp(log_front) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double beta_quantile(double p, double a, double b) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("beta quantile needs p in [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 4000; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (regularized_incomplete_beta(mid, a, b) < p)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

ConfidenceInterval clopper_pearson(std::uint64_t successes, std::uint64_t trials, double level) {
    if (trials == 0) throw InvalidArgument("Clopper–Pearson needs at least one trial");
    if (successes > trials)
        throw InvalidArgument("successes (" + std::to_string(successes) + ") exceed trials (" +
                              std::to_string(trials) + ")");
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("confidence level must lie in (0, 1)");

    const double alpha = 1.0 - level;
    const double x = double(successes), n = double(trials);
    const double log_half_alpha = std::log(alpha / 2.0);
    ConfidenceInterval ci;
    ci.level = level;
    if (successes == 0) {
        ci.lo = 0.0;
        ci.hi = -std::expm1(log_half_alpha / n);
    } else if (successes == trials) {
        ci.lo = std::exp(log_half_alpha / n);
        ci.hi = 1.0;
    } else {
        ci.lo = beta_quantile(alpha / 2.0, x, n - x + 1.0);
        ci.hi = beta_quantile(1.0 - alpha / 2.0, x + 1.0, n - x);
    }
    return ci;
}

}  // namespace repclust
