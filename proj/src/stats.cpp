#include "wrsn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wrsn::stats {

double log_poisson_pmf(long k, double lambda) {
    if (k < 0) throw std::invalid_argument("poisson: negative count");
    if (lambda == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double kd = static_cast<double>(k);
    return kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0);
}

double poisson_pmf(long k, double lambda) { return std::exp(log_poisson_pmf(k, lambda)); }

namespace {

struct TailBounds {
    long lower;  // largest k <= lambda inside the tail, -1 when none
    long upper;  // smallest k >= lambda inside the tail
};

TailBounds tail_bounds(long count, double lambda) {
    const double d = std::abs(static_cast<double>(count) - lambda);
    auto in_tail = [&](long k) { return std::abs(static_cast<double>(k) - lambda) >= d; };

    long lower = static_cast<long>(std::floor(lambda - d));
    while (lower >= 0 && !in_tail(lower)) --lower;
    while (lower + 1 <= lambda && in_tail(lower + 1)) ++lower;
    if (lower < 0) lower = -1;

    long upper = std::max(0L, static_cast<long>(std::ceil(lambda + d)));
    while (!in_tail(upper)) ++upper;
    while (upper - 1 >= 0 && upper - 1 >= lambda && in_tail(upper - 1)) --upper;
    return {lower, upper};
}

double upper_sum(long from, double lambda) {
    double term = poisson_pmf(from, lambda);
    double sum = 0.0;
    for (long k = from;; ++k) {
        sum += term;
        const double next = term * lambda / static_cast<double>(k + 1);
        if (static_cast<double>(k) > lambda && next <= sum * 1e-18) break;
        if (next == 0.0 && static_cast<double>(k) > lambda) break;
        term = next;
    }
    return sum;
}

double lower_sum(long to, double lambda) {
    if (to < 0) return 0.0;
    double term = poisson_pmf(to, lambda);
    double sum = 0.0;
    for (long k = to; k >= 0; --k) {
        sum += term;
        if (k == 0) break;
        term = term * static_cast<double>(k) / lambda;
        if (term <= sum * 1e-18) break;
    }
    return sum;
}

}  // namespace

double poisson_two_sided_tail(long count, double lambda) {
    if (count < 0) throw std::invalid_argument("poisson: negative count");
    if (lambda <= 0.0) return 1.0;
    const auto b = tail_bounds(count, lambda);
    return std::min(1.0, lower_sum(b.lower, lambda) + upper_sum(b.upper, lambda));
}

double poisson_central_mass(long count, double lambda) {
    if (count < 0) throw std::invalid_argument("poisson: negative count");
    if (lambda <= 0.0) return 0.0;
    const auto b = tail_bounds(count, lambda);
    double sum = 0.0;
    for (long k = b.lower + 1; k < b.upper; ++k) sum += poisson_pmf(k, lambda);
    return std::min(1.0, sum);
}

double normal_pdf(double x, double mean, double variance) {
    const double diff = x - mean;
    return std::exp(-diff * diff / (2.0 * variance)) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_two_sided_tail(double z) { return std::erfc(std::abs(z) / std::numbers::sqrt2); }

double normal_central_mass(double z) { return std::erf(std::abs(z) / std::numbers::sqrt2); }

double log_beta_function(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_pdf(double x, double a, double b) {
    if (x < 0.0 || x > 1.0) return 0.0;
    const double log_density = (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_beta_function(a, b);
    return std::exp(log_density);
}

namespace {

// Modified Lentz evaluation of the incomplete-Beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 100'000; ++m) {
        const double md = m;
        const double m2 = 2.0 * md;
        double aa = md * (b - md) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + md) * (qab + md) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return h;
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta_function(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
    return 1.0 - std::exp(log_front) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double beta_mode(double a, double b) {
    if (a > 1.0 && b > 1.0) return (a - 1.0) / (a + b - 2.0);
    if (a <= 1.0 && b > 1.0) return 0.0;
    if (a > 1.0 && b <= 1.0) return 1.0;
    return 0.5;
}

double beta_mode_tail(double x, double a, double b) {
    const double mode = beta_mode(a, b);
    if (x == mode) return 1.0;
    double p = 1.0;
    if (x < mode) {
        const double side = regularized_incomplete_beta(mode, a, b);
        p = side > 0.0 ? regularized_incomplete_beta(x, a, b) / side : 1.0;
    } else {
        // Upper side via the reflection I_{1-x}(b, a) = 1 - I_x(a, b).
        const double side = regularized_incomplete_beta(1.0 - mode, b, a);
        p = side > 0.0 ? regularized_incomplete_beta(1.0 - x, b, a) / side : 1.0;
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace wrsn::stats
