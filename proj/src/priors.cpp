#include "hazard_bayes/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "hazard_bayes/error.hpp"

namespace hazard_bayes {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

bool InternalParams::valid() const noexcept {
    return C >= 0.0 && C <= 1.0 && D >= 0.0 && D <= 1.0 && mu2 > 0.0 && std::isfinite(mu2);
}

BattingParams to_natural(const InternalParams& q) noexcept {
    return BattingParams{q.C * q.mu2, q.mu2, std::max(q.D * q.mu2, kMinL)};
}

double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0) return kNegInf;
        if (u == 1.0) return std::numeric_limits<double>::infinity();
        throw InvalidInput("normal quantile level outside [0, 1]");
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

double normal_cdf(double z) noexcept {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

LogNormalByMedian::LogNormalByMedian(double median_, double log_sd_) : median(median_), log_sd(log_sd_) {
    if (!(median > 0.0) || !(log_sd > 0.0) || !std::isfinite(median) || !std::isfinite(log_sd)) {
        throw InvalidInput("lognormal needs median > 0 and log_sd > 0");
    }
}

double LogNormalByMedian::log_pdf(double x) const noexcept {
    if (!(x > 0.0)) return kNegInf;
    const double lx = std::log(x);
    const double z = (lx - std::log(median)) / log_sd;
    return -0.5 * z * z - lx - std::log(log_sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double LogNormalByMedian::pdf(double x) const noexcept {
    return std::exp(log_pdf(x));
}

double LogNormalByMedian::cdf(double x) const noexcept {
    if (!(x > 0.0)) return 0.0;
    return normal_cdf(std::log(x / median) / log_sd);
}

double LogNormalByMedian::quantile(double u) const {
    return median * std::exp(log_sd * normal_quantile(u));
}

double LogNormalByMedian::mean() const noexcept {
    return median * std::exp(0.5 * log_sd * log_sd);
}

double LogNormalByMedian::sample(Rng& rng) const {
    return median * std::exp(log_sd * rng.normal());
}

double BetaOneB::log_pdf(double x) const noexcept {
    if (!(x >= 0.0 && x <= 1.0)) return kNegInf;
    if (b == 1.0) return 0.0;
    return std::log(b) + (b - 1.0) * std::log1p(-x);
}

double BetaOneB::quantile(double u) const noexcept {
    // CDF is 1 - (1 - x)^b.
    return -std::expm1(std::log1p(-u) / b);
}

double BetaOneB::cdf(double x) const noexcept {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return -std::expm1(b * std::log1p(-x));
}

double prior_log_density(const InternalParams& q) noexcept {
    const double c = kCPrior.log_pdf(q.C);
    const double d = kDPrior.log_pdf(q.D);
    const double m = kMu2Prior.log_pdf(q.mu2);
    if (c == kNegInf || d == kNegInf || m == kNegInf) return kNegInf;
    return c + m + d;
}

InternalParams from_unit_cube(std::span<const double, 3> u, const LogNormalByMedian& mu2_prior) {
    return InternalParams{kCPrior.quantile(u[0]), mu2_prior.quantile(u[1]), kDPrior.quantile(u[2])};
}

std::array<double, 3> to_unit_cube(const InternalParams& q, const LogNormalByMedian& mu2_prior) {
    return {kCPrior.cdf(q.C), mu2_prior.cdf(q.mu2), kDPrior.cdf(q.D)};
}

InternalParams prior_sample(Rng& rng) {
    const std::array<double, 3> u{rng.uniform(), rng.uniform(), rng.uniform()};
    return from_unit_cube(u);
}

NaturalSummary natural_prior_summaries(Rng& rng, std::size_t draws, const PriorOverrides& overrides) {
    if (draws == 0) throw InvalidInput("prior summaries need at least one draw");
    std::vector<double> mu1(draws), mu2(draws), L(draws);
    for (std::size_t i = 0; i < draws; ++i) {
        InternalParams q = prior_sample(rng);
        if (overrides.C) q.C = *overrides.C;
        if (overrides.D) q.D = *overrides.D;
        const BattingParams p = to_natural(q);
        mu1[i] = p.mu1;
        mu2[i] = p.mu2;
        L[i] = p.L;
    }
    return NaturalSummary{summarize_values(mu1), summarize_values(mu2), summarize_values(L)};
}

}  // namespace hazard_bayes
