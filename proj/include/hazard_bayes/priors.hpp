#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "hazard_bayes/model.hpp"
#include "hazard_bayes/rng.hpp"
#include "hazard_bayes/stats.hpp"

namespace hazard_bayes {

/// Sampler coordinates: mu1 = C * mu2 and L = D * mu2 with C, D in [0, 1].
/// Every valid InternalParams maps onto BattingParams that obey the model's
/// ordering constraints.
struct InternalParams {
    double C = 0.0;
    double mu2 = 1.0;
    double D = 0.0;

    bool valid() const noexcept;
    friend bool operator==(const InternalParams&, const InternalParams&) = default;
};

/// Smallest e-folding scale handed to the model; D = 0 would otherwise divide by zero.
inline constexpr double kMinL = 1e-9;

BattingParams to_natural(const InternalParams& q) noexcept;

/// Lognormal distribution parameterized by its median (not the log-mean).
///
/// "lognormal(25, 0.75^2)" in the batting literature means median 25 and a
/// standard deviation of 0.75 for log(mu2), so the location parameter of
/// the underlying normal is log(median).
struct LogNormalByMedian {
    double median = 1.0;
    double log_sd = 1.0;

    LogNormalByMedian() = default;
    /// Throws InvalidInput unless median > 0 and log_sd > 0.
    LogNormalByMedian(double median, double log_sd);

    double log_pdf(double x) const noexcept;
    double pdf(double x) const noexcept;
    double cdf(double x) const noexcept;
    double quantile(double u) const;
    double mean() const noexcept;
    double sample(Rng& rng) const;
};

/// Beta(1, b) on [0, 1], the only beta shape the priors use.
struct BetaOneB {
    double b = 1.0;

    double log_pdf(double x) const noexcept;
    double quantile(double u) const noexcept;
    double cdf(double x) const noexcept;
};

/// Individual-player priors: C ~ Beta(1, 2), mu2 ~ lognormal(median 25, 0.75), D ~ Beta(1, 5).
inline const LogNormalByMedian kMu2Prior{25.0, 0.75};
inline constexpr BetaOneB kCPrior{2.0};
inline constexpr BetaOneB kDPrior{5.0};

/// Prior on the single effective average of the constant-hazard model.
inline const LogNormalByMedian kConstantMuPrior{20.0, 0.75};

/// Standard normal quantile and CDF.
double normal_quantile(double u);
double normal_cdf(double z) noexcept;

/// Joint prior log-density of (C, mu2, D); -inf outside the support.
double prior_log_density(const InternalParams& q) noexcept;

/// Maps a unit-cube point (u_C, u_mu2, u_D) through each prior quantile.
/// A uniform point in the cube is a draw from the joint prior.
InternalParams from_unit_cube(std::span<const double, 3> u, const LogNormalByMedian& mu2_prior = kMu2Prior);

/// Inverse of from_unit_cube.
std::array<double, 3> to_unit_cube(const InternalParams& q, const LogNormalByMedian& mu2_prior = kMu2Prior);

InternalParams prior_sample(Rng& rng);

/// Pins C and/or D while the other coordinates are drawn from the prior.
struct PriorOverrides {
    std::optional<double> C;
    std::optional<double> D;
};

struct NaturalSummary {
    SummaryRow mu1;
    SummaryRow mu2;
    SummaryRow L;
};

/// Monte Carlo summaries of (mu1, mu2, L) under the prior.
NaturalSummary natural_prior_summaries(Rng& rng, std::size_t draws = 1'000'000, const PriorOverrides& overrides = {});

}  // namespace hazard_bayes
