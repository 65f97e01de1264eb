#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hazard_bayes/player_analysis.hpp"
#include "hazard_bayes/rng.hpp"
#include "hazard_bayes/stats.hpp"

namespace hazard_bayes {

/// Population model for the equilibrium average: mu2 ~ lognormal(median nu, log-sd sigma),
/// with flat hyperpriors nu ~ U(1, 100) and sigma ~ U(0, 10).
struct HyperGridSpec {
    double nu_min = 1.0;
    double nu_max = 100.0;
    std::size_t nu_points = 200;
    /// Starts above zero; sigma = 0 is a point mass.
    double sigma_min = 0.01;
    double sigma_max = 10.0;
    std::size_t sigma_points = 200;

    void validate() const;
};

/// Hyperposterior evaluated on a (nu, sigma) grid. Cells are stored nu-major.
struct HyperGrid {
    std::vector<double> nu_axis;
    std::vector<double> sigma_axis;
    std::vector<double> log_mass;
    std::vector<double> normalized_mass;

    std::size_t index(std::size_t i_nu, std::size_t i_sigma) const noexcept { return i_nu * sigma_axis.size() + i_sigma; }
    double mass(std::size_t i_nu, std::size_t i_sigma) const noexcept { return normalized_mass[index(i_nu, i_sigma)]; }

    std::vector<double> nu_marginal() const;
    std::vector<double> sigma_marginal() const;
    SummaryRow nu_summary() const;
    SummaryRow sigma_summary() const;
};

/// Per-player posterior mu2 values with their log-density under the
/// individual-player prior, precomputed once for grid evaluation.
class Mu2Reweighter {
public:
    explicit Mu2Reweighter(const PlayerPosterior& post);
    explicit Mu2Reweighter(std::span<const double> mu2_samples);

    /// log E_post[f(mu2 | nu, sigma) / pi(mu2)], computed with log-sum-exp.
    double log_term(double nu, double sigma) const;

    std::size_t size() const noexcept { return log_mu2_.size(); }

private:
    std::vector<double> log_mu2_;
    std::vector<double> log_prior_;
    bool all_equal_ = false;
};

/// E_post[f(mu2 | nu, sigma) / pi(mu2)] for one player. Throws Degenerate when
/// sigma == 0 and every sample shares one mu2 (the boundary cell); otherwise
/// sigma == 0 gives 0.
double reweight_term(const PlayerPosterior& post, double nu, double sigma);

/// Log of reweight_term.
double log_reweight_term(const PlayerPosterior& post, double nu, double sigma);

/// Grid hyperposterior: log mass per cell is the sum over players of
/// log_reweight_term. Throws SamplerError when every cell is -inf.
HyperGrid hyper_posterior(std::span<const PlayerPosterior> players, const HyperGridSpec& spec = {},
                          unsigned threads = 1);

struct NextPlayerPrediction {
    std::vector<BattingParams> draws;
    SummaryRow mu1;
    SummaryRow mu2;
    SummaryRow L;
};

/// Draws (mu1, mu2, L) for a new player: a grid cell by mass, then
/// mu2 ~ lognormal(nu, sigma), C ~ Beta(1, 2), D ~ Beta(1, 5).
NextPlayerPrediction predict_next_player(const HyperGrid& grid, std::size_t n_draws, Rng& rng);

/// Gaussian-approximation credible ellipse.
struct Ellipse {
    double center_x = 0.0;
    double center_y = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    /// Angle of the major axis from the x axis, in (-pi/2, pi/2].
    double angle = 0.0;
};

/// Chi-square quantile with two degrees of freedom.
double chi2_2dof_quantile(double level);

/// Ellipse from the sample mean and covariance, scaled so that a bivariate
/// normal puts `level` of its mass inside. Throws InvalidInput for fewer than
/// 3 points or a level outside (0, 1); Degenerate for singular covariance.
Ellipse credible_ellipse(std::span<const std::array<double, 2>> points, double level);

}  // namespace hazard_bayes
