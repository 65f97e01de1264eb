#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hazard_bayes/rng.hpp"

namespace hazard_bayes {

/// Settings for one nested-sampling run.
struct NSConfig {
    std::size_t n_particles = 1000;
    std::size_t mcmc_steps = 1000;
    /// Stop once max(L_live) * X_i < termination_log_tol * Z.
    double termination_log_tol = 1e-6;
    /// 0 means 100 * n_particles.
    std::size_t max_iterations = 0;
    std::uint64_t seed = 0;

    /// Throws InvalidInput when a field is out of range.
    void validate() const;
    std::size_t iteration_cap() const noexcept { return max_iterations ? max_iterations : 100 * n_particles; }
};

/// Log-likelihood over the unit cube of prior-CDF coordinates.
using UnitCubeLogLikelihood = std::function<double(std::span<const double>)>;

/// A point in the unit cube with its cached log-likelihood.
///
/// `tiebreak` is an auxiliary uniform coordinate that orders particles with
/// equal likelihood, so plateaus (including a constant likelihood) shrink
/// the prior mass at the same rate as everywhere else.
struct Particle {
    std::vector<double> coords;
    double log_likelihood = 0.0;
    double tiebreak = 0.5;
};

/// The likelihood contour a move must stay above.
struct Threshold {
    double log_likelihood;
    double tiebreak = 0.0;
};

/// True when p lies strictly above t in (log-likelihood, tiebreak) order.
bool above(const Particle& p, const Threshold& t) noexcept;

/// Random-walk proposal shape. Each coordinate moves by
/// max_scale * 10^(-decades * u) * N(0, 1) with u ~ U(0, 1), reflected
/// into the cube.
struct MHProposal {
    double max_scale = 0.5;
    double decades = 2.0;
};

/// One constrained Metropolis-Hastings update in place. Returns whether the
/// proposal was accepted; a rejected proposal leaves `p` untouched.
///
/// The prior is uniform in cube coordinates and the reflected random walk is
/// symmetric, so acceptance reduces to the likelihood constraint.
bool constrained_mh_step(Particle& p, const Threshold& threshold, const UnitCubeLogLikelihood& loglik, Rng& rng,
                         const MHProposal& proposal = {});

/// A discarded (or final live) particle.
struct NSSample {
    std::vector<double> point;
    double log_likelihood = 0.0;
    /// log of the prior mass X_{i-1} - X_i assigned to this sample.
    double log_prior_mass = 0.0;
};

struct NSRun {
    std::size_t dimension = 0;
    std::vector<NSSample> samples;
    double log_evidence = 0.0;
    double log_evidence_err = 0.0;
    /// Kullback-Leibler information of the posterior relative to the prior, in nats.
    double information = 0.0;
    std::size_t iterations = 0;
    /// MH acceptance fraction of each iteration's replacement walk.
    std::vector<double> acceptance;
};

/// Nested sampling with the deterministic shrinkage X_i = exp(-i / n).
///
/// Throws SamplerError when the likelihood returns NaN or +inf on a prior
/// draw, when no initial particle has a finite likelihood, or when the
/// final evidence is not finite.
NSRun run_nested_sampling(const UnitCubeLogLikelihood& loglik, std::size_t dimension, const NSConfig& config,
                          const MHProposal& proposal = {});

struct PosteriorWeights {
    std::vector<double> weights;
    double ess = 0.0;
};

/// Normalized posterior weights w_i L_i / Z and the effective sample size 1 / sum(w^2).
PosteriorWeights posterior_weights(const NSRun& run);

/// Systematic resampling of sample indices by posterior weight.
std::vector<std::size_t> resample_indices(std::span<const double> weights, std::size_t n, Rng& rng);

/// Equal-weight posterior points.
std::vector<std::vector<double>> resample_equal(const NSRun& run, std::size_t n, Rng& rng);

}  // namespace hazard_bayes
