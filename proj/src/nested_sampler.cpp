#include "hazard_bayes/nested_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/stats.hpp"

namespace hazard_bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Folds x back into [0, 1] by mirror reflection at both faces.
double reflect(double x) noexcept {
    x = std::fmod(x, 2.0);
    if (x < 0.0) x += 2.0;
    if (x > 1.0) x = 2.0 - x;
    return x;
}

double perturb(double x, const MHProposal& proposal, Rng& rng) {
    const double scale = proposal.max_scale * std::pow(10.0, -proposal.decades * rng.uniform());
    return reflect(x + scale * rng.normal());
}

bool below(const Particle& a, const Particle& b) noexcept {
    if (a.log_likelihood != b.log_likelihood) return a.log_likelihood < b.log_likelihood;
    return a.tiebreak < b.tiebreak;
}

std::string describe(std::span<const double> coords) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < coords.size(); ++i) os << (i ? ", " : "") << coords[i];
    os << ')';
    return os.str();
}

}  // namespace

void NSConfig::validate() const {
    if (n_particles < 2) throw InvalidInput("n_particles must be at least 2");
    if (mcmc_steps < 1) throw InvalidInput("mcmc_steps must be at least 1");
    if (!(termination_log_tol > 0.0)) throw InvalidInput("termination_log_tol must be positive");
}

bool above(const Particle& p, const Threshold& t) noexcept {
    if (p.log_likelihood != t.log_likelihood) return p.log_likelihood > t.log_likelihood;
    return p.tiebreak > t.tiebreak;
}

bool constrained_mh_step(Particle& p, const Threshold& threshold, const UnitCubeLogLikelihood& loglik, Rng& rng,
                         const MHProposal& proposal) {
    Particle trial;
    trial.coords.resize(p.coords.size());
    for (std::size_t j = 0; j < p.coords.size(); ++j) trial.coords[j] = perturb(p.coords[j], proposal, rng);
    trial.tiebreak = perturb(p.tiebreak, proposal, rng);

    // Exact faces map to infinite quantiles for unbounded priors.
    for (double c : trial.coords) {
        if (c <= 0.0 || c >= 1.0) return false;
    }
    trial.log_likelihood = loglik(trial.coords);
    if (std::isnan(trial.log_likelihood) || !above(trial, threshold)) return false;
    p = std::move(trial);
    return true;
}

NSRun run_nested_sampling(const UnitCubeLogLikelihood& loglik, std::size_t dimension, const NSConfig& config,
                          const MHProposal& proposal) {
    config.validate();
    if (dimension == 0) throw InvalidInput("nested sampling needs at least one dimension");

    const std::size_t n = config.n_particles;
    const double dn = static_cast<double>(n);
    Rng rng(config.seed);

    std::vector<Particle> live(n);
    bool any_finite = false;
    for (auto& particle : live) {
        particle.coords.resize(dimension);
        for (auto& c : particle.coords) c = rng.uniform();
        particle.tiebreak = rng.uniform();
        particle.log_likelihood = loglik(particle.coords);
        const double ll = particle.log_likelihood;
        if (std::isnan(ll) || ll == std::numeric_limits<double>::infinity()) {
            throw SamplerError("log-likelihood is " + std::to_string(ll) + " at prior draw " +
                               describe(particle.coords));
        }
        any_finite = any_finite || std::isfinite(ll);
    }
    if (!any_finite) throw SamplerError("no initial particle has a finite log-likelihood");

    NSRun run;
    run.dimension = dimension;
    const std::size_t cap = config.iteration_cap();
    run.samples.reserve(cap + n);
    run.acceptance.reserve(cap);

    // log(X_{i-1} - X_i) = -(i-1)/n + log(1 - e^{-1/n}).
    const double log_shell = std::log(-std::expm1(-1.0 / dn));
    const double log_tol = std::log(config.termination_log_tol);
    double log_z = kNegInf;

    std::size_t iter = 0;
    while (iter < cap) {
        ++iter;
        const auto worst_it = std::min_element(live.begin(), live.end(), below);
        const auto worst = static_cast<std::size_t>(worst_it - live.begin());
        const double log_mass = -static_cast<double>(iter - 1) / dn + log_shell;

        run.samples.push_back(NSSample{worst_it->coords, worst_it->log_likelihood, log_mass});
        log_z = log_add_exp(log_z, log_mass + worst_it->log_likelihood);

        const Threshold threshold{worst_it->log_likelihood, worst_it->tiebreak};
        std::size_t source = rng.index(n - 1);
        if (source >= worst) ++source;
        live[worst] = live[source];

        std::size_t accepted = 0;
        for (std::size_t s = 0; s < config.mcmc_steps; ++s) {
            if (constrained_mh_step(live[worst], threshold, loglik, rng, proposal)) ++accepted;
        }
        run.acceptance.push_back(static_cast<double>(accepted) / static_cast<double>(config.mcmc_steps));

        double max_ll = kNegInf;
        for (const auto& particle : live) max_ll = std::max(max_ll, particle.log_likelihood);
        const double log_x = -static_cast<double>(iter) / dn;
        if (max_ll + log_x < log_tol + log_z) break;
    }
    run.iterations = iter;

    // The surviving particles share the remaining mass equally.
    std::sort(live.begin(), live.end(), below);
    const double log_live_mass = -static_cast<double>(iter) / dn - std::log(dn);
    for (auto& particle : live) {
        run.samples.push_back(NSSample{std::move(particle.coords), particle.log_likelihood, log_live_mass});
    }

    std::vector<double> terms(run.samples.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        terms[i] = run.samples[i].log_prior_mass + run.samples[i].log_likelihood;
    }
    run.log_evidence = log_sum_exp(terms);
    if (!std::isfinite(run.log_evidence)) {
        throw SamplerError("log-evidence is not finite after " + std::to_string(iter) + " iterations");
    }

    double info = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i] == kNegInf) continue;
        info += std::exp(terms[i] - run.log_evidence) * run.samples[i].log_likelihood;
    }
    run.information = std::max(0.0, info - run.log_evidence);
    run.log_evidence_err = std::sqrt(run.information / dn);
    return run;
}

PosteriorWeights posterior_weights(const NSRun& run) {
    PosteriorWeights out;
    out.weights.resize(run.samples.size());
    double total = 0.0;
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        const auto& s = run.samples[i];
        out.weights[i] = std::exp(s.log_prior_mass + s.log_likelihood - run.log_evidence);
        total += out.weights[i];
    }
    if (!(total > 0.0)) throw SamplerError("posterior weights are all zero");
    double sum_sq = 0.0;
    for (auto& w : out.weights) {
        w /= total;
        sum_sq += w * w;
    }
    out.ess = 1.0 / sum_sq;
    return out;
}

std::vector<std::size_t> resample_indices(std::span<const double> weights, std::size_t n, Rng& rng) {
    std::vector<std::size_t> out;
    if (n == 0) return out;
    if (weights.empty()) throw InvalidInput("cannot resample from an empty sample set");
    out.reserve(n);
    const double step = 1.0 / static_cast<double>(n);
    double target = rng.uniform() * step;
    double cumulative = weights[0];
    std::size_t i = 0;
    for (std::size_t k = 0; k < n; ++k) {
        while (cumulative < target && i + 1 < weights.size()) cumulative += weights[++i];
        out.push_back(i);
        target += step;
    }
    return out;
}

std::vector<std::vector<double>> resample_equal(const NSRun& run, std::size_t n, Rng& rng) {
    std::vector<std::vector<double>> out;
    if (n == 0) return out;
    const auto pw = posterior_weights(run);
    for (std::size_t idx : resample_indices(pw.weights, n, rng)) out.push_back(run.samples[idx].point);
    return out;
}

}  // namespace hazard_bayes
