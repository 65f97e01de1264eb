#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/nested_sampler.hpp"
#include "hazard_bayes/priors.hpp"
#include "oracles.hpp"

namespace hazard_bayes {
namespace {

NSConfig small_config(std::uint64_t seed, std::size_t particles = 100, std::size_t steps = 100) {
    NSConfig cfg;
    cfg.n_particles = particles;
    cfg.mcmc_steps = steps;
    cfg.seed = seed;
    return cfg;
}

TEST(NSConfig, Validation) {
    NSConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.n_particles, 1000u);
    EXPECT_EQ(cfg.mcmc_steps, 1000u);
    EXPECT_EQ(cfg.iteration_cap(), 100000u);
    cfg.n_particles = 1;
    EXPECT_THROW(cfg.validate(), InvalidInput);
    cfg = {};
    cfg.mcmc_steps = 0;
    EXPECT_THROW(cfg.validate(), InvalidInput);
    cfg = {};
    cfg.termination_log_tol = 0.0;
    EXPECT_THROW(cfg.validate(), InvalidInput);
}

TEST(ConstrainedStep, RejectsBelowThreshold) {
    Rng rng(1);
    Particle p{{0.5, 0.5}, 1.0, 0.5};
    const Particle before = p;
    // Every proposal scores 0 < threshold 0.5.
    const auto loglik = [](std::span<const double>) { return 0.0; };
    for (int i = 0; i < 100; ++i) {
        EXPECT_FALSE(constrained_mh_step(p, Threshold{0.5, 0.0}, loglik, rng));
        EXPECT_EQ(p.coords, before.coords);
        EXPECT_EQ(p.log_likelihood, before.log_likelihood);
        EXPECT_EQ(p.tiebreak, before.tiebreak);
    }
}

TEST(ConstrainedStep, ZeroStepLeavesPointUnchanged) {
    Rng rng(2);
    const auto loglik = [](std::span<const double> x) { return -x[0] * x[0]; };
    Particle p{{0.3, 0.7, 0.1}, -0.09, 0.4};
    const Particle before = p;
    for (int i = 0; i < 50; ++i) constrained_mh_step(p, Threshold{-1.0, 0.0}, loglik, rng, MHProposal{0.0, 2.0});
    EXPECT_EQ(p.coords, before.coords);
    EXPECT_EQ(p.log_likelihood, before.log_likelihood);
    EXPECT_EQ(p.tiebreak, before.tiebreak);
}

TEST(ConstrainedStep, AlwaysSatisfiesConstraint) {
    Rng rng(3);
    const auto loglik = [](std::span<const double> x) { return -((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.2) * (x[1] - 0.2)); };
    Particle p{{0.5, 0.2}, 0.0, 0.5};
    const Threshold t{-0.01, 0.0};
    for (int i = 0; i < 20000; ++i) {
        constrained_mh_step(p, t, loglik, rng);
        ASSERT_TRUE(above(p, t));
        ASSERT_GT(p.coords[0], 0.0);
        ASSERT_LT(p.coords[0], 1.0);
    }
}

TEST(ConstrainedStep, UnconstrainedChainSamplesUniformPrior) {
    // Threshold -inf: the walk targets the uniform cube. Thinned so the
    // 10^5 recorded states are close to independent.
    Rng rng(4);
    const auto loglik = [](std::span<const double>) { return 0.0; };
    Particle p{{0.5, 0.5, 0.5}, 0.0, 0.5};
    const Threshold t{-INFINITY, 0.0};
    constexpr int kRecords = 100000;
    constexpr int kThin = 20;
    std::vector<std::vector<double>> trace(3, std::vector<double>(kRecords));
    for (int r = 0; r < kRecords; ++r) {
        for (int s = 0; s < kThin; ++s) constrained_mh_step(p, t, loglik, rng);
        for (int k = 0; k < 3; ++k) trace[k][r] = p.coords[k];
    }
    // Asymptotic Kolmogorov critical value at the 1% level.
    const double critical = std::sqrt(-0.5 * std::log(0.005)) / std::sqrt(double(kRecords));
    for (int k = 0; k < 3; ++k) {
        auto& v = trace[k];
        std::sort(v.begin(), v.end());
        double d = 0.0;
        for (int i = 0; i < kRecords; ++i) {
            d = std::max({d, std::abs((i + 1.0) / kRecords - v[i]), std::abs(v[i] - double(i) / kRecords)});
        }
        EXPECT_LT(d, critical) << "coordinate " << k;
    }
}

TEST(NestedSampling, UnitLikelihoodHasUnitEvidence) {
    const auto zero = [](std::span<const double>) { return 0.0; };
    const NSRun run = run_nested_sampling(zero, 2, small_config(7));
    EXPECT_NEAR(run.log_evidence, 0.0, 1e-9);
    EXPECT_GE(run.log_evidence_err, 0.0);
    EXPECT_TRUE(std::isfinite(run.log_evidence_err));
}

TEST(NestedSampling, ConstantLikelihood) {
    const auto c = [](std::span<const double>) { return -3.25; };
    const NSRun run = run_nested_sampling(c, 3, small_config(8, 50, 20));
    EXPECT_NEAR(run.log_evidence, -3.25, 1e-9);
}

TEST(NestedSampling, ConstantLikelihoodWeightsFollowShrinkage) {
    const auto zero = [](std::span<const double>) { return 0.0; };
    const NSRun run = run_nested_sampling(zero, 1, small_config(9, 20, 5));
    const auto pw = posterior_weights(run);
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        EXPECT_NEAR(pw.weights[i], std::exp(run.samples[i].log_prior_mass - run.log_evidence), 1e-12);
    }
}

TEST(NestedSampling, ShrinkageAndThresholdsAreMonotone) {
    const oracle::GaussianToy toy;
    const NSRun run = run_nested_sampling([&](std::span<const double> x) { return toy.log_likelihood(x); }, 3,
                                          small_config(10));
    const std::size_t dead = run.iterations;
    ASSERT_GT(dead, 10u);
    for (std::size_t i = 1; i < dead; ++i) {
        ASSERT_LT(run.samples[i].log_prior_mass, run.samples[i - 1].log_prior_mass);
        ASSERT_GE(run.samples[i].log_likelihood, run.samples[i - 1].log_likelihood);
    }
    EXPECT_EQ(run.acceptance.size(), run.iterations);
    EXPECT_EQ(run.samples.size(), run.iterations + 100);
}

TEST(NestedSampling, GaussianToyEvidence) {
    const oracle::GaussianToy toy;
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const NSRun run = run_nested_sampling([&](std::span<const double> x) { return toy.log_likelihood(x); }, 3,
                                              small_config(seed));
        EXPECT_GT(run.log_evidence_err, 0.0);
        if (std::abs(run.log_evidence - toy.log_z()) <= 3.0 * run.log_evidence_err) ++passes;
    }
    EXPECT_GE(passes, 9);
}

TEST(NestedSampling, ConstantHazardEvidenceMatchesQuadrature) {
    const std::vector<InningsRecord> data{{12, false}, {0, false}, {45, false}, {3, true}, {27, false},
                                          {8, false},  {61, false}, {0, true}};
    const double want = oracle::constant_hazard_log_z(data, 20.0, 0.75);
    const InningsTally tally(data);
    const auto loglik = [&](std::span<const double> u) {
        return tally.log_likelihood_constant(kConstantMuPrior.quantile(u[0]));
    };
    const NSRun run = run_nested_sampling(loglik, 1, small_config(21));
    EXPECT_NEAR(run.log_evidence, want, 3.0 * run.log_evidence_err);
}

TEST(NestedSampling, SameSeedIsBitIdentical) {
    const oracle::GaussianToy toy;
    const auto f = [&](std::span<const double> x) { return toy.log_likelihood(x); };
    const NSRun a = run_nested_sampling(f, 3, small_config(33, 50, 30));
    const NSRun b = run_nested_sampling(f, 3, small_config(33, 50, 30));
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        ASSERT_EQ(a.samples[i].point, b.samples[i].point);
        ASSERT_EQ(a.samples[i].log_likelihood, b.samples[i].log_likelihood);
        ASSERT_EQ(a.samples[i].log_prior_mass, b.samples[i].log_prior_mass);
    }
    EXPECT_EQ(a.log_evidence, b.log_evidence);
    EXPECT_EQ(a.log_evidence_err, b.log_evidence_err);
    EXPECT_EQ(a.acceptance, b.acceptance);
}

TEST(NestedSampling, AbortsOnNaN) {
    const auto bad = [](std::span<const double>) { return std::nan(""); };
    EXPECT_THROW(run_nested_sampling(bad, 1, small_config(1, 10, 1)), SamplerError);
}

TEST(NestedSampling, AbortsWithoutFiniteParticle) {
    const auto none = [](std::span<const double>) { return -INFINITY; };
    EXPECT_THROW(run_nested_sampling(none, 1, small_config(1, 10, 1)), SamplerError);
}

TEST(NestedSampling, RespectsIterationCap) {
    NSConfig cfg = small_config(5, 10, 2);
    cfg.max_iterations = 7;
    const auto zero = [](std::span<const double>) { return 0.0; };
    const NSRun run = run_nested_sampling(zero, 1, cfg);
    EXPECT_EQ(run.iterations, 7u);
}

TEST(PosteriorWeights, SumToOneAndEssBounded) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const oracle::GaussianToy toy{2, 0.02 + 0.02 * static_cast<double>(seed)};
        const NSRun run = run_nested_sampling([&](std::span<const double> x) { return toy.log_likelihood(x); }, 2,
                                              small_config(seed, 40, 20));
        const auto pw = posterior_weights(run);
        double total = 0.0;
        for (double w : pw.weights) total += w;
        EXPECT_NEAR(total, 1.0, 1e-12);
        EXPECT_LE(pw.ess, static_cast<double>(run.samples.size()) * (1.0 + 1e-12));
        EXPECT_GE(pw.ess, 1.0);
    }
}

TEST(ResampleEqual, Basics) {
    Rng rng(1);
    const std::vector<double> single{1.0};
    const auto idx = resample_indices(single, 5, rng);
    EXPECT_EQ(idx, (std::vector<std::size_t>(5, 0)));
    EXPECT_TRUE(resample_indices(single, 0, rng).empty());

    NSRun run;
    run.samples.push_back(NSSample{{0.25}, 0.0, 0.0});
    run.log_evidence = 0.0;
    const auto pts = resample_equal(run, 4, rng);
    ASSERT_EQ(pts.size(), 4u);
    for (const auto& p : pts) EXPECT_EQ(p, (std::vector<double>{0.25}));
    EXPECT_TRUE(resample_equal(run, 0, rng).empty());
}

TEST(ResampleEqual, MeanWithinMonteCarloBound) {
    const oracle::GaussianToy toy{2, 0.1};
    const NSRun run = run_nested_sampling([&](std::span<const double> x) { return toy.log_likelihood(x); }, 2,
                                          small_config(17));
    const auto pw = posterior_weights(run);
    double mean = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
        mean += pw.weights[i] * run.samples[i].point[0];
        sq += pw.weights[i] * run.samples[i].point[0] * run.samples[i].point[0];
    }
    const double sd = std::sqrt(sq - mean * mean);
    Rng rng(18);
    const auto pts = resample_equal(run, 5000, rng);
    double got = 0.0;
    for (const auto& p : pts) got += p[0];
    got /= static_cast<double>(pts.size());
    EXPECT_NEAR(got, mean, 3.0 * sd / std::sqrt(pw.ess));
}

}  // namespace
}  // namespace hazard_bayes
