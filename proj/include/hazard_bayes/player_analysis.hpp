#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hazard_bayes/model.hpp"
#include "hazard_bayes/nested_sampler.hpp"
#include "hazard_bayes/priors.hpp"
#include "hazard_bayes/stats.hpp"

namespace hazard_bayes {

struct PosteriorSample {
    InternalParams internal;
    BattingParams natural;
};

/// Equal-weight posterior of one player under the individual-player priors.
struct PlayerPosterior {
    std::string player_id;
    std::vector<PosteriorSample> samples;
    /// NaN when the posterior was loaded from a sample file.
    double log_evidence = std::numeric_limits<double>::quiet_NaN();
    double log_evidence_err = std::numeric_limits<double>::quiet_NaN();
    double information = std::numeric_limits<double>::quiet_NaN();
    double ess = std::numeric_limits<double>::quiet_NaN();
    std::size_t ns_iterations = 0;
    NSConfig config;
    std::size_t innings = 0;
    std::size_t not_outs = 0;

    /// Builds a posterior from natural-parameter draws (C and D recovered by division).
    static PlayerPosterior from_natural(std::string player_id, std::span<const BattingParams> draws);
};

/// Model log-likelihood as a function of the natural parameters.
using NaturalLogLikelihood = std::function<double(const BattingParams&)>;

/// Runs nested sampling over (C, mu2, D) with the individual-player priors
/// and resamples to equal weights. `n_samples == 0` keeps as many draws as
/// nested sampling produced.
PlayerPosterior sample_posterior(const NaturalLogLikelihood& loglik, const NSConfig& config,
                                 std::size_t n_samples = 0);

/// Posterior for one player's innings. Throws InvalidInput on empty data;
/// SamplerError propagates.
PlayerPosterior analyze_player(std::span<const InningsRecord> data, const NSConfig& config,
                               std::string player_id = {}, std::size_t n_samples = 0);

struct PlayerData {
    std::string player_id;
    std::vector<InningsRecord> innings;
};

/// Analyzes players concurrently. Player i runs with seed derive_seed(config.seed, i),
/// so results do not depend on the thread count.
std::vector<PlayerPosterior> analyze_players(std::span<const PlayerData> players, const NSConfig& config,
                                             unsigned threads = 0, std::size_t n_samples = 0);

enum class Param { mu1, mu2, L, C, D };

std::optional<Param> parse_param(std::string_view name) noexcept;
std::string_view param_name(Param p) noexcept;
double param_value(const PosteriorSample& s, Param p) noexcept;
std::vector<double> param_values(const PlayerPosterior& post, Param p);

struct PlayerSummary {
    SummaryRow mu1;
    SummaryRow mu2;
    SummaryRow L;
    std::size_t n_samples = 0;
};

/// Medians and 16/84 percentile offsets. Throws InvalidInput below 100 samples.
PlayerSummary summarize(const PlayerPosterior& post);

/// One point of the predictive effective-average curve.
struct CurvePoint {
    std::int64_t x = 0;
    /// 1 / H_pred(x) - 1 from the posterior predictive score distribution.
    double predictive = 0.0;
    /// Pointwise percentiles of the per-sample mu(x).
    double median = 0.0;
    double lo68 = 0.0;
    double hi68 = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

/// Predictive effective average and pointwise credible bands for x = 0..x_max.
///
/// The predictive hazard is H_pred(x) = sum_s G_s(x) H_s(x) / sum_s G_s(x);
/// survival weights are normalized in log space so deep tails do not underflow.
std::vector<CurvePoint> predictive_effective_average(const PlayerPosterior& post, std::int64_t x_max = 300);

/// P(param(a) > param(b)) over independent posterior pairs, counting exact
/// ties as one half. All pairs when both posteriors hold at most 2000
/// samples, otherwise 10^6 random pairs drawn with `seed`.
double compare_players(const PlayerPosterior& a, const PlayerPosterior& b, Param param, std::uint64_t seed = 0);

struct EvidenceResult {
    double log_z = 0.0;
    double log_z_err = 0.0;
    double information = 0.0;
    std::size_t iterations = 0;
};

/// Evidence of the constant-hazard model with mu ~ lognormal(median 20, 0.75).
EvidenceResult constant_hazard_evidence(std::span<const InningsRecord> data, const NSConfig& config);

struct BayesFactor {
    EvidenceResult varying;
    EvidenceResult constant;
    double log_bf = 0.0;  // log Z - log Z0
    double log_bf_err = 0.0;
};

/// Varying-hazard versus constant-hazard evidence. The constant model runs
/// with seed derive_seed(config.seed, 2).
BayesFactor bayes_factor_vs_constant(std::span<const InningsRecord> data, const NSConfig& config);

/// Same, reusing an existing varying-hazard posterior for log Z.
BayesFactor bayes_factor_vs_constant(const PlayerPosterior& post, std::span<const InningsRecord> data,
                                     const NSConfig& config);

}  // namespace hazard_bayes
