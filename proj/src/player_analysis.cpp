#include "hazard_bayes/player_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "hazard_bayes/error.hpp"

namespace hazard_bayes {

namespace {

constexpr std::size_t kAllPairsLimit = 2000;
constexpr std::size_t kRandomPairs = 1'000'000;
constexpr std::size_t kMinSummarySamples = 100;

EvidenceResult evidence_of(const NSRun& run) {
    return EvidenceResult{run.log_evidence, run.log_evidence_err, run.information, run.iterations};
}

}  // namespace

PlayerPosterior PlayerPosterior::from_natural(std::string player_id, std::span<const BattingParams> draws) {
    PlayerPosterior post;
    post.player_id = std::move(player_id);
    post.samples.reserve(draws.size());
    for (const auto& p : draws) {
        const InternalParams q{p.mu2 > 0.0 ? p.mu1 / p.mu2 : 0.0, p.mu2, p.mu2 > 0.0 ? p.L / p.mu2 : 0.0};
        post.samples.push_back(PosteriorSample{q, p});
    }
    return post;
}

PlayerPosterior sample_posterior(const NaturalLogLikelihood& loglik, const NSConfig& config, std::size_t n_samples) {
    const auto cube_loglik = [&loglik](std::span<const double> u) {
        return loglik(to_natural(from_unit_cube(u.first<3>())));
    };
    const NSRun run = run_nested_sampling(cube_loglik, 3, config);
    const PosteriorWeights pw = posterior_weights(run);

    PlayerPosterior post;
    post.log_evidence = run.log_evidence;
    post.log_evidence_err = run.log_evidence_err;
    post.information = run.information;
    post.ess = pw.ess;
    post.ns_iterations = run.iterations;
    post.config = config;

    Rng rng(derive_seed(config.seed, 1));
    const std::size_t count = n_samples ? n_samples : run.samples.size();
    post.samples.reserve(count);
    for (std::size_t idx : resample_indices(pw.weights, count, rng)) {
        const auto& point = run.samples[idx].point;
        const InternalParams q = from_unit_cube(std::span<const double, 3>(point.data(), 3));
        post.samples.push_back(PosteriorSample{q, to_natural(q)});
    }
    return post;
}

PlayerPosterior analyze_player(std::span<const InningsRecord> data, const NSConfig& config, std::string player_id,
                               std::size_t n_samples) {
    const InningsTally tally(data);
    PlayerPosterior post =
        sample_posterior([&tally](const BattingParams& p) { return tally.log_likelihood(p); }, config, n_samples);
    post.player_id = std::move(player_id);
    post.innings = tally.innings();
    post.not_outs = tally.not_outs();
    return post;
}

std::vector<PlayerPosterior> analyze_players(std::span<const PlayerData> players, const NSConfig& config,
                                             unsigned threads, std::size_t n_samples) {
    std::vector<PlayerPosterior> out(players.size());
    std::vector<std::exception_ptr> errors(players.size());
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(players.size(), 1)));

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < players.size(); i = next++) {
            try {
                NSConfig cfg = config;
                cfg.seed = derive_seed(config.seed, i);
                out[i] = analyze_player(players[i].innings, cfg, players[i].player_id, n_samples);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::optional<Param> parse_param(std::string_view name) noexcept {
    if (name == "mu1") return Param::mu1;
    if (name == "mu2") return Param::mu2;
    if (name == "L") return Param::L;
    if (name == "C") return Param::C;
    if (name == "D") return Param::D;
    return std::nullopt;
}

std::string_view param_name(Param p) noexcept {
    switch (p) {
        case Param::mu1: return "mu1";
        case Param::mu2: return "mu2";
        case Param::L: return "L";
        case Param::C: return "C";
        case Param::D: return "D";
    }
    return "?";
}

double param_value(const PosteriorSample& s, Param p) noexcept {
    switch (p) {
        case Param::mu1: return s.natural.mu1;
        case Param::mu2: return s.natural.mu2;
        case Param::L: return s.natural.L;
        case Param::C: return s.internal.C;
        case Param::D: return s.internal.D;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> param_values(const PlayerPosterior& post, Param p) {
    std::vector<double> out;
    out.reserve(post.samples.size());
    for (const auto& s : post.samples) out.push_back(param_value(s, p));
    return out;
}

PlayerSummary summarize(const PlayerPosterior& post) {
    if (post.samples.size() < kMinSummarySamples) {
        throw InvalidInput("summaries need at least 100 posterior samples, got " +
                           std::to_string(post.samples.size()));
    }
    return PlayerSummary{summarize_values(param_values(post, Param::mu1)),
                         summarize_values(param_values(post, Param::mu2)),
                         summarize_values(param_values(post, Param::L)), post.samples.size()};
}

std::vector<CurvePoint> predictive_effective_average(const PlayerPosterior& post, std::int64_t x_max) {
    if (x_max < 0) throw InvalidInput("x_max must be non-negative");
    if (post.samples.empty()) throw InvalidInput("empty posterior");
    const std::size_t S = post.samples.size();

    std::vector<double> log_g(S, 0.0);
    std::vector<double> mu(S);
    std::vector<CurvePoint> curve;
    curve.reserve(static_cast<std::size_t>(x_max) + 1);
    static constexpr double levels[] = {0.025, 0.16, 0.5, 0.84, 0.975};

    for (std::int64_t x = 0; x <= x_max; ++x) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < S; ++s) {
            mu[s] = effective_average(static_cast<double>(x), post.samples[s].natural);
            top = std::max(top, log_g[s]);
        }
        // sum G (1 - H) / sum G H, with G rescaled by the largest survival.
        double num = 0.0;
        double den = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            const double w = std::exp(log_g[s] - top) / (mu[s] + 1.0);
            num += w * mu[s];
            den += w;
        }

        CurvePoint pt;
        pt.x = x;
        pt.predictive = num / den;
        const auto p = percentiles(mu, levels);
        pt.lo95 = p[0];
        pt.lo68 = p[1];
        pt.median = p[2];
        pt.hi68 = p[3];
        pt.hi95 = p[4];
        curve.push_back(pt);

        for (std::size_t s = 0; s < S; ++s) log_g[s] += std::log(mu[s]) - std::log1p(mu[s]);
    }
    return curve;
}

double compare_players(const PlayerPosterior& a, const PlayerPosterior& b, Param param, std::uint64_t seed) {
    if (a.samples.empty() || b.samples.empty()) throw InvalidInput("cannot compare an empty posterior");
    const auto va = param_values(a, param);
    auto vb = param_values(b, param);

    if (va.size() <= kAllPairsLimit && vb.size() <= kAllPairsLimit) {
        std::sort(vb.begin(), vb.end());
        double wins = 0.0;
        for (double x : va) {
            const auto lo = std::lower_bound(vb.begin(), vb.end(), x);
            const auto hi = std::upper_bound(lo, vb.end(), x);
            wins += static_cast<double>(lo - vb.begin()) + 0.5 * static_cast<double>(hi - lo);
        }
        return wins / (static_cast<double>(va.size()) * static_cast<double>(vb.size()));
    }

    Rng rng(seed);
    double wins = 0.0;
    for (std::size_t k = 0; k < kRandomPairs; ++k) {
        const double x = va[rng.index(va.size())];
        const double y = vb[rng.index(vb.size())];
        wins += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    }
    return wins / static_cast<double>(kRandomPairs);
}

EvidenceResult constant_hazard_evidence(std::span<const InningsRecord> data, const NSConfig& config) {
    const InningsTally tally(data);
    const auto loglik = [&tally](std::span<const double> u) {
        return tally.log_likelihood_constant(kConstantMuPrior.quantile(u[0]));
    };
    return evidence_of(run_nested_sampling(loglik, 1, config));
}

BayesFactor bayes_factor_vs_constant(const PlayerPosterior& post, std::span<const InningsRecord> data,
                                     const NSConfig& config) {
    if (!std::isfinite(post.log_evidence)) throw InvalidInput("posterior carries no evidence estimate");
    NSConfig cfg0 = config;
    cfg0.seed = derive_seed(config.seed, 2);
    BayesFactor bf;
    bf.varying = EvidenceResult{post.log_evidence, post.log_evidence_err, post.information, post.ns_iterations};
    bf.constant = constant_hazard_evidence(data, cfg0);
    bf.log_bf = bf.varying.log_z - bf.constant.log_z;
    bf.log_bf_err = std::hypot(bf.varying.log_z_err, bf.constant.log_z_err);
    return bf;
}

BayesFactor bayes_factor_vs_constant(std::span<const InningsRecord> data, const NSConfig& config) {
    return bayes_factor_vs_constant(analyze_player(data, config, {}, 1), data, config);
}

}  // namespace hazard_bayes
