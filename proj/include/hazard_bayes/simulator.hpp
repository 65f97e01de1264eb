#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hazard_bayes/model.hpp"
#include "hazard_bayes/nested_sampler.hpp"
#include "hazard_bayes/player_analysis.hpp"
#include "hazard_bayes/rng.hpp"

namespace hazard_bayes {

/// Expected fraction of innings that end not out.
///
/// The innings is closed at a random score drawn independently of the
/// batsman's latent score: before facing the hazard at each score it ends
/// not out with a fixed probability, calibrated per parameter set so that
/// the expected not-out fraction equals censor_prob. A not-out at y then
/// carries exactly the survival factor G(y) the likelihood assigns it.
struct CensorModel {
    double censor_prob = 0.0;

    void validate() const;
};

/// Walks the score upward, dismissing at score a with probability H(a).
std::int64_t simulate_innings(const BattingParams& p, Rng& rng);

/// Per-score closure probability giving an expected not-out fraction of
/// censor_prob for parameters p. Zero when censor_prob is zero.
double closure_hazard(const BattingParams& p, double censor_prob);

std::vector<InningsRecord> simulate_career(const BattingParams& p, std::size_t n_innings, const CensorModel& censor,
                                           Rng& rng);

struct RecoveryRow {
    std::size_t repeat = 0;
    std::uint64_t seed = 0;
    PlayerSummary summary;
    /// Indexed mu1, mu2, L.
    std::array<bool, 3> covered68{};
    std::array<bool, 3> covered95{};
};

struct RecoveryReport {
    BattingParams truth;
    std::size_t n_innings = 0;
    std::vector<RecoveryRow> rows;
    std::array<double, 3> coverage68{};
    std::array<double, 3> coverage95{};
    /// Median over repeats of the 95% interval width.
    std::array<double, 3> median_width95{};
};

/// Simulates `repeats` careers from `truth`, analyzes each, and records how
/// often the 68% and 95% intervals contain the true parameters. Repeat r uses
/// a career stream and NS seed derived from one draw of `rng`.
RecoveryReport recovery_experiment(const BattingParams& truth, std::size_t n_innings, const NSConfig& config,
                                   std::size_t repeats, Rng& rng, const CensorModel& censor = {});

}  // namespace hazard_bayes
