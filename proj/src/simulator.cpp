#include "hazard_bayes/simulator.hpp"

#include <cmath>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/stats.hpp"

namespace hazard_bayes {

void CensorModel::validate() const {
    if (!(censor_prob >= 0.0 && censor_prob < 1.0)) throw InvalidInput("censor_prob must lie in [0, 1)");
}

std::int64_t simulate_innings(const BattingParams& p, Rng& rng) {
    std::int64_t score = 0;
    while (rng.uniform() >= hazard(static_cast<double>(score), p)) ++score;
    return score;
}

namespace {

// P(not out) = sum_y k (1 - k)^y G(y) for closure probability k.
double not_out_fraction(const BattingParams& p, double k) {
    double total = 0.0;
    double weight = k;  // k (1 - k)^y
    double g = 1.0;     // G(y)
    for (std::int64_t y = 0; weight * g > 1e-17 * total || y == 0; ++y) {
        total += weight * g;
        g *= 1.0 - hazard(static_cast<double>(y), p);
        weight *= 1.0 - k;
    }
    return total;
}

}  // namespace

double closure_hazard(const BattingParams& p, double censor_prob) {
    CensorModel{censor_prob}.validate();
    if (censor_prob == 0.0) return 0.0;
    // not_out_fraction rises from 0 at k = 0 to 1 at k = 1.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (not_out_fraction(p, mid) < censor_prob ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<InningsRecord> simulate_career(const BattingParams& p, std::size_t n_innings, const CensorModel& censor,
                                           Rng& rng) {
    if (!p.valid()) throw InvalidInput("simulation parameters violate 0 <= mu1 <= mu2, 0 < L <= mu2");
    if (n_innings == 0) throw InvalidInput("a career needs at least one innings");
    censor.validate();
    std::vector<InningsRecord> out;
    out.reserve(n_innings);
    if (censor.censor_prob == 0.0) {
        for (std::size_t i = 0; i < n_innings; ++i) out.push_back(InningsRecord{simulate_innings(p, rng), false});
        return out;
    }
    const double k = closure_hazard(p, censor.censor_prob);
    for (std::size_t i = 0; i < n_innings; ++i) {
        InningsRecord rec;
        while (true) {
            if (rng.uniform() < k) {
                rec.not_out = true;
                break;
            }
            if (rng.uniform() < hazard(static_cast<double>(rec.score), p)) break;
            ++rec.score;
        }
        out.push_back(rec);
    }
    return out;
}

RecoveryReport recovery_experiment(const BattingParams& truth, std::size_t n_innings, const NSConfig& config,
                                   std::size_t repeats, Rng& rng, const CensorModel& censor) {
    if (repeats == 0) throw InvalidInput("recovery experiment needs at least one repeat");
    RecoveryReport report;
    report.truth = truth;
    report.n_innings = n_innings;
    const std::array<double, 3> target{truth.mu1, truth.mu2, truth.L};
    std::array<std::vector<double>, 3> widths;

    for (std::size_t r = 0; r < repeats; ++r) {
        RecoveryRow row;
        row.repeat = r;
        row.seed = rng();
        Rng career_rng(derive_seed(row.seed, 0));
        const auto career = simulate_career(truth, n_innings, censor, career_rng);
        NSConfig cfg = config;
        cfg.seed = derive_seed(row.seed, 1);
        row.summary = summarize(analyze_player(career, cfg));

        const std::array<const SummaryRow*, 3> rows{&row.summary.mu1, &row.summary.mu2, &row.summary.L};
        for (std::size_t k = 0; k < 3; ++k) {
            row.covered68[k] = rows[k]->contains68(target[k]);
            row.covered95[k] = rows[k]->contains95(target[k]);
            report.coverage68[k] += row.covered68[k] ? 1.0 : 0.0;
            report.coverage95[k] += row.covered95[k] ? 1.0 : 0.0;
            widths[k].push_back(rows[k]->hi95 - rows[k]->lo95);
        }
        report.rows.push_back(row);
    }
    for (std::size_t k = 0; k < 3; ++k) {
        report.coverage68[k] /= static_cast<double>(repeats);
        report.coverage95[k] /= static_cast<double>(repeats);
        report.median_width95[k] = percentile(widths[k], 0.5);
    }
    return report;
}

}  // namespace hazard_bayes
