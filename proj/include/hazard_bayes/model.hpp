#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hazard_bayes {

/// Natural parameters of the effective-average model, in runs.
///
/// mu1 is the effective average on arrival (score 0), mu2 the equilibrium
/// effective average once set, and L the e-folding scale of the transition.
/// Valid values satisfy 0 <= mu1 <= mu2 and 0 < L <= mu2.
struct BattingParams {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double L = 1.0;

    bool valid() const noexcept;
    friend bool operator==(const BattingParams&, const BattingParams&) = default;
};

/// One batting innings. A not-out innings is right-censored at `score`.
struct InningsRecord {
    std::int64_t score = 0;
    bool not_out = false;

    friend bool operator==(const InningsRecord&, const InningsRecord&) = default;
};

/// mu(x) = mu2 + (mu1 - mu2) exp(-x / L). Defined for real x >= 0.
double effective_average(double x, const BattingParams& p) noexcept;

/// Dismissal probability on score x given the batter reached x: 1 / (mu(x) + 1).
double hazard(double x, const BattingParams& p) noexcept;

/// G(x) = P(X >= x), the product of (1 - H(a)) for a < x.
double survival(std::int64_t x, const BattingParams& p) noexcept;

/// log G(x), accumulated term by term in log space.
double log_survival(std::int64_t x, const BattingParams& p) noexcept;

/// P(X = x) = H(x) G(x).
double score_pmf(std::int64_t x, const BattingParams& p) noexcept;

/// Sufficient statistics of an innings list for the censored likelihood.
///
/// dismissed[x] counts innings out on exactly x; passed[a] counts innings
/// (out or not) whose final score exceeds a, i.e. that survived score a.
/// Both arrays run from 0 to the maximum observed score, so one likelihood
/// evaluation costs O(max score) regardless of the number of innings.
class InningsTally {
public:
    /// Throws InvalidInput on an empty list or a negative score.
    explicit InningsTally(std::span<const InningsRecord> data);

    /// Censored log-likelihood of the tallied innings under p.
    double log_likelihood(const BattingParams& p) const noexcept;

    /// Log-likelihood when the hazard is the constant 1 / (mu + 1).
    double log_likelihood_constant(double mu) const noexcept;

    std::int64_t max_score() const noexcept { return static_cast<std::int64_t>(passed_.size()) - 1; }
    std::size_t innings() const noexcept { return innings_; }
    std::size_t not_outs() const noexcept { return not_outs_; }

private:
    std::vector<double> dismissed_;
    std::vector<double> passed_;
    double total_dismissed_ = 0.0;
    double total_passed_ = 0.0;
    std::size_t innings_ = 0;
    std::size_t not_outs_ = 0;
};

/// Censored log-likelihood of the innings list. Throws InvalidInput on empty data.
double log_likelihood(std::span<const InningsRecord> data, const BattingParams& p);

}  // namespace hazard_bayes
