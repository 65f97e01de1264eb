#include "hazard_bayes/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hazard_bayes/error.hpp"

namespace hazard_bayes {

namespace {

// log(1 - H) = log(mu / (mu + 1)); -inf when mu == 0 (certain dismissal).
inline double log_survive_step(double mu) noexcept {
    return std::log(mu) - std::log1p(mu);
}

// log H = -log(mu + 1).
inline double log_dismiss(double mu) noexcept {
    return -std::log1p(mu);
}

}  // namespace

bool BattingParams::valid() const noexcept {
    return std::isfinite(mu1) && std::isfinite(mu2) && std::isfinite(L) && mu1 >= 0.0 && mu1 <= mu2 &&
           L > 0.0 && L <= mu2;
}

double effective_average(double x, const BattingParams& p) noexcept {
    return p.mu2 + (p.mu1 - p.mu2) * std::exp(-x / p.L);
}

double hazard(double x, const BattingParams& p) noexcept {
    return 1.0 / (effective_average(x, p) + 1.0);
}

double log_survival(std::int64_t x, const BattingParams& p) noexcept {
    double acc = 0.0;
    for (std::int64_t a = 0; a < x; ++a) {
        acc += log_survive_step(effective_average(static_cast<double>(a), p));
    }
    return acc;
}

double survival(std::int64_t x, const BattingParams& p) noexcept {
    double g = 1.0;
    for (std::int64_t a = 0; a < x; ++a) {
        g *= 1.0 - hazard(static_cast<double>(a), p);
    }
    return g;
}

double score_pmf(std::int64_t x, const BattingParams& p) noexcept {
    return hazard(static_cast<double>(x), p) * survival(x, p);
}

InningsTally::InningsTally(std::span<const InningsRecord> data) {
    if (data.empty()) {
        throw InvalidInput("log-likelihood needs at least one innings");
    }
    std::int64_t max_score = 0;
    for (const auto& rec : data) {
        if (rec.score < 0) {
            throw InvalidInput("negative score " + std::to_string(rec.score));
        }
        max_score = std::max(max_score, rec.score);
    }
    const auto size = static_cast<std::size_t>(max_score) + 1;
    dismissed_.assign(size, 0.0);
    passed_.assign(size, 0.0);
    // passed[a] = #{innings with score > a}; built from a histogram of final scores.
    std::vector<double> ended(size, 0.0);
    for (const auto& rec : data) {
        const auto s = static_cast<std::size_t>(rec.score);
        ended[s] += 1.0;
        if (rec.not_out) {
            ++not_outs_;
        } else {
            dismissed_[s] += 1.0;
            total_dismissed_ += 1.0;
        }
    }
    double above = 0.0;
    for (std::size_t a = size; a-- > 0;) {
        passed_[a] = above;
        above += ended[a];
    }
    for (double c : passed_) total_passed_ += c;
    innings_ = data.size();
}

double InningsTally::log_likelihood(const BattingParams& p) const noexcept {
    const double decay = std::exp(-1.0 / p.L);
    const double gap = p.mu1 - p.mu2;
    double factor = 1.0;
    double acc = 0.0;
    for (std::size_t a = 0; a < passed_.size(); ++a) {
        const double mu = p.mu2 + gap * factor;
        if (passed_[a] > 0.0) acc += passed_[a] * log_survive_step(mu);
        if (dismissed_[a] > 0.0) acc += dismissed_[a] * log_dismiss(mu);
        factor *= decay;
    }
    return acc;
}

double InningsTally::log_likelihood_constant(double mu) const noexcept {
    double acc = 0.0;
    if (total_passed_ > 0.0) acc += total_passed_ * log_survive_step(mu);
    if (total_dismissed_ > 0.0) acc += total_dismissed_ * log_dismiss(mu);
    return acc;
}

double log_likelihood(std::span<const InningsRecord> data, const BattingParams& p) {
    return InningsTally(data).log_likelihood(p);
}

}  // namespace hazard_bayes
