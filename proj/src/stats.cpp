#include "hazard_bayes/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "hazard_bayes/error.hpp"

namespace hazard_bayes {

namespace {

// Percentile from a buffer that is at least partitioned around the two
// neighbouring ranks; nth_element keeps this O(n) per query.
double percentile_inplace(std::vector<double>& buf, double q) {
    const double pos = q * static_cast<double>(buf.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.end());
    const double a = buf[lo];
    if (frac == 0.0 || lo + 1 >= buf.size()) return a;
    const double b = *std::min_element(buf.begin() + static_cast<std::ptrdiff_t>(lo) + 1, buf.end());
    return a + frac * (b - a);
}

}  // namespace

double percentile(std::span<const double> values, double q) {
    if (values.empty()) throw InvalidInput("percentile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("percentile level outside [0, 1]");
    std::vector<double> buf(values.begin(), values.end());
    return percentile_inplace(buf, q);
}

std::vector<double> percentiles(std::span<const double> values, std::span<const double> qs) {
    if (values.empty()) throw InvalidInput("percentile of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(qs.size());
    for (double q : qs) {
        if (!(q >= 0.0 && q <= 1.0)) throw InvalidInput("percentile level outside [0, 1]");
        const double pos = q * static_cast<double>(sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(lo);
        if (frac == 0.0 || lo + 1 >= sorted.size()) {
            out.push_back(sorted[lo]);
        } else {
            out.push_back(sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]));
        }
    }
    return out;
}

SummaryRow summarize_values(std::span<const double> values) {
    static constexpr double levels[] = {0.025, 0.16, 0.5, 0.84, 0.975};
    const auto p = percentiles(values, levels);
    SummaryRow row;
    row.lo95 = p[0];
    row.lo68 = p[1];
    row.median = p[2];
    row.hi68 = p[3];
    row.hi95 = p[4];
    row.plus_err = row.hi68 - row.median;
    row.minus_err = row.median - row.lo68;
    return row;
}

std::string format_summary(const SummaryRow& row, int decimals) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.*f +%.*f/-%.*f", decimals, row.median, decimals, row.plus_err, decimals,
                  row.minus_err);
    return buf;
}

double log_sum_exp(std::span<const double> xs) noexcept {
    double m = -std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : xs) s += std::exp(x - m);
    return m + std::log(s);
}

double log_add_exp(double a, double b) noexcept {
    if (a < b) std::swap(a, b);
    if (a == -std::numeric_limits<double>::infinity()) return a;
    return a + std::log1p(std::exp(b - a));
}

}  // namespace hazard_bayes
