#pragma once

#include <span>
#include <string>
#include <vector>

namespace hazard_bayes {

/// Linear-interpolation percentile (the "type 7" rule) of unsorted values,
/// with q in [0, 1]. Throws InvalidInput on empty input.
double percentile(std::span<const double> values, double q);

/// Several percentiles of the same values; one partial sort per call.
std::vector<double> percentiles(std::span<const double> values, std::span<const double> qs);

/// Median with 16th/84th-percentile offsets, plus the 95% central interval.
struct SummaryRow {
    double median = 0.0;
    double plus_err = 0.0;   // p84 - median
    double minus_err = 0.0;  // median - p16
    double lo68 = 0.0;
    double hi68 = 0.0;
    double lo95 = 0.0;
    double hi95 = 0.0;

    bool contains68(double v) const noexcept { return lo68 <= v && v <= hi68; }
    bool contains95(double v) const noexcept { return lo95 <= v && v <= hi95; }
};

SummaryRow summarize_values(std::span<const double> values);

/// "13.2 +4.2/-2.8" style rendering with one decimal.
std::string format_summary(const SummaryRow& row, int decimals = 1);

/// log(sum(exp(xs))); -inf for an empty span or all -inf entries.
double log_sum_exp(std::span<const double> xs) noexcept;

/// log(exp(a) + exp(b)).
double log_add_exp(double a, double b) noexcept;

}  // namespace hazard_bayes
