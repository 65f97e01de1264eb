#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hazard_bayes/model.hpp"
#include "hazard_bayes/player_analysis.hpp"

namespace hazard_bayes {

struct ParseIssue {
    std::size_t line = 0;
    std::string message;
};

/// Result of reading an innings CSV.
///
/// Every data row lands in exactly one bucket:
/// rows_in == rows_parsed + rows_skipped + errors.size().
struct ParseResult {
    std::vector<PlayerData> players;  // in order of first appearance
    std::size_t rows_in = 0;
    std::size_t rows_parsed = 0;
    std::size_t rows_skipped = 0;
    std::vector<ParseIssue> errors;

    bool ok() const noexcept { return errors.empty(); }
};

/// Parses `player,score[,innings]` rows. A header row, blank lines and `#`
/// comments are allowed. Scores are non-negative integers with an optional
/// trailing `*` for not-out; DNB/TDNB/absent/sub rows are skipped. When the
/// innings column is present a repeated (player, innings) pair is an error.
ParseResult parse_innings(std::string_view content);

/// parse_innings, throwing ParseError for the first bad row.
std::vector<PlayerData> parse_innings_strict(std::string_view content);

/// Parses one score token ("45*", "0"); nullopt if malformed.
std::optional<InningsRecord> parse_score_token(std::string_view token) noexcept;

std::string format_score(const InningsRecord& rec);

/// CSV text that parse_innings reads back to the same players and innings.
std::string serialize_innings(std::span<const PlayerData> players);

/// Career statistics. Only the count/run fields can be derived from
/// innings; matches and strike rate are pass-through metadata.
struct CareerRecord {
    std::optional<std::size_t> matches;
    std::size_t innings = 0;
    std::size_t not_outs = 0;
    std::int64_t runs = 0;
    InningsRecord high_score;
    /// Runs per dismissal; empty when every innings is not out.
    std::optional<double> average;
    std::optional<double> strike_rate;
    std::size_t hundreds = 0;
    std::size_t fifties = 0;

    std::size_t dismissals() const noexcept { return innings - not_outs; }
    /// Throws Degenerate when every innings is not out.
    double average_or_throw() const;
};

/// Throws InvalidInput for an empty innings list.
CareerRecord career_summary(std::span<const InningsRecord> records);

/// Batting average truncated (not rounded) to two decimals, as scorecards print it.
/// Empty string when the average is undefined.
std::string format_average(const CareerRecord& rec);

/// Compares the derivable fields of `actual` against a published record.
/// Returns one message per mismatch; fields absent from `expected` are not checked.
std::vector<std::string> check_career(const CareerRecord& actual, const CareerRecord& expected);

}  // namespace hazard_bayes
