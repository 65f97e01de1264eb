#include "hazard_bayes/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <utility>

#include "hazard_bayes/error.hpp"

namespace hazard_bayes {

namespace {

constexpr std::int64_t kMaxScore = 100000;

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::string_view unquote(std::string_view s) noexcept {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

bool is_non_batting(std::string_view token) {
    const std::string t = lower(token);
    return t == "dnb" || t == "tdnb" || t == "absent" || t == "sub";
}

}  // namespace

std::optional<InningsRecord> parse_score_token(std::string_view token) noexcept {
    token = trim(token);
    InningsRecord rec;
    if (!token.empty() && token.back() == '*') {
        rec.not_out = true;
        token.remove_suffix(1);
    }
    if (token.empty() || !std::all_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); })) {
        return std::nullopt;
    }
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), rec.score);
    if (ec != std::errc{} || ptr != token.data() + token.size() || rec.score > kMaxScore) return std::nullopt;
    return rec;
}

std::string format_score(const InningsRecord& rec) {
    return std::to_string(rec.score) + (rec.not_out ? "*" : "");
}

ParseResult parse_innings(std::string_view content) {
    ParseResult result;
    std::map<std::string, std::size_t, std::less<>> player_index;
    std::set<std::pair<std::string, std::int64_t>, std::less<>> seen_innings;
    bool header_possible = true;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const auto eol = content.find('\n', pos);
        std::string_view line =
            content.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? content.size() + 1 : eol + 1;
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;

        const auto fields = split_fields(line);
        if (header_possible) {
            header_possible = false;
            if (fields.size() >= 2 && lower(fields[1]) == "score") continue;
        }

        ++result.rows_in;
        const auto fail = [&](std::string msg) { result.errors.push_back(ParseIssue{line_no, std::move(msg)}); };
        if (fields.size() < 2 || fields.size() > 3) {
            fail("expected 2 or 3 comma-separated fields, found " + std::to_string(fields.size()));
            continue;
        }
        const std::string_view player = unquote(fields[0]);
        if (player.empty()) {
            fail("empty player name");
            continue;
        }
        if (is_non_batting(fields[1])) {
            ++result.rows_skipped;
            continue;
        }
        const auto rec = parse_score_token(fields[1]);
        if (!rec) {
            fail("malformed score token '" + std::string(fields[1]) + "'");
            continue;
        }
        if (fields.size() == 3) {
            std::int64_t idx = 0;
            const auto f = fields[2];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), idx);
            if (ec != std::errc{} || ptr != f.data() + f.size()) {
                fail("malformed innings index '" + std::string(f) + "'");
                continue;
            }
            if (!seen_innings.emplace(std::string(player), idx).second) {
                fail("duplicate innings " + std::to_string(idx) + " for player '" + std::string(player) + "'");
                continue;
            }
        }

        auto it = player_index.find(player);
        if (it == player_index.end()) {
            it = player_index.emplace(std::string(player), result.players.size()).first;
            result.players.push_back(PlayerData{std::string(player), {}});
        }
        result.players[it->second].innings.push_back(*rec);
        ++result.rows_parsed;
    }
    return result;
}

std::vector<PlayerData> parse_innings_strict(std::string_view content) {
    ParseResult result = parse_innings(content);
    if (!result.errors.empty()) throw ParseError(result.errors.front().line, result.errors.front().message);
    return std::move(result.players);
}

std::string serialize_innings(std::span<const PlayerData> players) {
    std::string out = "player,score\n";
    for (const auto& p : players) {
        for (const auto& rec : p.innings) {
            out += p.player_id;
            out += ',';
            out += format_score(rec);
            out += '\n';
        }
    }
    return out;
}

double CareerRecord::average_or_throw() const {
    if (!average) throw Degenerate("batting average is undefined: every innings is not out");
    return *average;
}

CareerRecord career_summary(std::span<const InningsRecord> records) {
    if (records.empty()) throw InvalidInput("career summary needs at least one innings");
    CareerRecord rec;
    rec.innings = records.size();
    rec.high_score = records.front();
    for (const auto& r : records) {
        rec.runs += r.score;
        if (r.not_out) ++rec.not_outs;
        if (r.score >= 100) {
            ++rec.hundreds;
        } else if (r.score >= 50) {
            ++rec.fifties;
        }
        if (r.score > rec.high_score.score || (r.score == rec.high_score.score && r.not_out)) rec.high_score = r;
    }
    if (rec.dismissals() > 0) rec.average = static_cast<double>(rec.runs) / static_cast<double>(rec.dismissals());
    return rec;
}

std::string format_average(const CareerRecord& rec) {
    if (rec.dismissals() == 0) return {};
    const auto d = static_cast<std::int64_t>(rec.dismissals());
    const std::int64_t hundredths = rec.runs * 100 / d;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%lld.%02lld", static_cast<long long>(hundredths / 100),
                  static_cast<long long>(hundredths % 100));
    return buf;
}

std::vector<std::string> check_career(const CareerRecord& actual, const CareerRecord& expected) {
    std::vector<std::string> issues;
    const auto mismatch = [&](const char* field, const std::string& got, const std::string& want) {
        issues.push_back(std::string(field) + ": computed " + got + ", expected " + want);
    };
    if (actual.innings != expected.innings) {
        mismatch("innings", std::to_string(actual.innings), std::to_string(expected.innings));
    }
    if (actual.not_outs != expected.not_outs) {
        mismatch("not_outs", std::to_string(actual.not_outs), std::to_string(expected.not_outs));
    }
    if (actual.runs != expected.runs) mismatch("runs", std::to_string(actual.runs), std::to_string(expected.runs));
    if (actual.high_score != expected.high_score) {
        mismatch("high_score", format_score(actual.high_score), format_score(expected.high_score));
    }
    if (expected.average) {
        char want[48];
        std::snprintf(want, sizeof want, "%.2f", *expected.average);
        if (format_average(actual) != want) mismatch("average", format_average(actual), want);
    }
    if (actual.hundreds != expected.hundreds) {
        mismatch("hundreds", std::to_string(actual.hundreds), std::to_string(expected.hundreds));
    }
    if (actual.fifties != expected.fifties) {
        mismatch("fifties", std::to_string(actual.fifties), std::to_string(expected.fifties));
    }
    return issues;
}

}  // namespace hazard_bayes
