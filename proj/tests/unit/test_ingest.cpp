#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/ingest.hpp"
#include "hazard_bayes/rng.hpp"

namespace hazard_bayes {
namespace {

TEST(ScoreToken, Basics) {
    EXPECT_EQ(parse_score_token("45*"), (InningsRecord{45, true}));
    EXPECT_EQ(parse_score_token("0"), (InningsRecord{0, false}));
    EXPECT_EQ(parse_score_token("400*"), (InningsRecord{400, true}));
    EXPECT_EQ(parse_score_token(" 12 "), (InningsRecord{12, false}));
    for (const char* bad : {"", "*", "-3", "4.5", "12a", "**", "4 5", "99999999999999999999"}) {
        EXPECT_FALSE(parse_score_token(bad).has_value()) << bad;
    }
    EXPECT_EQ(format_score(InningsRecord{400, true}), "400*");
    EXPECT_EQ(format_score(InningsRecord{0, false}), "0");
}

TEST(ParseInnings, HeaderCommentsAndSkips) {
    const std::string text =
        "\xEF\xBB\xBFplayer,score\n"
        "# exported 2016\n"
        "Lara,400*\n"
        "Lara,DNB\n"
        "Waugh,0\n"
        "\n"
        "Lara,  53\n"
        "Waugh,absent\n"
        "\"Waugh\",12*\r\n";
    const ParseResult r = parse_innings(text);
    ASSERT_TRUE(r.ok());
    ASSERT_EQ(r.players.size(), 2u);
    EXPECT_EQ(r.players[0].player_id, "Lara");
    EXPECT_EQ(r.players[0].innings, (std::vector<InningsRecord>{{400, true}, {53, false}}));
    EXPECT_EQ(r.players[1].player_id, "Waugh");
    EXPECT_EQ(r.players[1].innings, (std::vector<InningsRecord>{{0, false}, {12, true}}));
    EXPECT_EQ(r.rows_in, 6u);
    EXPECT_EQ(r.rows_parsed, 4u);
    EXPECT_EQ(r.rows_skipped, 2u);
}

TEST(ParseInnings, NoHeader) {
    const ParseResult r = parse_innings("A,5\nA,6*\n");
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.rows_parsed, 2u);
}

TEST(ParseInnings, ErrorsCarryLineNumbers) {
    const ParseResult r = parse_innings("player,score\nA,5\nA,five\nA\nA,7\n,3\n");
    ASSERT_EQ(r.errors.size(), 3u);
    EXPECT_EQ(r.errors[0].line, 3u);
    EXPECT_EQ(r.errors[1].line, 4u);
    EXPECT_EQ(r.errors[2].line, 6u);
    EXPECT_EQ(r.rows_parsed, 2u);
    EXPECT_EQ(r.rows_in, r.rows_parsed + r.rows_skipped + r.errors.size());
    try {
        parse_innings_strict("player,score\nA,5\nA,five\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}

TEST(ParseInnings, DuplicateInningsIndex) {
    const ParseResult r = parse_innings("player,score,innings\nA,5,1\nA,6,2\nB,1,1\nA,9,2\n");
    ASSERT_EQ(r.errors.size(), 1u);
    EXPECT_EQ(r.errors[0].line, 5u);
    EXPECT_EQ(r.rows_parsed, 3u);
}

TEST(ParseInnings, RowCountsAlwaysBalance) {
    Rng rng(3);
    const char* tokens[] = {"12", "0*", "DNB", "x", "45*", "TDNB", "", "sub", "7,8,9,10", "3"};
    for (int trial = 0; trial < 300; ++trial) {
        std::string text = rng.uniform() < 0.5 ? "player,score\n" : "";
        const std::size_t rows = rng.index(40);
        for (std::size_t i = 0; i < rows; ++i) {
            if (rng.uniform() < 0.1) text += "# note\n";
            text += "P" + std::to_string(rng.index(4)) + "," + tokens[rng.index(std::size(tokens))] + "\n";
        }
        const ParseResult r = parse_innings(text);
        ASSERT_EQ(r.rows_in, r.rows_parsed + r.rows_skipped + r.errors.size()) << text;
        std::size_t total = 0;
        for (const auto& p : r.players) total += p.innings.size();
        ASSERT_EQ(total, r.rows_parsed);
    }
}

TEST(ParseInnings, SerializeRoundTrip) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<PlayerData> players(1 + rng.index(4));
        for (std::size_t k = 0; k < players.size(); ++k) {
            players[k].player_id = "Player " + std::to_string(k);
            const std::size_t n = 1 + rng.index(50);
            for (std::size_t i = 0; i < n; ++i) {
                players[k].innings.push_back(
                    InningsRecord{static_cast<std::int64_t>(rng.index(300)), rng.uniform() < 0.15});
            }
        }
        const auto back = parse_innings_strict(serialize_innings(players));
        ASSERT_EQ(back.size(), players.size());
        for (std::size_t k = 0; k < players.size(); ++k) {
            ASSERT_EQ(back[k].player_id, players[k].player_id);
            ASSERT_EQ(back[k].innings, players[k].innings);
        }
    }
}

// A published career line.
struct TableRow {
    const char* name;
    std::size_t innings;
    std::size_t not_outs;
    std::int64_t runs;
    InningsRecord high;
    double average;
    std::size_t hundreds;
    std::size_t fifties;
};

const TableRow kTable[] = {
    {"Cairns", 104, 5, 3320, {158, false}, 33.53, 5, 22},
    {"Hussain", 171, 16, 5764, {207, false}, 37.18, 14, 33},
    {"Kirsten", 176, 15, 7289, {275, false}, 45.27, 21, 24},
    {"Langer", 182, 12, 7696, {250, false}, 45.27, 23, 30},
    {"Lara", 232, 6, 11953, {400, true}, 52.88, 34, 48},
    {"Pollock", 156, 39, 3781, {111, false}, 32.31, 2, 16},
    {"Warne", 199, 17, 3154, {99, false}, 17.32, 0, 12},
    {"Waugh", 260, 46, 10927, {200, false}, 51.06, 32, 50},
};

// Builds an innings list with exactly the row's counts: the high score,
// centuries of 100, fifties of 50, and the remaining runs spread over
// sub-50 innings that carry the not-outs.
std::vector<InningsRecord> realize(const TableRow& row) {
    std::vector<InningsRecord> out{row.high};
    std::size_t hundreds = row.hundreds, fifties = row.fifties;
    if (row.high.score >= 100) {
        --hundreds;
    } else if (row.high.score >= 50) {
        --fifties;
    }
    for (std::size_t i = 0; i < hundreds; ++i) out.push_back({100, false});
    for (std::size_t i = 0; i < fifties; ++i) out.push_back({50, false});
    std::int64_t rest = row.runs;
    for (const auto& r : out) rest -= r.score;
    const std::size_t small = row.innings - out.size();
    std::size_t not_outs = row.not_outs - (row.high.not_out ? 1 : 0);
    for (std::size_t i = 0; i < small; ++i) {
        const auto left = static_cast<std::int64_t>(small - i);
        const std::int64_t s = (rest + left - 1) / left;
        out.push_back({s, not_outs > 0});
        if (not_outs > 0) --not_outs;
        rest -= s;
    }
    return out;
}

TEST(CareerSummary, PublishedCareerLines) {
    for (const auto& row : kTable) {
        const auto innings = realize(row);
        const CareerRecord got = career_summary(innings);
        CareerRecord want;
        want.innings = row.innings;
        want.not_outs = row.not_outs;
        want.runs = row.runs;
        want.high_score = row.high;
        want.average = row.average;
        want.hundreds = row.hundreds;
        want.fifties = row.fifties;
        const auto issues = check_career(got, want);
        EXPECT_TRUE(issues.empty()) << row.name << ": " << (issues.empty() ? "" : issues.front());
    }
}

TEST(CareerSummary, AverageArithmetic) {
    const auto avg = [](std::size_t inns, std::size_t no, std::int64_t runs) {
        CareerRecord r;
        r.innings = inns;
        r.not_outs = no;
        r.runs = runs;
        return format_average(r);
    };
    EXPECT_EQ(avg(104, 5, 3320), "33.53");
    EXPECT_EQ(avg(260, 46, 10927), "51.06");
    EXPECT_EQ(avg(171, 16, 5764), "37.18");
    EXPECT_EQ(avg(232, 6, 11953), "52.88");
    EXPECT_EQ(avg(199, 17, 3154), "17.32");
    EXPECT_EQ(avg(156, 39, 3781), "32.31");
    EXPECT_EQ(avg(3, 3, 10), "");
}

TEST(CareerSummary, SingleNotOut) {
    const std::vector<InningsRecord> one{{7, true}};
    const CareerRecord r = career_summary(one);
    EXPECT_EQ(r.runs, 7);
    EXPECT_EQ(r.not_outs, 1u);
    EXPECT_FALSE(r.average.has_value());
    EXPECT_THROW(r.average_or_throw(), Degenerate);
    EXPECT_EQ(format_average(r), "");
}

TEST(CareerSummary, HighScorePrefersNotOutOnTie) {
    const std::vector<InningsRecord> data{{80, false}, {80, true}, {12, false}};
    EXPECT_EQ(career_summary(data).high_score, (InningsRecord{80, true}));
    EXPECT_THROW(career_summary(std::vector<InningsRecord>{}), InvalidInput);
}

TEST(CareerSummary, MergesAdditively) {
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<InningsRecord> a(1 + rng.index(40)), b(1 + rng.index(40));
        for (auto* v : {&a, &b}) {
            for (auto& r : *v) r = {static_cast<std::int64_t>(rng.index(200)), rng.uniform() < 0.2};
        }
        std::vector<InningsRecord> both = a;
        both.insert(both.end(), b.begin(), b.end());
        const CareerRecord ra = career_summary(a), rb = career_summary(b), rab = career_summary(both);
        ASSERT_EQ(rab.innings, ra.innings + rb.innings);
        ASSERT_EQ(rab.not_outs, ra.not_outs + rb.not_outs);
        ASSERT_EQ(rab.runs, ra.runs + rb.runs);
        ASSERT_EQ(rab.hundreds, ra.hundreds + rb.hundreds);
        ASSERT_EQ(rab.fifties, ra.fifties + rb.fifties);
        ASSERT_EQ(rab.high_score.score, std::max(ra.high_score.score, rb.high_score.score));
    }
}

TEST(CheckCareer, ReportsMismatches) {
    const std::vector<InningsRecord> data{{10, false}, {20, true}};
    const CareerRecord got = career_summary(data);
    CareerRecord want = got;
    want.runs = 31;
    want.average = 31.0;
    const auto issues = check_career(got, want);
    ASSERT_EQ(issues.size(), 2u);
    EXPECT_NE(issues[0].find("runs"), std::string::npos);
    EXPECT_NE(issues[1].find("average"), std::string::npos);
}

}  // namespace
}  // namespace hazard_bayes
