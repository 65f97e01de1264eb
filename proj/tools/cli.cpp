#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/hierarchical.hpp"
#include "hazard_bayes/ingest.hpp"
#include "hazard_bayes/player_analysis.hpp"
#include "hazard_bayes/simulator.hpp"

namespace hazard_bayes::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open input file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string fmt_double(double v, int digits = 17) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

/// Turns a player name into a file-name stem.
std::string slug(std::string_view name) {
    std::string out;
    for (unsigned char c : name) {
        if (std::isalnum(c) || c == '-' || c == '_') {
            out += static_cast<char>(c);
        } else if (!out.empty() && out.back() != '_') {
            out += '_';
        }
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "player" : out;
}

/// Bookkeeping for one invocation: inputs read, outputs written, manifest.
class Session {
public:
    Session(std::string command, std::vector<std::string> args, fs::path out_dir)
        : command_(std::move(command)), args_(std::move(args)), out_dir_(std::move(out_dir)), started_(utc_now()) {
        manifest_["command"] = command_;
        manifest_["version"] = kVersion;
        manifest_["argv"] = args_;
        manifest_["config"] = json::object();
    }

    std::string read_input(const fs::path& path) {
        std::string bytes = read_file(path);
        inputs_.push_back(json{{"path", path.string()}, {"sha256", sha256_hex(bytes)}});
        return bytes;
    }

    void note_input_dir(const fs::path& path) { inputs_.push_back(json{{"path", path.string()}, {"kind", "directory"}}); }

    void write(const std::string& name, const std::string& bytes) {
        fs::create_directories(out_dir_);
        const fs::path path = out_dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError("cannot write output file '" + path.string() + "'");
        out << bytes;
        if (!out) throw FileError("failed writing '" + path.string() + "'");
        outputs_.push_back(json{{"path", path.string()}, {"sha256", sha256_hex(bytes)}});
    }

    json& config() { return manifest_["config"]; }

    void finish() {
        manifest_["seed"] = manifest_["config"].contains("seed") ? manifest_["config"]["seed"] : json(nullptr);
        manifest_["inputs"] = inputs_;
        manifest_["outputs"] = outputs_;
        manifest_["started_at"] = started_;
        manifest_["finished_at"] = utc_now();
        fs::create_directories(out_dir_);
        std::ofstream out(out_dir_ / (command_ + ".manifest.json"), std::ios::trunc);
        if (!out) throw FileError("cannot write manifest in '" + out_dir_.string() + "'");
        out << manifest_.dump(2) << '\n';
    }

    const fs::path& out_dir() const { return out_dir_; }

private:
    std::string command_;
    std::vector<std::string> args_;
    fs::path out_dir_;
    std::string started_;
    json manifest_;
    json inputs_ = json::array();
    json outputs_ = json::array();
};

json summary_json(const SummaryRow& r) {
    return json{{"median", r.median},   {"plus_err", r.plus_err}, {"minus_err", r.minus_err},
                {"ci68", {r.lo68, r.hi68}}, {"ci95", {r.lo95, r.hi95}}};
}

std::string posterior_csv(const PlayerPosterior& post) {
    std::string out = "mu1,mu2,L,C,D\n";
    for (const auto& s : post.samples) {
        out += fmt_double(s.natural.mu1) + ',' + fmt_double(s.natural.mu2) + ',' + fmt_double(s.natural.L) + ',' +
               fmt_double(s.internal.C) + ',' + fmt_double(s.internal.D) + '\n';
    }
    return out;
}

PlayerPosterior parse_posterior_csv(const std::string& text, std::string player_id, const std::string& origin) {
    PlayerPosterior post;
    post.player_id = std::move(player_id);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "mu1,mu2,L,C,D") throw ParseError(line_no, origin + ": expected header mu1,mu2,L,C,D");
            header_seen = true;
            continue;
        }
        double v[5];
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int k = 0; k < 5; ++k) {
            const auto [ptr, ec] = std::from_chars(p, end, v[k]);
            if (ec != std::errc{}) throw ParseError(line_no, origin + ": malformed number");
            p = ptr;
            if (k < 4) {
                if (p == end || *p != ',') throw ParseError(line_no, origin + ": expected 5 fields");
                ++p;
            }
        }
        if (p != end) throw ParseError(line_no, origin + ": trailing characters");
        const BattingParams nat{v[0], v[1], v[2]};
        if (!nat.valid()) throw ParseError(line_no, origin + ": sample violates parameter constraints");
        post.samples.push_back(PosteriorSample{InternalParams{v[3], v[1], v[4]}, nat});
    }
    if (post.samples.empty()) throw ParseError(line_no, origin + ": no posterior samples");
    return post;
}

std::string posterior_stem(const fs::path& path) {
    std::string stem = path.filename().string();
    for (const std::string suffix : {".posterior.csv", ".csv"}) {
        if (stem.size() > suffix.size() && stem.ends_with(suffix)) return stem.substr(0, stem.size() - suffix.size());
    }
    return stem;
}

/// --seed when given, else $HAZARD_BAYES_SEED, else 0.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HAZARD_BAYES_SEED"); env && *env) {
        std::uint64_t v = 0;
        const std::string_view s(env);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw CLI::ValidationError("HAZARD_BAYES_SEED", "not an unsigned integer: " + std::string(s));
        }
        return v;
    }
    return 0;
}

struct NSFlags {
    std::size_t particles = 1000;
    std::size_t mcmc_steps = 1000;
    double tol = 1e-6;
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App* app) {
        app->add_option("--particles", particles, "Nested-sampling particles")->capture_default_str();
        app->add_option("--mcmc-steps", mcmc_steps, "MH steps per NS iteration")->capture_default_str();
        app->add_option("--tol", tol, "Remaining-evidence termination tolerance")->capture_default_str();
        app->add_option("--seed", seed, "Master RNG seed (falls back to $HAZARD_BAYES_SEED)");
    }

    NSConfig config() const {
        NSConfig cfg;
        cfg.n_particles = particles;
        cfg.mcmc_steps = mcmc_steps;
        cfg.termination_log_tol = tol;
        cfg.seed = resolve_seed(seed);
        return cfg;
    }
};

void echo_config(json& j, const NSConfig& cfg) {
    j["particles"] = cfg.n_particles;
    j["mcmc_steps"] = cfg.mcmc_steps;
    j["termination_log_tol"] = cfg.termination_log_tol;
    j["max_iterations"] = cfg.iteration_cap();
    j["seed"] = cfg.seed;
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string data;
    std::string out_dir = ".";
    NSFlags ns;
    std::size_t samples = 0;
    unsigned threads = 0;
    std::vector<std::string> players;
    bool no_bayes_factor = false;
};

void cmd_analyze(const AnalyzeArgs& a, Session& session) {
    const std::string text = session.read_input(a.data);
    const ParseResult parsed = parse_innings(text);
    if (!parsed.ok()) {
        const auto& e = parsed.errors.front();
        throw ParseError(e.line, a.data + ": " + e.message);
    }
    std::vector<PlayerData> players;
    for (const auto& p : parsed.players) {
        if (a.players.empty() || std::find(a.players.begin(), a.players.end(), p.player_id) != a.players.end()) {
            players.push_back(p);
        }
    }
    if (players.empty()) throw InvalidInput(a.data + ": no innings for the selected players");

    const NSConfig cfg = a.ns.config();
    cfg.validate();
    echo_config(session.config(), cfg);
    session.config()["samples"] = a.samples;
    session.config()["bayes_factor"] = !a.no_bayes_factor;
    session.config()["rows_skipped"] = parsed.rows_skipped;

    const auto posts = analyze_players(players, cfg, a.threads, a.samples);

    for (std::size_t i = 0; i < posts.size(); ++i) {
        const auto& post = posts[i];
        const std::string stem = slug(post.player_id);
        session.write(stem + ".posterior.csv", posterior_csv(post));

        const PlayerSummary sum = summarize(post);
        json summary{{"player", post.player_id},
                     {"n_samples", sum.n_samples},
                     {"params", {{"mu1", summary_json(sum.mu1)}, {"mu2", summary_json(sum.mu2)}, {"L", summary_json(sum.L)}}}};
        session.write(stem + ".summary.json", summary.dump(2) + "\n");

        const CareerRecord career = career_summary(players[i].innings);
        json evidence{{"player", post.player_id},
                      {"innings", post.innings},
                      {"not_outs", post.not_outs},
                      {"runs", career.runs},
                      {"average", format_average(career)},
                      {"log_z", post.log_evidence},
                      {"log_z_err", post.log_evidence_err},
                      {"information", post.information},
                      {"ess", post.ess},
                      {"ns_iterations", post.ns_iterations},
                      {"seed", post.config.seed}};
        if (!a.no_bayes_factor) {
            const BayesFactor bf = bayes_factor_vs_constant(post, players[i].innings, post.config);
            evidence["log_z0"] = bf.constant.log_z;
            evidence["log_z0_err"] = bf.constant.log_z_err;
            evidence["log_bayes_factor"] = bf.log_bf;
            evidence["log_bayes_factor_err"] = bf.log_bf_err;
        }
        session.write(stem + ".evidence.json", evidence.dump(2) + "\n");

        std::printf("%-20s mu1 %s  mu2 %s  L %s  log Z %.2f\n", post.player_id.c_str(),
                    format_summary(sum.mu1).c_str(), format_summary(sum.mu2).c_str(), format_summary(sum.L).c_str(),
                    post.log_evidence);
    }
}

struct CompareArgs {
    std::string a;
    std::string b;
    std::string param = "mu2";
    std::string out_dir = ".";
    std::uint64_t seed = 0;
};

void cmd_compare(const CompareArgs& c, Session& session) {
    const auto param = parse_param(c.param);
    if (!param) throw CLI::ValidationError("--param", "expected one of mu1, mu2, L, C, D");
    const auto pa = parse_posterior_csv(session.read_input(c.a), posterior_stem(c.a), c.a);
    const auto pb = parse_posterior_csv(session.read_input(c.b), posterior_stem(c.b), c.b);
    session.config()["param"] = c.param;
    session.config()["seed"] = c.seed;
    const double prob = compare_players(pa, pb, *param, c.seed);
    json out{{"a", pa.player_id}, {"b", pb.player_id}, {"param", c.param}, {"probability_a_greater", prob}};
    session.write("compare.json", out.dump(2) + "\n");
    std::printf("P(%s[%s] > %s[%s]) = %.4f\n", c.param.c_str(), pa.player_id.c_str(), c.param.c_str(),
                pb.player_id.c_str(), prob);
}

struct CurveArgs {
    std::string posterior;
    std::string out_dir = ".";
    std::int64_t x_max = 300;
};

void cmd_curve(const CurveArgs& c, Session& session) {
    if (c.x_max < 0) throw CLI::ValidationError("--x-max", "must be non-negative");
    const auto post = parse_posterior_csv(session.read_input(c.posterior), posterior_stem(c.posterior), c.posterior);
    session.config()["x_max"] = c.x_max;
    const auto curve = predictive_effective_average(post, c.x_max);
    std::string out = "x,median,lo68,hi68,lo95,hi95,predictive\n";
    for (const auto& pt : curve) {
        out += std::to_string(pt.x) + ',' + fmt_double(pt.median, 10) + ',' + fmt_double(pt.lo68, 10) + ',' +
               fmt_double(pt.hi68, 10) + ',' + fmt_double(pt.lo95, 10) + ',' + fmt_double(pt.hi95, 10) + ',' +
               fmt_double(pt.predictive, 10) + '\n';
    }
    session.write(slug(post.player_id) + ".curve.csv", out);
}

struct HierArgs {
    std::string data;
    std::string out_dir = ".";
    std::size_t grid_nu = 200;
    std::size_t grid_sigma = 200;
    std::size_t draws = 100000;
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
};

json ellipse_json(const Ellipse& e) {
    return json{{"center", {e.center_x, e.center_y}},
                {"semi_major", e.semi_major},
                {"semi_minor", e.semi_minor},
                {"angle", e.angle}};
}

json ellipses_for(std::span<const std::array<double, 2>> pts) {
    json out = json::object();
    for (const auto& [key, level] : {std::pair{"68", 0.68}, std::pair{"95", 0.95}}) {
        try {
            out[key] = ellipse_json(credible_ellipse(pts, level));
        } catch (const Degenerate& e) {
            out[key] = json{{"error", e.what()}};
        }
    }
    return out;
}

void cmd_hier(const HierArgs& h, Session& session) {
    const fs::path dir(h.data);
    if (!fs::is_directory(dir)) throw FileError("posterior directory '" + h.data + "' does not exist");
    session.note_input_dir(dir);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename().string().ends_with(".posterior.csv")) {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw FileError("no *.posterior.csv files in '" + h.data + "'");

    std::vector<PlayerPosterior> posts;
    for (const auto& f : files) posts.push_back(parse_posterior_csv(session.read_input(f), posterior_stem(f), f.string()));

    HyperGridSpec spec;
    spec.nu_points = h.grid_nu;
    spec.sigma_points = h.grid_sigma;
    const std::uint64_t seed = resolve_seed(h.seed);
    session.config()["grid_nu"] = h.grid_nu;
    session.config()["grid_sigma"] = h.grid_sigma;
    session.config()["draws"] = h.draws;
    session.config()["seed"] = seed;

    const HyperGrid grid = hyper_posterior(posts, spec, h.threads);

    std::string grid_csv = "nu,sigma,log_mass,mass\n";
    for (std::size_t i = 0; i < grid.nu_axis.size(); ++i) {
        for (std::size_t j = 0; j < grid.sigma_axis.size(); ++j) {
            grid_csv += fmt_double(grid.nu_axis[i]) + ',' + fmt_double(grid.sigma_axis[j]) + ',' +
                        fmt_double(grid.log_mass[grid.index(i, j)]) + ',' + fmt_double(grid.mass(i, j)) + '\n';
        }
    }
    session.write("hypergrid.csv", grid_csv);

    const auto marginal_csv = [](const char* name, const std::vector<double>& axis, const std::vector<double>& m) {
        std::string out = std::string(name) + ",mass\n";
        for (std::size_t i = 0; i < axis.size(); ++i) out += fmt_double(axis[i]) + ',' + fmt_double(m[i]) + '\n';
        return out;
    };
    session.write("nu_marginal.csv", marginal_csv("nu", grid.nu_axis, grid.nu_marginal()));
    session.write("sigma_marginal.csv", marginal_csv("sigma", grid.sigma_axis, grid.sigma_marginal()));

    Rng rng(seed);
    const NextPlayerPrediction next = predict_next_player(grid, h.draws, rng);
    const PlayerPosterior next_post = PlayerPosterior::from_natural("next_player", next.draws);
    session.write("next_player.posterior.csv", posterior_csv(next_post));

    json players = json::array();
    for (const auto& p : posts) {
        std::vector<std::array<double, 2>> pts;
        pts.reserve(p.samples.size());
        for (const auto& s : p.samples) pts.push_back({s.natural.mu1, s.natural.mu2});
        players.push_back(json{{"player", p.player_id}, {"n_samples", p.samples.size()}, {"ellipses", ellipses_for(pts)}});
    }
    std::vector<std::array<double, 2>> next_pts;
    next_pts.reserve(next.draws.size());
    for (const auto& d : next.draws) next_pts.push_back({d.mu1, d.mu2});

    const SummaryRow nu = grid.nu_summary();
    const SummaryRow sigma = grid.sigma_summary();
    json summary{{"n_players", posts.size()},
                 {"nu", summary_json(nu)},
                 {"sigma", summary_json(sigma)},
                 {"next_player",
                  {{"mu1", summary_json(next.mu1)},
                   {"mu2", summary_json(next.mu2)},
                   {"L", summary_json(next.L)},
                   {"ellipses", ellipses_for(next_pts)}}},
                 {"players", players}};
    session.write("hier_summary.json", summary.dump(2) + "\n");
    std::printf("nu %s  sigma %s\n", format_summary(nu, 2).c_str(), format_summary(sigma, 2).c_str());
    std::printf("next player: mu1 %s  mu2 %s  L %s\n", format_summary(next.mu1).c_str(),
                format_summary(next.mu2).c_str(), format_summary(next.L).c_str());
}

struct SimulateArgs {
    double mu1 = 0.0;
    double mu2 = 0.0;
    double L = 1.0;
    std::size_t n = 100;
    double censor_prob = 0.0;
    std::optional<std::uint64_t> seed;
    std::string player = "simulated";
    std::string out_dir = ".";
};

void cmd_simulate(const SimulateArgs& s, Session& session) {
    const BattingParams p{s.mu1, s.mu2, s.L};
    if (!p.valid()) throw CLI::ValidationError("--mu1/--mu2/--L", "need 0 <= mu1 <= mu2 and 0 < L <= mu2");
    const std::uint64_t seed = resolve_seed(s.seed);
    session.config()["mu1"] = s.mu1;
    session.config()["mu2"] = s.mu2;
    session.config()["L"] = s.L;
    session.config()["n"] = s.n;
    session.config()["censor_prob"] = s.censor_prob;
    session.config()["seed"] = seed;
    Rng rng(seed);
    const PlayerData career{s.player, simulate_career(p, s.n, CensorModel{s.censor_prob}, rng)};
    session.write(slug(s.player) + ".csv", serialize_innings(std::span(&career, 1)));
}

struct RecoverArgs {
    double mu1 = 10.0;
    double mu2 = 40.0;
    double L = 5.0;
    std::size_t n = 500;
    std::size_t repeats = 20;
    double censor_prob = 0.0;
    NSFlags ns;
    std::string out_dir = ".";
};

void cmd_recover(const RecoverArgs& r, Session& session) {
    const BattingParams truth{r.mu1, r.mu2, r.L};
    if (!truth.valid()) throw CLI::ValidationError("--mu1/--mu2/--L", "need 0 <= mu1 <= mu2 and 0 < L <= mu2");
    const NSConfig cfg = r.ns.config();
    cfg.validate();
    echo_config(session.config(), cfg);
    session.config()["n"] = r.n;
    session.config()["repeats"] = r.repeats;
    session.config()["censor_prob"] = r.censor_prob;

    Rng rng(cfg.seed);
    const RecoveryReport report = recovery_experiment(truth, r.n, cfg, r.repeats, rng, CensorModel{r.censor_prob});

    std::string rows = "repeat,seed,param,median,lo68,hi68,lo95,hi95,covered68,covered95\n";
    for (const auto& row : report.rows) {
        const std::array<std::pair<const char*, const SummaryRow*>, 3> items{
            std::pair{"mu1", &row.summary.mu1}, std::pair{"mu2", &row.summary.mu2}, std::pair{"L", &row.summary.L}};
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& s = *items[k].second;
            rows += std::to_string(row.repeat) + ',' + std::to_string(row.seed) + ',' + items[k].first + ',' +
                    fmt_double(s.median, 10) + ',' + fmt_double(s.lo68, 10) + ',' + fmt_double(s.hi68, 10) + ',' +
                    fmt_double(s.lo95, 10) + ',' + fmt_double(s.hi95, 10) + ',' + (row.covered68[k] ? "1" : "0") +
                    ',' + (row.covered95[k] ? "1" : "0") + '\n';
        }
    }
    session.write("recovery.csv", rows);

    json cover = json::object();
    const char* names[] = {"mu1", "mu2", "L"};
    for (std::size_t k = 0; k < 3; ++k) {
        cover[names[k]] = json{{"coverage68", report.coverage68[k]},
                               {"coverage95", report.coverage95[k]},
                               {"median_width95", report.median_width95[k]}};
    }
    json out{{"truth", {{"mu1", r.mu1}, {"mu2", r.mu2}, {"L", r.L}}},
             {"n_innings", r.n},
             {"repeats", r.repeats},
             {"coverage", cover}};
    session.write("recovery.json", out.dump(2) + "\n");
    for (std::size_t k = 0; k < 3; ++k) {
        std::printf("%-4s coverage68 %.2f  coverage95 %.2f\n", names[k], report.coverage68[k], report.coverage95[k]);
    }
}

int run_parsed(const std::vector<std::string>& args);

int cmd_replay(const std::string& manifest_path) {
    const json manifest = json::parse(read_file(manifest_path));
    if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
        throw InvalidInput(manifest_path + ": manifest has no argv");
    }
    const auto argv = manifest["argv"].get<std::vector<std::string>>();
    if (!argv.empty() && argv.front() == "replay") throw InvalidInput("refusing to replay a replay manifest");
    return run_parsed(argv);
}

int run_parsed(const std::vector<std::string>& args) {
    CLI::App app{"Bayesian dismissal-hazard inference for batting records", "hazard-bayes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "Infer (mu1, mu2, L) per player from an innings CSV");
    a->add_option("--data", analyze.data, "Innings CSV (player,score[,innings])")->required();
    a->add_option("--out-dir", analyze.out_dir, "Output directory")->capture_default_str();
    analyze.ns.add_to(a);
    a->add_option("--samples", analyze.samples, "Equal-weight posterior draws (0: as many as NS produced)");
    a->add_option("--threads", analyze.threads, "Worker threads (0: hardware concurrency)");
    a->add_option("--player", analyze.players, "Restrict to these players");
    a->add_flag("--no-bayes-factor", analyze.no_bayes_factor, "Skip the constant-hazard evidence run");

    CompareArgs compare;
    auto* c = app.add_subcommand("compare", "P(param of A > param of B) from two posterior files");
    c->add_option("a", compare.a, "Posterior CSV for A")->required();
    c->add_option("b", compare.b, "Posterior CSV for B")->required();
    c->add_option("--param", compare.param, "mu1, mu2, L, C or D")->capture_default_str();
    c->add_option("--seed", compare.seed, "Seed for random pair subsampling")->capture_default_str();
    c->add_option("--out-dir", compare.out_dir, "Output directory")->capture_default_str();

    CurveArgs curve;
    auto* cu = app.add_subcommand("curve", "Predictive effective-average curve with credible bands");
    cu->add_option("posterior", curve.posterior, "Posterior CSV")->required();
    cu->add_option("--x-max", curve.x_max, "Largest score on the curve")->capture_default_str();
    cu->add_option("--out-dir", curve.out_dir, "Output directory")->capture_default_str();

    HierArgs hier;
    auto* h = app.add_subcommand("hier", "Pool per-player posteriors into a (nu, sigma) hyperposterior");
    h->add_option("--data", hier.data, "Directory of *.posterior.csv files")->required();
    h->add_option("--out-dir", hier.out_dir, "Output directory")->capture_default_str();
    h->add_option("--grid-nu", hier.grid_nu, "Grid points along nu")->capture_default_str();
    h->add_option("--grid-sigma", hier.grid_sigma, "Grid points along sigma")->capture_default_str();
    h->add_option("--draws", hier.draws, "Next-player predictive draws")->capture_default_str();
    h->add_option("--seed", hier.seed, "RNG seed (falls back to $HAZARD_BAYES_SEED)");
    h->add_option("--threads", hier.threads, "Worker threads (0: hardware concurrency)");

    SimulateArgs simulate;
    auto* s = app.add_subcommand("simulate", "Simulate a career in the innings CSV format");
    s->add_option("--mu1", simulate.mu1)->required();
    s->add_option("--mu2", simulate.mu2)->required();
    s->add_option("--L", simulate.L)->required();
    s->add_option("--n", simulate.n, "Number of innings")->capture_default_str();
    s->add_option("--censor-prob", simulate.censor_prob, "Probability an innings is not out")->capture_default_str();
    s->add_option("--seed", simulate.seed, "RNG seed (falls back to $HAZARD_BAYES_SEED)");
    s->add_option("--player", simulate.player, "Player name in the output")->capture_default_str();
    s->add_option("--out-dir", simulate.out_dir, "Output directory")->capture_default_str();

    RecoverArgs recover;
    auto* r = app.add_subcommand("recover", "Parameter-recovery coverage experiment");
    r->add_option("--mu1", recover.mu1)->capture_default_str();
    r->add_option("--mu2", recover.mu2)->capture_default_str();
    r->add_option("--L", recover.L)->capture_default_str();
    r->add_option("--n", recover.n, "Innings per simulated career")->capture_default_str();
    r->add_option("--repeats", recover.repeats)->capture_default_str();
    r->add_option("--censor-prob", recover.censor_prob)->capture_default_str();
    recover.ns.add_to(r);
    r->add_option("--out-dir", recover.out_dir, "Output directory")->capture_default_str();

    std::string manifest_path;
    auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    rp->add_option("manifest", manifest_path, "Path to a *.manifest.json")->required();

    std::vector<std::string> argv_store{"hazard-bayes"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s_ : argv_store) argv.push_back(s_.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (rp->parsed()) return cmd_replay(manifest_path);

    const auto with_session = [&](const char* name, const std::string& out_dir, auto&& body) {
        Session session(name, args, out_dir);
        body(session);
        session.finish();
        return kOk;
    };
    if (a->parsed()) return with_session("analyze", analyze.out_dir, [&](Session& ss) { cmd_analyze(analyze, ss); });
    if (c->parsed()) return with_session("compare", compare.out_dir, [&](Session& ss) { cmd_compare(compare, ss); });
    if (cu->parsed()) return with_session("curve", curve.out_dir, [&](Session& ss) { cmd_curve(curve, ss); });
    if (h->parsed()) return with_session("hier", hier.out_dir, [&](Session& ss) { cmd_hier(hier, ss); });
    if (s->parsed()) return with_session("simulate", simulate.out_dir, [&](Session& ss) { cmd_simulate(simulate, ss); });
    if (r->parsed()) return with_session("recover", recover.out_dir, [&](Session& ss) { cmd_recover(recover, ss); });
    return kUsage;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    try {
        return run_parsed(args);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const FileError& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kMissingFile;
    } catch (const ParseError& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed input: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kMalformedInput;
    } catch (const SamplerError& e) {
        std::cerr << "sampler failure: " << e.what() << '\n';
        return kSamplerFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace hazard_bayes::cli
