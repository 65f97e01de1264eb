#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/hierarchical.hpp"
#include "hazard_bayes/ingest.hpp"
#include "hazard_bayes/player_analysis.hpp"
#include "hazard_bayes/simulator.hpp"

namespace py = pybind11;
using namespace hazard_bayes;

namespace {

// Innings accepted from Python as (score, not_out) pairs.
std::vector<InningsRecord> to_innings(const std::vector<std::pair<std::int64_t, bool>>& rows) {
    std::vector<InningsRecord> out;
    out.reserve(rows.size());
    for (const auto& [score, not_out] : rows) out.push_back(InningsRecord{score, not_out});
    return out;
}

std::vector<std::pair<std::int64_t, bool>> from_innings(std::span<const InningsRecord> rows) {
    std::vector<std::pair<std::int64_t, bool>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.emplace_back(r.score, r.not_out);
    return out;
}

NSConfig make_config(std::size_t particles, std::size_t mcmc_steps, std::uint64_t seed, double tol) {
    NSConfig cfg;
    cfg.n_particles = particles;
    cfg.mcmc_steps = mcmc_steps;
    cfg.seed = seed;
    cfg.termination_log_tol = tol;
    cfg.validate();
    return cfg;
}

py::dict summary_dict(const SummaryRow& r) {
    py::dict d;
    d["median"] = r.median;
    d["plus_err"] = r.plus_err;
    d["minus_err"] = r.minus_err;
    d["ci68"] = py::make_tuple(r.lo68, r.hi68);
    d["ci95"] = py::make_tuple(r.lo95, r.hi95);
    return d;
}

// (n, 5) array with columns mu1, mu2, L, C, D.
py::array_t<double> samples_array(const PlayerPosterior& post) {
    py::array_t<double> out({static_cast<py::ssize_t>(post.samples.size()), py::ssize_t{5}});
    auto m = out.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < m.shape(0); ++i) {
        const auto& s = post.samples[static_cast<std::size_t>(i)];
        m(i, 0) = s.natural.mu1;
        m(i, 1) = s.natural.mu2;
        m(i, 2) = s.natural.L;
        m(i, 3) = s.internal.C;
        m(i, 4) = s.internal.D;
    }
    return out;
}

PlayerPosterior posterior_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
                                     const std::string& player_id) {
    if (a.ndim() != 2 || a.shape(1) < 3) throw InvalidInput("posterior array must have shape (n, 3) or (n, 5)");
    auto r = a.unchecked<2>();
    std::vector<BattingParams> draws;
    draws.reserve(static_cast<std::size_t>(r.shape(0)));
    for (py::ssize_t i = 0; i < r.shape(0); ++i) {
        const BattingParams p{r(i, 0), r(i, 1), r(i, 2)};
        if (!p.valid()) throw InvalidInput("posterior row violates 0 <= mu1 <= mu2, 0 < L <= mu2");
        draws.push_back(p);
    }
    return PlayerPosterior::from_natural(player_id, draws);
}

Param param_arg(const std::string& name) {
    const auto p = parse_param(name);
    if (!p) throw InvalidInput("unknown parameter '" + name + "' (expected mu1, mu2, L, C or D)");
    return *p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bayesian dismissal-hazard models for batting records";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<SamplerError>(m, "SamplerError", PyExc_RuntimeError);
    py::register_exception<Degenerate>(m, "Degenerate", PyExc_ArithmeticError);

    py::class_<BattingParams>(m, "BattingParams")
        .def(py::init<double, double, double>(), py::arg("mu1"), py::arg("mu2"), py::arg("L"))
        .def_readwrite("mu1", &BattingParams::mu1)
        .def_readwrite("mu2", &BattingParams::mu2)
        .def_readwrite("L", &BattingParams::L)
        .def("valid", &BattingParams::valid)
        .def("__repr__", [](const BattingParams& p) {
            return "BattingParams(mu1=" + std::to_string(p.mu1) + ", mu2=" + std::to_string(p.mu2) +
                   ", L=" + std::to_string(p.L) + ")";
        });

    m.def("effective_average", &effective_average, py::arg("x"), py::arg("params"));
    m.def("hazard", &hazard, py::arg("x"), py::arg("params"));
    m.def("survival", &survival, py::arg("x"), py::arg("params"));
    m.def("score_pmf", &score_pmf, py::arg("x"), py::arg("params"));
    m.def(
        "log_likelihood",
        [](const std::vector<std::pair<std::int64_t, bool>>& innings, const BattingParams& p) {
            return log_likelihood(to_innings(innings), p);
        },
        py::arg("innings"), py::arg("params"), "Censored log-likelihood of (score, not_out) pairs.");

    m.def(
        "parse_innings",
        [](const std::string& text) {
            py::dict out;
            for (const auto& p : parse_innings_strict(text)) out[py::str(p.player_id)] = from_innings(p.innings);
            return out;
        },
        py::arg("text"), "Parse innings CSV text into {player: [(score, not_out), ...]}.");

    m.def(
        "career_summary",
        [](const std::vector<std::pair<std::int64_t, bool>>& innings) {
            const CareerRecord r = career_summary(to_innings(innings));
            py::dict d;
            d["innings"] = r.innings;
            d["not_outs"] = r.not_outs;
            d["runs"] = r.runs;
            d["high_score"] = format_score(r.high_score);
            d["average"] = r.average ? py::cast(*r.average) : py::none();
            d["average_text"] = format_average(r);
            d["hundreds"] = r.hundreds;
            d["fifties"] = r.fifties;
            return d;
        },
        py::arg("innings"));

    m.def(
        "simulate_career",
        [](const BattingParams& p, std::size_t n, double censor_prob, std::uint64_t seed) {
            Rng rng(seed);
            return from_innings(simulate_career(p, n, CensorModel{censor_prob}, rng));
        },
        py::arg("params"), py::arg("n_innings"), py::arg("censor_prob") = 0.0, py::arg("seed") = 0);

    m.def(
        "analyze_player",
        [](const std::vector<std::pair<std::int64_t, bool>>& innings, std::size_t particles, std::size_t mcmc_steps,
           std::uint64_t seed, double tol, std::size_t n_samples) {
            const auto data = to_innings(innings);
            const NSConfig cfg = make_config(particles, mcmc_steps, seed, tol);
            PlayerPosterior post;
            {
                py::gil_scoped_release release;
                post = analyze_player(data, cfg, {}, n_samples);
            }
            const PlayerSummary s = summarize(post);
            py::dict out;
            out["samples"] = samples_array(post);
            out["log_z"] = post.log_evidence;
            out["log_z_err"] = post.log_evidence_err;
            out["information"] = post.information;
            out["ess"] = post.ess;
            out["iterations"] = post.ns_iterations;
            out["summary"] = py::dict(py::arg("mu1") = summary_dict(s.mu1), py::arg("mu2") = summary_dict(s.mu2),
                                      py::arg("L") = summary_dict(s.L));
            return out;
        },
        py::arg("innings"), py::arg("particles") = 1000, py::arg("mcmc_steps") = 1000, py::arg("seed") = 0,
        py::arg("tol") = 1e-6, py::arg("n_samples") = 0,
        "Nested-sampling posterior for one player's innings. Returns samples (columns mu1, mu2, L, C, D), "
        "evidence and a summary.");

    m.def(
        "bayes_factor",
        [](const std::vector<std::pair<std::int64_t, bool>>& innings, std::size_t particles, std::size_t mcmc_steps,
           std::uint64_t seed) {
            const auto data = to_innings(innings);
            const NSConfig cfg = make_config(particles, mcmc_steps, seed, 1e-6);
            BayesFactor bf;
            {
                py::gil_scoped_release release;
                bf = bayes_factor_vs_constant(data, cfg);
            }
            py::dict d;
            d["log_z"] = bf.varying.log_z;
            d["log_z0"] = bf.constant.log_z;
            d["log_bf"] = bf.log_bf;
            d["log_bf_err"] = bf.log_bf_err;
            return d;
        },
        py::arg("innings"), py::arg("particles") = 1000, py::arg("mcmc_steps") = 1000, py::arg("seed") = 0,
        "log Z of the varying-hazard model minus log Z0 of the constant-hazard model.");

    m.def(
        "compare",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b, const std::string& param,
           std::uint64_t seed) {
            return compare_players(posterior_from_array(a, "a"), posterior_from_array(b, "b"), param_arg(param),
                                   seed);
        },
        py::arg("a"), py::arg("b"), py::arg("param") = "mu2", py::arg("seed") = 0,
        "P(param(a) > param(b)) for two posterior sample arrays.");

    m.def(
        "predictive_curve",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& samples, std::int64_t x_max) {
            const auto curve = predictive_effective_average(posterior_from_array(samples, "p"), x_max);
            py::array_t<double> out({static_cast<py::ssize_t>(curve.size()), py::ssize_t{7}});
            auto m2 = out.mutable_unchecked<2>();
            for (py::ssize_t i = 0; i < m2.shape(0); ++i) {
                const auto& pt = curve[static_cast<std::size_t>(i)];
                m2(i, 0) = static_cast<double>(pt.x);
                m2(i, 1) = pt.median;
                m2(i, 2) = pt.lo68;
                m2(i, 3) = pt.hi68;
                m2(i, 4) = pt.lo95;
                m2(i, 5) = pt.hi95;
                m2(i, 6) = pt.predictive;
            }
            return out;
        },
        py::arg("samples"), py::arg("x_max") = 300,
        "Columns x, median, lo68, hi68, lo95, hi95, predictive.");

    m.def(
        "hierarchical",
        [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& posteriors,
           std::size_t grid_nu, std::size_t grid_sigma, std::size_t draws, std::uint64_t seed) {
            std::vector<PlayerPosterior> posts;
            for (std::size_t i = 0; i < posteriors.size(); ++i) {
                posts.push_back(posterior_from_array(posteriors[i], "p" + std::to_string(i)));
            }
            HyperGridSpec spec;
            spec.nu_points = grid_nu;
            spec.sigma_points = grid_sigma;
            HyperGrid grid;
            NextPlayerPrediction next;
            {
                py::gil_scoped_release release;
                grid = hyper_posterior(posts, spec, 1);
                Rng rng(seed);
                next = predict_next_player(grid, draws, rng);
            }
            py::array_t<double> mass({static_cast<py::ssize_t>(grid.nu_axis.size()),
                                      static_cast<py::ssize_t>(grid.sigma_axis.size())});
            std::copy(grid.normalized_mass.begin(), grid.normalized_mass.end(), mass.mutable_data());
            py::dict d;
            d["nu_axis"] = grid.nu_axis;
            d["sigma_axis"] = grid.sigma_axis;
            d["mass"] = mass;
            d["nu"] = summary_dict(grid.nu_summary());
            d["sigma"] = summary_dict(grid.sigma_summary());
            d["next_player"] = py::dict(py::arg("mu1") = summary_dict(next.mu1),
                                        py::arg("mu2") = summary_dict(next.mu2), py::arg("L") = summary_dict(next.L));
            return d;
        },
        py::arg("posteriors"), py::arg("grid_nu") = 200, py::arg("grid_sigma") = 200, py::arg("draws") = 100000,
        py::arg("seed") = 0, "Hyperposterior over (nu, sigma) and the next-player prediction.");
}
