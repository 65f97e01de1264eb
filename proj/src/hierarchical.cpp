#include "hazard_bayes/hierarchical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "hazard_bayes/error.hpp"
#include "hazard_bayes/priors.hpp"

namespace hazard_bayes {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

// Percentile of a density given on equally spaced nodes, each node's mass
// spread uniformly over a cell of one grid step centred on it.
double grid_percentile(const std::vector<double>& axis, const std::vector<double>& mass, double q) {
    const double h = axis.size() > 1 ? axis[1] - axis[0] : 0.0;
    double cum = 0.0;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (cum + mass[i] >= q && mass[i] > 0.0) {
            const double frac = (q - cum) / mass[i];
            return axis[i] - 0.5 * h + frac * h;
        }
        cum += mass[i];
    }
    return axis.back() + 0.5 * h;
}

SummaryRow grid_summary(const std::vector<double>& axis, const std::vector<double>& mass) {
    SummaryRow row;
    row.lo95 = grid_percentile(axis, mass, 0.025);
    row.lo68 = grid_percentile(axis, mass, 0.16);
    row.median = grid_percentile(axis, mass, 0.5);
    row.hi68 = grid_percentile(axis, mass, 0.84);
    row.hi95 = grid_percentile(axis, mass, 0.975);
    row.plus_err = row.hi68 - row.median;
    row.minus_err = row.median - row.lo68;
    return row;
}

}  // namespace

void HyperGridSpec::validate() const {
    if (nu_points < 2 || sigma_points < 2) throw InvalidInput("hypergrid needs at least 2 points per axis");
    if (!(nu_min >= 1.0 && nu_max <= 100.0 && nu_min < nu_max)) {
        throw InvalidInput("nu axis must be an increasing range inside [1, 100]");
    }
    if (!(sigma_min > 0.0 && sigma_max <= 10.0 && sigma_min < sigma_max)) {
        throw InvalidInput("sigma axis must be an increasing range inside (0, 10]");
    }
}

std::vector<double> HyperGrid::nu_marginal() const {
    std::vector<double> out(nu_axis.size(), 0.0);
    for (std::size_t i = 0; i < nu_axis.size(); ++i) {
        for (std::size_t j = 0; j < sigma_axis.size(); ++j) out[i] += mass(i, j);
    }
    return out;
}

std::vector<double> HyperGrid::sigma_marginal() const {
    std::vector<double> out(sigma_axis.size(), 0.0);
    for (std::size_t i = 0; i < nu_axis.size(); ++i) {
        for (std::size_t j = 0; j < sigma_axis.size(); ++j) out[j] += mass(i, j);
    }
    return out;
}

SummaryRow HyperGrid::nu_summary() const {
    return grid_summary(nu_axis, nu_marginal());
}

SummaryRow HyperGrid::sigma_summary() const {
    return grid_summary(sigma_axis, sigma_marginal());
}

Mu2Reweighter::Mu2Reweighter(const PlayerPosterior& post) : Mu2Reweighter(param_values(post, Param::mu2)) {}

Mu2Reweighter::Mu2Reweighter(std::span<const double> mu2_samples) {
    if (mu2_samples.empty()) throw InvalidInput("reweighting needs a non-empty posterior");
    log_mu2_.reserve(mu2_samples.size());
    log_prior_.reserve(mu2_samples.size());
    for (double m : mu2_samples) {
        if (!(m > 0.0)) throw InvalidInput("posterior mu2 sample is not positive");
        log_mu2_.push_back(std::log(m));
        log_prior_.push_back(kMu2Prior.log_pdf(m));
    }
    all_equal_ = std::all_of(mu2_samples.begin(), mu2_samples.end(), [&](double m) { return m == mu2_samples[0]; });
}

double Mu2Reweighter::log_term(double nu, double sigma) const {
    if (sigma == 0.0) {
        if (all_equal_) throw Degenerate("sigma = 0 with identical mu2 samples is a boundary cell");
        return kNegInf;
    }
    if (!(nu > 0.0) || !(sigma > 0.0)) throw InvalidInput("reweighting needs nu > 0 and sigma >= 0");

    // Mirrors LogNormalByMedian::log_pdf term for term, so f == pi gives an
    // exactly zero log ratio.
    const double log_nu = std::log(nu);
    const double log_sigma = std::log(sigma);
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);

    // Single-pass log-sum-exp with a running maximum.
    double top = kNegInf;
    double acc = 0.0;
    for (std::size_t s = 0; s < log_mu2_.size(); ++s) {
        const double lx = log_mu2_[s];
        const double z = (lx - log_nu) / sigma;
        const double log_f = -0.5 * z * z - lx - log_sigma - half_log_2pi;
        const double d = log_f - log_prior_[s];
        if (d <= top) {
            acc += std::exp(d - top);
        } else {
            acc = acc * std::exp(top - d) + 1.0;
            top = d;
        }
    }
    return top + std::log(acc) - std::log(static_cast<double>(log_mu2_.size()));
}

double log_reweight_term(const PlayerPosterior& post, double nu, double sigma) {
    return Mu2Reweighter(post).log_term(nu, sigma);
}

double reweight_term(const PlayerPosterior& post, double nu, double sigma) {
    return std::exp(log_reweight_term(post, nu, sigma));
}

HyperGrid hyper_posterior(std::span<const PlayerPosterior> players, const HyperGridSpec& spec, unsigned threads) {
    spec.validate();
    if (players.empty()) throw InvalidInput("hyperposterior needs at least one player");

    std::vector<Mu2Reweighter> terms;
    terms.reserve(players.size());
    for (const auto& p : players) terms.emplace_back(p);

    HyperGrid grid;
    grid.nu_axis = linspace(spec.nu_min, spec.nu_max, spec.nu_points);
    grid.sigma_axis = linspace(spec.sigma_min, spec.sigma_max, spec.sigma_points);
    grid.log_mass.assign(spec.nu_points * spec.sigma_points, 0.0);

    // Rows are independent; each thread fills whole nu rows.
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < spec.nu_points; i = next++) {
            for (std::size_t j = 0; j < spec.sigma_points; ++j) {
                double acc = 0.0;
                for (const auto& t : terms) {
                    acc += t.log_term(grid.nu_axis[i], grid.sigma_axis[j]);
                    if (acc == kNegInf) break;
                }
                grid.log_mass[grid.index(i, j)] = acc;
            }
        }
    };
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    const double log_norm = log_sum_exp(grid.log_mass);
    if (!std::isfinite(log_norm)) throw SamplerError("hyperposterior mass is zero on every grid cell");
    grid.normalized_mass.resize(grid.log_mass.size());
    double total = 0.0;
    for (std::size_t k = 0; k < grid.log_mass.size(); ++k) {
        grid.normalized_mass[k] = std::exp(grid.log_mass[k] - log_norm);
        total += grid.normalized_mass[k];
    }
    for (auto& m : grid.normalized_mass) m /= total;
    return grid;
}

NextPlayerPrediction predict_next_player(const HyperGrid& grid, std::size_t n_draws, Rng& rng) {
    if (grid.normalized_mass.empty()) throw InvalidInput("empty hypergrid");
    if (n_draws == 0) throw InvalidInput("prediction needs at least one draw");
    std::vector<double> cumulative(grid.normalized_mass.size());
    double run = 0.0;
    for (std::size_t k = 0; k < cumulative.size(); ++k) {
        run += grid.normalized_mass[k];
        cumulative[k] = run;
    }

    NextPlayerPrediction out;
    out.draws.reserve(n_draws);
    std::vector<double> mu1(n_draws), mu2(n_draws), L(n_draws);
    const std::size_t n_sigma = grid.sigma_axis.size();
    for (std::size_t k = 0; k < n_draws; ++k) {
        const double u = rng.uniform() * run;
        auto cell = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                                             cumulative.begin());
        cell = std::min(cell, cumulative.size() - 1);
        const double nu = grid.nu_axis[cell / n_sigma];
        const double sigma = grid.sigma_axis[cell % n_sigma];

        InternalParams q;
        q.mu2 = nu * std::exp(sigma * rng.normal());
        q.C = kCPrior.quantile(rng.uniform());
        q.D = kDPrior.quantile(rng.uniform());
        const BattingParams p = to_natural(q);
        out.draws.push_back(p);
        mu1[k] = p.mu1;
        mu2[k] = p.mu2;
        L[k] = p.L;
    }
    out.mu1 = summarize_values(mu1);
    out.mu2 = summarize_values(mu2);
    out.L = summarize_values(L);
    return out;
}

double chi2_2dof_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidInput("credible level must lie in (0, 1)");
    return -2.0 * std::log1p(-level);
}

Ellipse credible_ellipse(std::span<const std::array<double, 2>> points, double level) {
    if (points.size() < 3) throw InvalidInput("credible ellipse needs at least 3 points");
    const double scale = chi2_2dof_quantile(level);

    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& p : points) {
        const double dx = p[0] - mx;
        const double dy = p[1] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    sxx /= n - 1.0;
    sxy /= n - 1.0;
    syy /= n - 1.0;

    const double half_trace = 0.5 * (sxx + syy);
    const double radius = std::hypot(0.5 * (sxx - syy), sxy);
    const double big = half_trace + radius;
    const double small = half_trace - radius;
    if (!(big > 0.0) || !(small > 1e-12 * big)) throw Degenerate("sample covariance is singular");

    Ellipse e;
    e.center_x = mx;
    e.center_y = my;
    e.semi_major = std::sqrt(big * scale);
    e.semi_minor = std::sqrt(small * scale);
    e.angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    return e;
}

}  // namespace hazard_bayes
