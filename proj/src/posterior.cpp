#include "rankcred/posterior.hpp"

#include "rankcred/error.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace rankcred {

namespace {

constexpr std::size_t kMaxProposals = 10'000'000;

}  // namespace

void HbConfig::validate() const {
    if (samples < 1) throw DataError("HB config: samples must be >= 1");
    if (thin < 1) throw DataError("HB config: thin must be >= 1");
    if (init_a && !(*init_a > 0.0)) throw DataError("HB config: init_a must be > 0");
    if (fixed_a && !(*fixed_a > 0.0)) throw DataError("HB config: fixed_a must be > 0");
}

HbDesign::HbDesign(const Dataset& ds, bool include_intercept) {
    const Eigen::MatrixXd cov = ds.covariates();
    const Eigen::Index m = static_cast<Eigen::Index>(ds.size());
    const bool intercept = include_intercept || cov.cols() == 0;
    const Eigen::Index q = cov.cols() + (intercept ? 1 : 0);
    x_.resize(m, q);
    if (intercept) {
        x_.col(0).setOnes();
        x_.rightCols(cov.cols()) = cov;
    } else {
        x_ = cov;
    }

    if (m <= q + 1) {
        throw DataError("HB model needs m > p + 2 for a proper posterior (m = " + std::to_string(m) +
                        ", design columns = " + std::to_string(q) + ")");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x_);
    if (qr.rank() < q) {
        throw DataError("HB design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                        " < " + std::to_string(q) + " columns)");
    }
    const Eigen::MatrixXd xtx = x_.transpose() * x_;
    xtx_.compute(xtx);
    if (xtx_.info() != Eigen::Success) throw DataError("X'X is singular");
    xtx_lower_ = xtx_.matrixL();
}

Eigen::VectorXd HbDesign::least_squares(const Eigen::VectorXd& v) const {
    return xtx_.solve(x_.transpose() * v);
}

Eigen::VectorXd HbDesign::draw_coef_noise(double a, Rng& rng) const {
    std::normal_distribution<double> normal;
    Eigen::VectorXd z(x_.cols());
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = normal(rng);
    // X'X = L L'  =>  L'^{-1} z has covariance (X'X)^{-1}
    xtx_lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(z);
    return std::sqrt(a) * z;
}

PosteriorDraws sample_ub(const Dataset& ds, std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw DataError("UB sampler: samples must be >= 1");
    const std::size_t m = ds.size();
    Rng rng = make_stream(seed, {0});
    std::normal_distribution<double> normal;

    PosteriorDraws out;
    out.model = Model::UB;
    out.seed = seed;
    out.theta.resize(static_cast<Eigen::Index>(samples), static_cast<Eigen::Index>(m));
    std::vector<double> sd(m);
    for (std::size_t i = 0; i < m; ++i) sd[i] = std::sqrt(ds[i].d);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < m; ++i) {
            out.theta(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(i)) =
                ds[i].y + sd[i] * normal(rng);
        }
    }
    return out;
}

Eigen::VectorXd cond_theta(const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                           const Eigen::VectorXd& fitted, double a, Rng& rng) {
    if (!(a > 0.0)) throw NumericError("cond_theta needs A > 0");
    std::normal_distribution<double> normal;
    Eigen::VectorXd theta(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double denom = a + d[i];
        const double mean = (a * y[i] + d[i] * fitted[i]) / denom;
        const double var = a * d[i] / denom;
        theta[i] = mean + std::sqrt(var) * normal(rng);
    }
    return theta;
}

Eigen::VectorXd cond_theta(const Dataset& ds, const HbDesign& design, const Eigen::VectorXd& beta,
                           double a, Rng& rng) {
    return cond_theta(ds.y(), ds.d(), design.x() * beta, a, rng);
}

Eigen::VectorXd cond_beta(const HbDesign& design, const Eigen::VectorXd& theta, double a, Rng& rng) {
    if (!(a > 0.0)) throw NumericError("cond_beta needs A > 0");
    return design.least_squares(theta) + design.draw_coef_noise(a, rng);
}

double cond_a_rejection(double sse, std::size_t m, double dbar, Rng& rng, RejectionStats* stats) {
    // shape m/2 - 1 must be positive for a proper proposal
    if (m < 3) throw NumericError("A sampler needs m >= 3, got " + std::to_string(m));
    if (!(dbar > 0.0)) throw NumericError("A sampler needs mean(D) > 0");
    if (!(sse > 0.0) || !std::isfinite(sse)) {
        throw NumericError("A sampler: residual sum of squares is zero or non-finite (degenerate input)");
    }
    const double shape = 0.5 * static_cast<double>(m) - 1.0;
    const double scale = 0.5 * sse;
    std::gamma_distribution<double> gamma(shape, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t tries = 1; tries <= kMaxProposals; ++tries) {
        const double g = gamma(rng);
        if (!(g > 0.0)) continue;
        const double a = scale / g;
        const double u = unif(rng);
        if (u * u * (dbar + a) <= dbar) {
            if (stats) stats->proposals += tries;
            return a;
        }
    }
    throw NumericError("A sampler: no proposal accepted after " + std::to_string(kMaxProposals) +
                       " tries");
}

double cond_a_rejection(const HbDesign& design, const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& beta, double dbar, Rng& rng) {
    const double sse = (theta - design.x() * beta).squaredNorm();
    return cond_a_rejection(sse, static_cast<std::size_t>(theta.size()), dbar, rng);
}

PosteriorDraws gibbs_hb(const Dataset& ds, const HbConfig& cfg) {
    cfg.validate();
    const HbDesign design(ds, cfg.include_intercept);
    const std::size_t m = ds.size();
    if (m < 3) throw DataError("HB model needs at least 3 entities");

    const Eigen::VectorXd y = ds.y();
    const Eigen::VectorXd d = ds.d();
    const double dbar = d.mean();
    Rng rng = make_stream(cfg.seed, {1});

    double a = cfg.fixed_a.value_or(cfg.init_a.value_or(dbar));
    Eigen::VectorXd beta = design.least_squares(y);
    Eigen::VectorXd theta = y;

    PosteriorDraws out;
    out.model = Model::HB;
    out.seed = cfg.seed;
    out.burn_in = cfg.burn_in;
    out.thin = cfg.thin;
    const auto rows = static_cast<Eigen::Index>(cfg.samples);
    out.theta.resize(rows, static_cast<Eigen::Index>(m));
    DrawMatrix betas(rows, static_cast<Eigen::Index>(design.cols()));
    Eigen::VectorXd as(rows);

    const std::size_t sweeps = cfg.burn_in + cfg.samples * cfg.thin;
    Eigen::Index kept = 0;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        theta = cond_theta(y, d, design.x() * beta, a, rng);
        beta = cond_beta(design, theta, a, rng);
        if (!cfg.fixed_a) {
            const double sse = (theta - design.x() * beta).squaredNorm();
            a = cond_a_rejection(sse, m, dbar, rng);
        }
        if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == cfg.thin - 1) {
            out.theta.row(kept) = theta.transpose();
            betas.row(kept) = beta.transpose();
            as[kept] = a;
            ++kept;
        }
    }
    out.beta = std::move(betas);
    out.a = std::move(as);
    return out;
}

PosteriorSummary summarize(const PosteriorDraws& draws) {
    const Eigen::Index s = draws.theta.rows();
    if (s < 2) throw NumericError("summarize needs at least 2 draws");
    PosteriorSummary out;
    out.mean = draws.theta.colwise().mean().transpose();
    const Eigen::MatrixXd centered = draws.theta.rowwise() - out.mean.transpose();
    out.cov = (centered.transpose() * centered) / static_cast<double>(s);
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    if (draws.a) {
        out.a_mean = draws.a->mean();
        out.a_median = quantile(std::span<const double>(draws.a->data(),
                                                        static_cast<std::size_t>(draws.a->size())),
                                0.5);
    }
    return out;
}

PosteriorSummary summarize(const PosteriorDraws& draws, const Dataset& ds) {
    PosteriorSummary out = summarize(draws);
    if (draws.a) {
        Eigen::VectorXd shrink = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ds.size()));
        for (Eigen::Index s = 0; s < draws.a->size(); ++s) {
            for (std::size_t i = 0; i < ds.size(); ++i) {
                shrink[static_cast<Eigen::Index>(i)] += ds[i].d / (ds[i].d + (*draws.a)[s]);
            }
        }
        out.shrinkage = shrink / static_cast<double>(draws.a->size());
    }
    return out;
}

}  // namespace rankcred
