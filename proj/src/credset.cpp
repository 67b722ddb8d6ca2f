#include "rankcred/credset.hpp"

#include "rankcred/error.hpp"
#include "rankcred/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rankcred {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw NumericError("alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
}

void check_alpha(double alpha, std::size_t samples) {
    check_alpha(alpha);
    if (static_cast<double>(samples) * (1.0 - alpha) < 1.0) {
        throw NumericError("S (1 - alpha) must be at least 1");
    }
}

std::size_t target_count(std::size_t samples, double alpha) {
    return static_cast<std::size_t>(std::llround(static_cast<double>(samples) * (1.0 - alpha)));
}

std::size_t distance(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

Mahalanobis::Mahalanobis(Eigen::VectorXd center, const Eigen::MatrixXd& dispersion)
    : center_(std::move(center)) {
    if (dispersion.rows() != dispersion.cols() || dispersion.rows() != center_.size()) {
        throw NumericError("dispersion must be square and match the center dimension");
    }
    auto positive = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
        if (llt.info() != Eigen::Success) return false;
        const auto diag = llt.matrixLLT().diagonal();
        return (diag.array() > 0.0).all() && diag.allFinite();
    };
    llt_.compute(dispersion);
    if (!positive(llt_)) {
        Eigen::MatrixXd jittered = dispersion;
        const double jitter = 1e-10 * dispersion.diagonal().mean();
        jittered.diagonal().array() += jitter;
        llt_.compute(jittered);
        if (!positive(llt_)) throw NumericError("dispersion matrix is not positive definite");
    }
}

double Mahalanobis::operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    Eigen::VectorXd diff = x - center_;
    llt_.matrixL().solveInPlace(diff);
    return diff.squaredNorm();
}

double Mahalanobis::log_det() const {
    return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

double mahalanobis(const Eigen::VectorXd& theta, const Eigen::VectorXd& center,
                   const Eigen::MatrixXd& dispersion) {
    return Mahalanobis(center, dispersion)(theta);
}

Eigen::VectorXd mahalanobis_all(const DrawMatrix& draws, const Mahalanobis& metric) {
    Eigen::VectorXd out(draws.rows());
    for (Eigen::Index s = 0; s < draws.rows(); ++s) out[s] = metric(draws.row(s).transpose());
    return out;
}

KappaSearch KappaSearch::defaults_for(std::size_t samples) {
    return KappaSearch{std::max<std::size_t>(1, samples / 10000), 60};
}

CartesianCounter::CartesianCounter(const DrawMatrix& draws) : draws_(draws) {
    sorted_.resize(static_cast<std::size_t>(draws.cols()));
    for (Eigen::Index i = 0; i < draws.cols(); ++i) {
        auto& col = sorted_[static_cast<std::size_t>(i)];
        col.resize(static_cast<std::size_t>(draws.rows()));
        for (Eigen::Index s = 0; s < draws.rows(); ++s) col[static_cast<std::size_t>(s)] = draws(s, i);
        std::sort(col.begin(), col.end());
    }
}

void CartesianCounter::bounds(double kappa, Eigen::VectorXd& lower, Eigen::VectorXd& upper) const {
    const auto m = static_cast<Eigen::Index>(sorted_.size());
    lower.resize(m);
    upper.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& col = sorted_[static_cast<std::size_t>(i)];
        lower[i] = quantile_sorted(col, 0.5 * kappa);
        upper[i] = quantile_sorted(col, 1.0 - 0.5 * kappa);
    }
}

void CartesianCounter::inclusion_thresholds(double kappa, Eigen::VectorXd& lower,
                                            Eigen::VectorXd& upper) const {
    const auto m = static_cast<Eigen::Index>(sorted_.size());
    lower.resize(m);
    upper.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& col = sorted_[static_cast<std::size_t>(i)];
        const auto last = static_cast<double>(col.size() - 1);
        const double h_lo = last * std::clamp(0.5 * kappa, 0.0, 1.0);
        const double h_hi = last * std::clamp(1.0 - 0.5 * kappa, 0.0, 1.0);
        const double f_lo = std::floor(h_lo);
        const auto lo = std::min(col.size() - 1, static_cast<std::size_t>(h_lo > f_lo ? f_lo + 1.0 : f_lo));
        const auto hi = static_cast<std::size_t>(std::floor(h_hi));
        if (lo > hi) {
            lower[i] = std::numeric_limits<double>::infinity();
            upper[i] = -std::numeric_limits<double>::infinity();
        } else {
            lower[i] = col[lo];
            upper[i] = col[hi];
        }
    }
}

std::size_t CartesianCounter::count(double kappa) const {
    Eigen::VectorXd lower, upper;
    inclusion_thresholds(kappa, lower, upper);
    std::size_t inside = 0;
    for (Eigen::Index s = 0; s < draws_.rows(); ++s) {
        bool ok = true;
        for (Eigen::Index i = 0; i < draws_.cols() && ok; ++i) {
            const double v = draws_(s, i);
            ok = v >= lower[i] && v <= upper[i];
        }
        if (ok) ++inside;
    }
    return inside;
}

KappaResult tune_kappa(const CartesianCounter& counter, double alpha, KappaSearch search) {
    check_alpha(alpha, counter.samples());
    KappaResult best;
    best.target = target_count(counter.samples(), alpha);

    auto consider = [&](double kappa, std::size_t count) {
        if (best.iterations == 0 || distance(count, best.target) < distance(best.count, best.target)) {
            best.kappa = kappa;
            best.count = count;
        }
    };

    // K_J(kappa) is non-increasing in kappa. Start from the independence
    // guess 1 - (1 - alpha)^{1/m}, then bisect the bracket it leaves.
    double lo = 0.0;
    double hi = 1.0;
    const double initial = 1.0 - std::pow(1.0 - alpha, 1.0 / static_cast<double>(counter.dim()));
    for (std::size_t iter = 0; iter < search.max_iter; ++iter) {
        const double kappa = iter == 0 ? initial : 0.5 * (lo + hi);
        const std::size_t count = counter.count(kappa);
        consider(kappa, count);
        best.iterations = iter + 1;
        if (count == best.target) break;
        if (count > best.target) {
            lo = kappa;
        } else {
            hi = kappa;
        }
    }
    if (best.count != best.target && lo == 0.0) consider(0.0, counter.count(0.0));
    best.converged = distance(best.count, best.target) <= search.tol;
    return best;
}

KappaResult tune_kappa(const DrawMatrix& draws, double alpha, KappaSearch search) {
    return tune_kappa(CartesianCounter(draws), alpha, search);
}

CredibleSelection cartesian_select(const PosteriorDraws& draws, double alpha) {
    return cartesian_select(draws, alpha, KappaSearch::defaults_for(draws.samples()));
}

CredibleSelection cartesian_select(const PosteriorDraws& draws, double alpha, KappaSearch search) {
    const CartesianCounter counter(draws.theta);
    const KappaResult tuned = tune_kappa(counter, alpha, search);
    // continuous draws always land within m of the target
    const std::size_t granularity = std::max(search.tol, counter.dim());
    if (distance(tuned.count, tuned.target) > granularity) {
        throw NumericError("Cartesian credible set: target K = " + std::to_string(tuned.target) +
                           " unattainable, best achieved K = " + std::to_string(tuned.count));
    }
    CartesianBounds bounds;
    counter.bounds(tuned.kappa, bounds.lower, bounds.upper);
    bounds.kappa = tuned.kappa;
    bounds.converged = tuned.converged;

    Eigen::VectorXd lower, upper;
    counter.inclusion_thresholds(tuned.kappa, lower, upper);

    CredibleSelection out;
    out.alpha = alpha;
    out.geometry = Geometry::Cartesian;
    for (Eigen::Index s = 0; s < draws.theta.rows(); ++s) {
        const auto row = draws.theta.row(s);
        if ((row.transpose().array() >= lower.array()).all() && (row.transpose().array() <= upper.array()).all()) {
            out.indices.push_back(static_cast<std::size_t>(s));
        }
    }
    out.cart = std::move(bounds);
    return out;
}

CredibleSelection elliptical_select(const PosteriorDraws& draws, const Eigen::VectorXd& center,
                                    const Eigen::MatrixXd& dispersion, double alpha) {
    check_alpha(alpha);
    if (draws.samples() == 0) throw NumericError("no posterior draws");
    if (center.size() != static_cast<Eigen::Index>(draws.dim())) {
        throw NumericError("center dimension does not match the draws");
    }
    const Mahalanobis metric(center, dispersion);
    EllipticalInfo info;
    info.center = center;
    info.dispersion = dispersion;
    info.distances = mahalanobis_all(draws.theta, metric);
    info.cutoff = quantile(std::span<const double>(info.distances.data(), draws.samples()),
                           1.0 - alpha);

    CredibleSelection out;
    out.alpha = alpha;
    out.geometry = Geometry::Elliptical;
    for (Eigen::Index s = 0; s < info.distances.size(); ++s) {
        if (info.distances[s] <= info.cutoff) out.indices.push_back(static_cast<std::size_t>(s));
    }
    out.ellip = std::move(info);
    return out;
}

}  // namespace rankcred
