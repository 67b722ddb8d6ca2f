#pragma once

#include "rankcred/domain.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>

namespace rankcred {

// Cholesky-backed Mahalanobis distance (x - center)' dispersion^{-1} (x - center).
// A failed factorization is retried once with 1e-10 * mean(diag) added to the diagonal.
class Mahalanobis {
public:
    Mahalanobis(Eigen::VectorXd center, const Eigen::MatrixXd& dispersion);

    double operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    const Eigen::VectorXd& center() const { return center_; }
    // log det(dispersion) of the factor actually used
    double log_det() const;

private:
    Eigen::VectorXd center_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

double mahalanobis(const Eigen::VectorXd& theta, const Eigen::VectorXd& center,
                   const Eigen::MatrixXd& dispersion);

// Distances of every draw from the center.
Eigen::VectorXd mahalanobis_all(const DrawMatrix& draws, const Mahalanobis& metric);

struct KappaSearch {
    std::size_t tol = 1;
    std::size_t max_iter = 60;

    // tol = max(1, S/10000), max_iter = 60
    static KappaSearch defaults_for(std::size_t samples);
};

struct KappaResult {
    double kappa = 0.0;
    std::size_t count = 0;   // K_J at kappa
    std::size_t target = 0;  // round(S (1 - alpha))
    bool converged = false;  // |count - target| <= tol
    std::size_t iterations = 0;
};

// Per-coordinate sorted draws plus the joint-inclusion counter K_J(kappa).
// Keeps a reference to the draws, which must outlive the counter.
class CartesianCounter {
public:
    explicit CartesianCounter(const DrawMatrix& draws);

    std::size_t samples() const { return static_cast<std::size_t>(draws_.rows()); }
    std::size_t dim() const { return sorted_.size(); }
    // Type-7 quantile bounds at kappa/2 and 1 - kappa/2.
    void bounds(double kappa, Eigen::VectorXd& lower, Eigen::VectorXd& upper) const;
    // The extreme order statistics lying inside those bounds, located from the
    // interpolation position so the inclusion test never depends on rounding of
    // the interpolated value. A draw is inside iff lower <= v <= upper here.
    void inclusion_thresholds(double kappa, Eigen::VectorXd& lower, Eigen::VectorXd& upper) const;
    std::size_t count(double kappa) const;

private:
    const DrawMatrix& draws_;
    std::vector<std::vector<double>> sorted_;
};

KappaResult tune_kappa(const DrawMatrix& draws, double alpha, KappaSearch search);
KappaResult tune_kappa(const CartesianCounter& counter, double alpha, KappaSearch search);

CredibleSelection cartesian_select(const PosteriorDraws& draws, double alpha);
CredibleSelection cartesian_select(const PosteriorDraws& draws, double alpha, KappaSearch search);

CredibleSelection elliptical_select(const PosteriorDraws& draws, const Eigen::VectorXd& center,
                                    const Eigen::MatrixXd& dispersion, double alpha);

}  // namespace rankcred
