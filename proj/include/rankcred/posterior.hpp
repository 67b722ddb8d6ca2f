#pragma once

#include "rankcred/domain.hpp"
#include "rankcred/stats.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>

namespace rankcred {

struct HbConfig {
    std::size_t samples = 50000;
    std::size_t burn_in = 2000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;
    bool include_intercept = true;
    std::optional<double> init_a;   // defaults to mean(D)
    std::optional<double> fixed_a;  // test hook: hold A constant, skip its update

    void validate() const;
};

struct PosteriorSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;  // 1/S normalization
    std::optional<double> a_mean;
    std::optional<double> a_median;
    std::optional<Eigen::VectorXd> shrinkage;  // E[D_i / (D_i + A) | y]
};

// Regression design for the linking model theta_i ~ N(x_i' beta, A).
class HbDesign {
public:
    // Throws DataError on a rank-deficient design or when m <= q + 1.
    HbDesign(const Dataset& ds, bool include_intercept);

    const Eigen::MatrixXd& x() const { return x_; }
    std::size_t rows() const { return static_cast<std::size_t>(x_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(x_.cols()); }

    // (X'X)^{-1} X' v
    Eigen::VectorXd least_squares(const Eigen::VectorXd& v) const;
    // Draw from N(0, (X'X)^{-1}) scaled by sqrt(a).
    Eigen::VectorXd draw_coef_noise(double a, Rng& rng) const;

private:
    Eigen::MatrixXd x_;
    Eigen::LLT<Eigen::MatrixXd> xtx_;
    Eigen::MatrixXd xtx_lower_;
};

PosteriorDraws sample_ub(const Dataset& ds, std::size_t samples, std::uint64_t seed);

PosteriorDraws gibbs_hb(const Dataset& ds, const HbConfig& cfg);

// theta_i | beta, A, y  ~  N((A y_i + D_i x_i'beta)/(A + D_i), A D_i/(A + D_i))
Eigen::VectorXd cond_theta(const Dataset& ds, const HbDesign& design, const Eigen::VectorXd& beta,
                           double a, Rng& rng);
Eigen::VectorXd cond_theta(const Eigen::VectorXd& y, const Eigen::VectorXd& d,
                           const Eigen::VectorXd& fitted, double a, Rng& rng);

// beta | theta, A  ~  N((X'X)^{-1} X'theta, A (X'X)^{-1})
Eigen::VectorXd cond_beta(const HbDesign& design, const Eigen::VectorXd& theta, double a, Rng& rng);

struct RejectionStats {
    std::size_t proposals = 0;
};

// A | theta, beta: density proportional to (dbar + A)^{-1/2} A^{-m/2} exp(-sse / (2A)).
// Proposes from InverseGamma(m/2 - 1, sse/2) and accepts with sqrt(dbar / (dbar + A)).
double cond_a_rejection(double sse, std::size_t m, double dbar, Rng& rng,
                        RejectionStats* stats = nullptr);
double cond_a_rejection(const HbDesign& design, const Eigen::VectorXd& theta,
                        const Eigen::VectorXd& beta, double dbar, Rng& rng);

PosteriorSummary summarize(const PosteriorDraws& draws);
// Also fills the shrinkage factors when the draws carry an A chain.
PosteriorSummary summarize(const PosteriorDraws& draws, const Dataset& ds);

}  // namespace rankcred
