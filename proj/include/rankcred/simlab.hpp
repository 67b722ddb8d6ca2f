#pragma once

#include "rankcred/domain.hpp"
#include "rankcred/stats.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace rankcred {

struct SimConfig {
    std::size_t m = 18;
    std::vector<double> a_grid{0.001, 0.005, 0.01, 0.1, 1.0};
    double beta0 = 0.2;
    std::vector<double> beta1_grid{0.0, 0.4};
    std::vector<double> d;  // empty: baseball sampling variances (requires m = 18)
    std::size_t n_reps = 200;
    double alpha = 0.1;
    std::uint64_t seed = 20240501;

    // posterior sampling inside each replication
    std::size_t samples = 10000;
    std::size_t burn_in = 1000;
    std::size_t threads = 0;  // 0: hardware concurrency

    void validate() const;
    Eigen::VectorXd sampling_variances() const;
};

struct SimInstance {
    Eigen::VectorXd theta_true;
    Dataset data;
};

// theta_i ~ N(beta0 + beta1 x_i, A), Y_i ~ N(theta_i, D_i); gold = theta.
SimInstance generate_instance(const Eigen::VectorXd& x, double beta0, double beta1, double a,
                              const Eigen::VectorXd& d, Rng& rng);

struct SimRow {
    double a = 0.0;
    double beta1 = 0.0;
    std::string method;     // kww, hb, ub
    std::string geometry;   // cartesian, elliptical
    std::string weighting;  // none (kww), equal, mahal
    double avg_exp_abs_dev = 0.0;
    double vol_mth_root = 0.0;  // (mean volume)^{1/m}
    double avg_length = 0.0;
    std::size_t n_reps = 0;
};

// Covariates drawn once from Uniform(0, 1), shared by every cell.
Eigen::VectorXd simulation_covariates(const SimConfig& cfg);

// One block per (A, beta1) cell, in grid order.
std::vector<SimRow> run_study(const SimConfig& cfg);

// Only the named cell; identical to the matching rows of the full study.
std::vector<SimRow> run_cell(const SimConfig& cfg, double a, double beta1);

}  // namespace rankcred
