#pragma once

#include "rankcred/domain.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace rankcred {

struct SizeReport {
    Geometry geometry = Geometry::Cartesian;
    double volume = 0.0;
    double log_volume = 0.0;     // -inf for a degenerate set
    double volume_mth_root = 0.0;
    double avg_length = 0.0;
    Eigen::VectorXd per_side_lengths;
};

SizeReport orthotope_size(const std::vector<Interval>& bounds);
SizeReport orthotope_size(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

// Lebesgue volume of {x : x' K x <= c}.
double ellipse_log_volume(const Eigen::MatrixXd& k, double c);
double ellipse_volume(const Eigen::MatrixXd& k, double c);

struct EllipseLengths {
    Eigen::VectorXd representative;  // L_R
    Eigen::VectorXd calibrated;      // L_M, product equals the volume
    double average = 0.0;            // mean of L_M
};

EllipseLengths ellipse_lengths(const Eigen::MatrixXd& k, double c);

// Size of {x : (x - center)' dispersion^{-1} (x - center) <= c}, i.e. K = dispersion^{-1}.
SizeReport ellipse_size_from_dispersion(const Eigen::MatrixXd& dispersion, double c);

// sum_k |k - xi| p_k over ranks k = 1..m
double expected_abs_deviation(const Eigen::VectorXd& marginal, double xi);

// Mean of |j - xi| over j = rank_lo..rank_hi.
double kww_abs_deviation(std::size_t rank_lo, std::size_t rank_hi, double xi);

// Total empirical squared error.
double tese(const Eigen::VectorXd& estimates, const Eigen::VectorXd& gold);

}  // namespace rankcred
