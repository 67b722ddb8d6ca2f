#include "rankcred/metrics.hpp"

#include "rankcred/error.hpp"
#include "rankcred/stats.hpp"

#include <Eigen/Cholesky>

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <limits>

namespace rankcred {

namespace {

Eigen::LLT<Eigen::MatrixXd> factor_spd(const Eigen::MatrixXd& k) {
    if (k.rows() != k.cols() || k.rows() == 0) throw NumericError("matrix must be square and non-empty");
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success || !(llt.matrixLLT().diagonal().array() > 0.0).all()) {
        throw NumericError("matrix is not positive definite");
    }
    return llt;
}

double log_unit_ball(double m) {
    return 0.5 * m * std::log(boost::math::constants::pi<double>()) - std::lgamma(0.5 * m + 1.0);
}

double ellipse_log_volume_from_logdet(double log_det_k, double m, double c) {
    return log_unit_ball(m) + 0.5 * m * std::log(c) - 0.5 * log_det_k;
}

}  // namespace

SizeReport orthotope_size(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    if (lower.size() != upper.size() || lower.size() == 0) {
        throw NumericError("orthotope bounds must be non-empty and of equal length");
    }
    SizeReport out;
    out.geometry = Geometry::Cartesian;
    out.per_side_lengths = upper - lower;
    if ((out.per_side_lengths.array() < 0.0).any()) throw NumericError("orthotope side with U < L");
    const auto m = static_cast<double>(lower.size());
    out.avg_length = out.per_side_lengths.mean();
    if ((out.per_side_lengths.array() == 0.0).any()) {
        out.log_volume = -std::numeric_limits<double>::infinity();
        out.volume = 0.0;
        out.volume_mth_root = 0.0;
    } else {
        out.log_volume = out.per_side_lengths.array().log().sum();
        out.volume = std::exp(out.log_volume);
        out.volume_mth_root = std::exp(out.log_volume / m);
    }
    return out;
}

SizeReport orthotope_size(const std::vector<Interval>& bounds) {
    Eigen::VectorXd lower(static_cast<Eigen::Index>(bounds.size()));
    Eigen::VectorXd upper(lower.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        lower[static_cast<Eigen::Index>(i)] = bounds[i].lower;
        upper[static_cast<Eigen::Index>(i)] = bounds[i].upper;
    }
    return orthotope_size(lower, upper);
}

double ellipse_log_volume(const Eigen::MatrixXd& k, double c) {
    if (!(c > 0.0)) throw NumericError("ellipse cutoff must be > 0");
    const auto llt = factor_spd(k);
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    return ellipse_log_volume_from_logdet(log_det, static_cast<double>(k.rows()), c);
}

double ellipse_volume(const Eigen::MatrixXd& k, double c) { return std::exp(ellipse_log_volume(k, c)); }

EllipseLengths ellipse_lengths(const Eigen::MatrixXd& k, double c) {
    const double log_vol = ellipse_log_volume(k, c);
    const auto m = static_cast<double>(k.rows());
    const double lb = log_beta(0.5, 0.5 * (m + 1.0));

    EllipseLengths out;
    Eigen::VectorXd log_rep(k.rows());
    for (Eigen::Index i = 0; i < k.rows(); ++i) log_rep[i] = lb + 0.5 * (std::log(c) - std::log(k(i, i)));
    const double log_scale = (log_vol - log_rep.sum()) / m;
    out.representative = log_rep.array().exp();
    out.calibrated = (log_rep.array() + log_scale).exp();
    out.average = out.calibrated.mean();
    return out;
}

SizeReport ellipse_size_from_dispersion(const Eigen::MatrixXd& dispersion, double c) {
    const auto llt = factor_spd(dispersion);
    const Eigen::MatrixXd k = llt.solve(Eigen::MatrixXd::Identity(dispersion.rows(), dispersion.cols()));
    const Eigen::MatrixXd k_sym = 0.5 * (k + k.transpose());
    const EllipseLengths lengths = ellipse_lengths(k_sym, c);
    const double log_det_v = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    const auto m = static_cast<double>(dispersion.rows());

    SizeReport out;
    out.geometry = Geometry::Elliptical;
    out.log_volume = ellipse_log_volume_from_logdet(-log_det_v, m, c);
    out.volume = std::exp(out.log_volume);
    out.volume_mth_root = std::exp(out.log_volume / m);
    out.avg_length = lengths.average;
    out.per_side_lengths = lengths.calibrated;
    return out;
}

double expected_abs_deviation(const Eigen::VectorXd& marginal, double xi) {
    double total = 0.0;
    for (Eigen::Index k = 0; k < marginal.size(); ++k) {
        total += std::abs(static_cast<double>(k + 1) - xi) * marginal[k];
    }
    return total;
}

double kww_abs_deviation(std::size_t rank_lo, std::size_t rank_hi, double xi) {
    if (rank_lo > rank_hi) throw NumericError("rank range with lo > hi");
    double total = 0.0;
    for (std::size_t j = rank_lo; j <= rank_hi; ++j) total += std::abs(static_cast<double>(j) - xi);
    return total / static_cast<double>(rank_hi - rank_lo + 1);
}

double tese(const Eigen::VectorXd& estimates, const Eigen::VectorXd& gold) {
    if (estimates.size() != gold.size()) throw NumericError("TESE: length mismatch");
    return (estimates - gold).squaredNorm();
}

}  // namespace rankcred
