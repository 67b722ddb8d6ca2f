#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rankcred {

// Row-major so a single posterior draw is a contiguous row.
using DrawMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Model { UB, HB };
enum class Geometry { Cartesian, Elliptical };
enum class Weighting { Equal, MahalanobisExp };
enum class TieRule { Midrank, HighestOfTies };
enum class KwwMethod { Bonferroni, Independence };

std::string to_string(Model model);
std::string to_string(Geometry geometry);
std::string to_string(Weighting weighting);
std::string to_string(KwwMethod method);

struct Entity {
    std::string id;
    double y = 0.0;           // direct estimate
    double d = 0.0;           // known sampling variance
    std::vector<double> x;    // covariates (without intercept)
    std::optional<double> gold;
};

// Validated, immutable collection of entities.
class Dataset {
public:
    // Throws DataError when an invariant is violated.
    explicit Dataset(std::vector<Entity> entities);

    std::size_t size() const { return entities_.size(); }
    std::size_t covariate_dim() const { return p_; }
    bool has_gold() const { return has_gold_; }

    const std::vector<Entity>& entities() const { return entities_; }
    const Entity& operator[](std::size_t i) const { return entities_[i]; }

    Eigen::VectorXd y() const;
    Eigen::VectorXd d() const;
    Eigen::VectorXd gold() const;  // throws DataError if absent
    Eigen::MatrixXd covariates() const;  // m x p
    double mean_d() const;

private:
    std::vector<Entity> entities_;
    std::size_t p_ = 0;
    bool has_gold_ = false;
};

// Ascending ranks, 1-based. Midranks keep the sum at m(m+1)/2.
struct RankVector {
    std::vector<double> ranks;

    std::size_t size() const { return ranks.size(); }
    double operator[](std::size_t i) const { return ranks[i]; }
    double sum() const;
};

RankVector rank_of(std::span<const double> values, TieRule rule = TieRule::Midrank);
RankVector rank_of(const Eigen::VectorXd& values, TieRule rule = TieRule::Midrank);

struct PosteriorDraws {
    DrawMatrix theta;  // S x m
    Model model = Model::UB;
    std::optional<DrawMatrix> beta;        // S x q, HB only
    std::optional<Eigen::VectorXd> a;      // S, HB only
    std::uint64_t seed = 0;
    std::size_t burn_in = 0;
    std::size_t thin = 1;

    std::size_t samples() const { return static_cast<std::size_t>(theta.rows()); }
    std::size_t dim() const { return static_cast<std::size_t>(theta.cols()); }
};

struct CartesianBounds {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    double kappa = 0.0;
    bool converged = true;
};

struct EllipticalInfo {
    Eigen::VectorXd center;
    Eigen::MatrixXd dispersion;
    double cutoff = 0.0;
    Eigen::VectorXd distances;  // one per draw, all S of them
};

struct CredibleSelection {
    std::vector<std::size_t> indices;  // ascending draw indices
    double alpha = 0.1;
    Geometry geometry = Geometry::Cartesian;
    std::optional<CartesianBounds> cart;
    std::optional<EllipticalInfo> ellip;

    std::size_t size() const { return indices.size(); }
};

// probs(k, i): credible probability that entity i holds rank k + 1.
struct RankCredibleDistribution {
    Eigen::MatrixXd probs;
    Weighting weighting = Weighting::Equal;
    Model model = Model::UB;
    Geometry geometry = Geometry::Cartesian;

    std::size_t dim() const { return static_cast<std::size_t>(probs.cols()); }
};

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct LambdaCounts {
    std::size_t left = 0;     // |Λ_L|: intervals entirely below
    std::size_t right = 0;    // |Λ_R|: intervals entirely above
    std::size_t overlap = 0;  // |Λ_O|
};

struct KwwRankSet {
    std::vector<Interval> intervals;
    double gamma = 0.0;
    KwwMethod method = KwwMethod::Independence;
    std::vector<LambdaCounts> lambda_counts;
    std::vector<std::size_t> rank_lo;
    std::vector<std::size_t> rank_hi;
};

}  // namespace rankcred
