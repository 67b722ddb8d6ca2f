#pragma once

#include "rankcred/domain.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <optional>

namespace rankcred {

// Center and dispersion used for Mahalanobis-exponential weights.
struct MahalContext {
    Eigen::VectorXd center;
    Eigen::MatrixXd dispersion;
};

// (y, diag(D)) for UB draws, (posterior mean, posterior covariance) for HB draws.
MahalContext default_mahal_context(const PosteriorDraws& draws, const Dataset& ds);

// m x m table for one draw; row k is rank k + 1, column i is entity i.
// A tie group of size g spanning ranks j..j+g-1 receives 1/g in each of its g x g cells.
Eigen::MatrixXd rank_table(const Eigen::Ref<const Eigen::VectorXd>& theta);

// Adds weight * rank_table(theta) into acc without materializing the table.
void accumulate_rank_table(const Eigen::Ref<const Eigen::VectorXd>& theta, double weight,
                           Eigen::MatrixXd& acc);

RankCredibleDistribution build_distribution(const CredibleSelection& selection,
                                            const PosteriorDraws& draws, Weighting weighting,
                                            const std::optional<MahalContext>& context = std::nullopt);

Eigen::VectorXd rank_marginal(const RankCredibleDistribution& dist, std::size_t entity);
double expected_rank(const RankCredibleDistribution& dist, std::size_t entity);
Eigen::VectorXd expected_ranks(const RankCredibleDistribution& dist);

// Smallest rank k with P(rank <= k) >= q.
std::size_t marginal_quantile(const Eigen::VectorXd& marginal, double q);

}  // namespace rankcred
