#include "rankcred/rankdist.hpp"

#include "rankcred/credset.hpp"
#include "rankcred/error.hpp"
#include "rankcred/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace rankcred {

MahalContext default_mahal_context(const PosteriorDraws& draws, const Dataset& ds) {
    if (draws.model == Model::UB) {
        return MahalContext{ds.y(), ds.d().asDiagonal()};
    }
    PosteriorSummary summary = summarize(draws);
    return MahalContext{std::move(summary.mean), std::move(summary.cov)};
}

void accumulate_rank_table(const Eigen::Ref<const Eigen::VectorXd>& theta, double weight,
                           Eigen::MatrixXd& acc) {
    const auto m = static_cast<std::size_t>(theta.size());
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return theta[static_cast<Eigen::Index>(a)] < theta[static_cast<Eigen::Index>(b)];
    });
    std::size_t start = 0;
    while (start < m) {
        std::size_t end = start + 1;
        while (end < m && theta[static_cast<Eigen::Index>(order[end])] ==
                              theta[static_cast<Eigen::Index>(order[start])]) {
            ++end;
        }
        if (end - start == 1) {
            acc(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(order[start])) += weight;
        } else {
            const double share = weight / static_cast<double>(end - start);
            for (std::size_t a = start; a < end; ++a) {
                for (std::size_t r = start; r < end; ++r) {
                    acc(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(order[a])) += share;
                }
            }
        }
        start = end;
    }
}

Eigen::MatrixXd rank_table(const Eigen::Ref<const Eigen::VectorXd>& theta) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(theta.size(), theta.size());
    accumulate_rank_table(theta, 1.0, out);
    return out;
}

RankCredibleDistribution build_distribution(const CredibleSelection& selection,
                                            const PosteriorDraws& draws, Weighting weighting,
                                            const std::optional<MahalContext>& context) {
    if (selection.indices.empty()) throw NumericError("credible selection is empty");
    const std::size_t k = selection.size();
    const auto m = static_cast<Eigen::Index>(draws.dim());

    std::vector<double> weights(k, 1.0 / static_cast<double>(k));
    if (weighting == Weighting::MahalanobisExp) {
        std::vector<double> dist(k);
        if (selection.ellip && !context) {
            for (std::size_t j = 0; j < k; ++j) {
                dist[j] = selection.ellip->distances[static_cast<Eigen::Index>(selection.indices[j])];
            }
        } else {
            if (!context) {
                throw NumericError("Mahalanobis weighting of a Cartesian selection needs a center and dispersion");
            }
            const Mahalanobis metric(context->center, context->dispersion);
            for (std::size_t j = 0; j < k; ++j) {
                dist[j] = metric(draws.theta.row(static_cast<Eigen::Index>(selection.indices[j])).transpose());
            }
        }
        // exp(-d/2) relative to the nearest draw, so the largest weight is 1
        const double d_min = *std::min_element(dist.begin(), dist.end());
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            weights[j] = std::exp(-0.5 * (dist[j] - d_min));
            total += weights[j];
        }
        for (double& w : weights) w /= total;
    }

    RankCredibleDistribution out;
    out.probs = Eigen::MatrixXd::Zero(m, m);
    out.weighting = weighting;
    out.model = draws.model;
    out.geometry = selection.geometry;
    for (std::size_t j = 0; j < k; ++j) {
        accumulate_rank_table(draws.theta.row(static_cast<Eigen::Index>(selection.indices[j])).transpose(),
                              weights[j], out.probs);
    }
    return out;
}

Eigen::VectorXd rank_marginal(const RankCredibleDistribution& dist, std::size_t entity) {
    if (entity >= dist.dim()) {
        throw NumericError("entity index " + std::to_string(entity) + " out of range");
    }
    return dist.probs.col(static_cast<Eigen::Index>(entity));
}

double expected_rank(const RankCredibleDistribution& dist, std::size_t entity) {
    const Eigen::VectorXd col = rank_marginal(dist, entity);
    double total = 0.0;
    for (Eigen::Index r = 0; r < col.size(); ++r) total += static_cast<double>(r + 1) * col[r];
    return total;
}

Eigen::VectorXd expected_ranks(const RankCredibleDistribution& dist) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(dist.dim()));
    for (std::size_t i = 0; i < dist.dim(); ++i) out[static_cast<Eigen::Index>(i)] = expected_rank(dist, i);
    return out;
}

std::size_t marginal_quantile(const Eigen::VectorXd& marginal, double q) {
    double cum = 0.0;
    for (Eigen::Index r = 0; r < marginal.size(); ++r) {
        cum += marginal[r];
        // small slack so a cumulative sum of exactly q is not missed by rounding
        if (cum >= q - 1e-12) return static_cast<std::size_t>(r + 1);
    }
    return static_cast<std::size_t>(marginal.size());
}

}  // namespace rankcred
