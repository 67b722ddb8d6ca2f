#include "rankcred/domain.hpp"

#include "rankcred/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

namespace rankcred {

std::string to_string(Model model) { return model == Model::UB ? "ub" : "hb"; }

std::string to_string(Geometry geometry) {
    return geometry == Geometry::Cartesian ? "cartesian" : "elliptical";
}

std::string to_string(Weighting weighting) {
    return weighting == Weighting::Equal ? "equal" : "mahal";
}

std::string to_string(KwwMethod method) {
    return method == KwwMethod::Bonferroni ? "bonferroni" : "independence";
}

Dataset::Dataset(std::vector<Entity> entities) : entities_(std::move(entities)) {
    if (entities_.size() < 2) {
        throw DataError("dataset needs at least 2 entities, got " +
                        std::to_string(entities_.size()));
    }
    p_ = entities_.front().x.size();
    has_gold_ = entities_.front().gold.has_value();

    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < entities_.size(); ++i) {
        const Entity& e = entities_[i];
        const std::string where = "entity " + std::to_string(i + 1) + " ('" + e.id + "')";
        if (!seen.insert(e.id).second) throw DataError("duplicate id at " + where);
        if (!std::isfinite(e.y)) throw DataError("non-finite y at " + where);
        if (!std::isfinite(e.d) || e.d <= 0.0) throw DataError("d must be finite and > 0 at " + where);
        if (e.x.size() != p_) throw DataError("covariate length mismatch at " + where);
        for (double v : e.x) {
            if (!std::isfinite(v)) throw DataError("non-finite covariate at " + where);
        }
        if (e.gold.has_value() != has_gold_) {
            throw DataError("gold must be present for every entity or none (" + where + ")");
        }
        if (has_gold_ && !std::isfinite(*e.gold)) throw DataError("non-finite gold at " + where);
    }
}

Eigen::VectorXd Dataset::y() const {
    Eigen::VectorXd out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = entities_[i].y;
    return out;
}

Eigen::VectorXd Dataset::d() const {
    Eigen::VectorXd out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = entities_[i].d;
    return out;
}

Eigen::VectorXd Dataset::gold() const {
    if (!has_gold_) throw DataError("dataset has no gold-standard values");
    Eigen::VectorXd out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = *entities_[i].gold;
    return out;
}

Eigen::MatrixXd Dataset::covariates() const {
    Eigen::MatrixXd out(size(), p_);
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < p_; ++j) out(i, j) = entities_[i].x[j];
    }
    return out;
}

double Dataset::mean_d() const { return d().mean(); }

double RankVector::sum() const { return std::accumulate(ranks.begin(), ranks.end(), 0.0); }

RankVector rank_of(std::span<const double> values, TieRule rule) {
    const std::size_t m = values.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    RankVector out;
    out.ranks.assign(m, 0.0);
    std::size_t start = 0;
    while (start < m) {
        std::size_t end = start + 1;
        while (end < m && values[order[end]] == values[order[start]]) ++end;
        // positions start..end-1 (0-based) hold ranks start+1..end
        const double rank = rule == TieRule::Midrank
                                ? 0.5 * static_cast<double>(start + 1 + end)
                                : static_cast<double>(end);
        for (std::size_t k = start; k < end; ++k) out.ranks[order[k]] = rank;
        start = end;
    }
    return out;
}

RankVector rank_of(const Eigen::VectorXd& values, TieRule rule) {
    return rank_of(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())),
                   rule);
}

}  // namespace rankcred
