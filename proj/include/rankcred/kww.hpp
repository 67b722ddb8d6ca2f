#pragma once

#include "rankcred/domain.hpp"

#include <cstddef>
#include <vector>

namespace rankcred {

// Per-interval level gamma giving joint level 1 - alpha over m intervals.
double gamma_from_alpha(double alpha, std::size_t m, KwwMethod method);

// I_i = (y_i - z_{1-gamma/2} sqrt(D_i), y_i + z_{1-gamma/2} sqrt(D_i))
std::vector<Interval> kww_intervals(const Dataset& ds, double gamma);

// Λ_L = {j != i : U_j <= L_i}, Λ_R = {j != i : U_i <= L_j}, Λ_O the rest.
std::vector<LambdaCounts> lambda_sets(const std::vector<Interval>& intervals);

// Member lists behind the counts, entity indices ascending.
struct LambdaMembers {
    std::vector<std::size_t> left, right, overlap;
};
std::vector<LambdaMembers> lambda_members(const std::vector<Interval>& intervals);

KwwRankSet rank_confidence_set(const Dataset& ds, double alpha, KwwMethod method = KwwMethod::Independence);
KwwRankSet rank_confidence_set(const std::vector<Interval>& intervals, double gamma, KwwMethod method);

}  // namespace rankcred
