#include "rankcred/kww.hpp"

#include "rankcred/error.hpp"
#include "rankcred/stats.hpp"

#include <cmath>
#include <string>

namespace rankcred {

double gamma_from_alpha(double alpha, std::size_t m, KwwMethod method) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw NumericError("alpha must lie in (0, 1)");
    if (m < 1) throw NumericError("m must be >= 1");
    const auto md = static_cast<double>(m);
    if (method == KwwMethod::Bonferroni) return alpha / md;
    // 1 - (1-alpha)^{1/m}, written to keep precision for small alpha
    return -std::expm1(std::log1p(-alpha) / md);
}

std::vector<Interval> kww_intervals(const Dataset& ds, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw NumericError("gamma must lie in (0, 1)");
    const double z = normal_quantile(1.0 - 0.5 * gamma);
    std::vector<Interval> out;
    out.reserve(ds.size());
    for (const Entity& e : ds.entities()) {
        const double half = z * std::sqrt(e.d);
        out.push_back({e.y - half, e.y + half});
    }
    return out;
}

std::vector<LambdaMembers> lambda_members(const std::vector<Interval>& intervals) {
    const std::size_t m = intervals.size();
    std::vector<LambdaMembers> out(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            if (intervals[j].upper <= intervals[i].lower) {
                out[i].left.push_back(j);
            } else if (intervals[i].upper <= intervals[j].lower) {
                out[i].right.push_back(j);
            } else {
                out[i].overlap.push_back(j);
            }
        }
    }
    return out;
}

std::vector<LambdaCounts> lambda_sets(const std::vector<Interval>& intervals) {
    std::vector<LambdaCounts> out;
    for (const LambdaMembers& mem : lambda_members(intervals)) {
        out.push_back({mem.left.size(), mem.right.size(), mem.overlap.size()});
    }
    return out;
}

KwwRankSet rank_confidence_set(const std::vector<Interval>& intervals, double gamma, KwwMethod method) {
    KwwRankSet out;
    out.intervals = intervals;
    out.gamma = gamma;
    out.method = method;
    out.lambda_counts = lambda_sets(intervals);
    for (const LambdaCounts& c : out.lambda_counts) {
        out.rank_lo.push_back(c.left + 1);
        out.rank_hi.push_back(c.left + c.overlap + 1);
    }
    return out;
}

KwwRankSet rank_confidence_set(const Dataset& ds, double alpha, KwwMethod method) {
    const double gamma = gamma_from_alpha(alpha, ds.size(), method);
    return rank_confidence_set(kww_intervals(ds, gamma), gamma, method);
}

}  // namespace rankcred
