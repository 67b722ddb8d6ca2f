#include "rankcred/stats.hpp"

#include "rankcred/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace rankcred {

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * path.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    for (std::uint64_t v : path) push(v);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw NumericError("normal quantile needs 0 < q < 1, got " + std::to_string(q));
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), q);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw NumericError("quantile of empty sample");
    p = std::clamp(p, 0.0, 1.0);
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::span<const double> values, double p) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, p);
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

}  // namespace rankcred
