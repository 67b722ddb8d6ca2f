#pragma once

#include <rankcred/domain.hpp>

#include <random>
#include <string>
#include <vector>

namespace testutil {

inline rankcred::Dataset make_dataset(const std::vector<double>& y, const std::vector<double>& d) {
    std::vector<rankcred::Entity> es;
    for (std::size_t i = 0; i < y.size(); ++i) {
        rankcred::Entity e;
        e.id = "e" + std::to_string(i + 1);
        e.y = y[i];
        e.d = d[i];
        es.push_back(e);
    }
    return rankcred::Dataset(std::move(es));
}

inline rankcred::PosteriorDraws make_draws(const rankcred::DrawMatrix& theta) {
    rankcred::PosteriorDraws out;
    out.theta = theta;
    return out;
}

inline rankcred::DrawMatrix normal_draws(std::size_t s, std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> z;
    rankcred::DrawMatrix t(s, m);
    for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < m; ++c) t(r, c) = z(rng);
    return t;
}

inline std::vector<double> column(const rankcred::DrawMatrix& t, std::size_t c) {
    std::vector<double> out(static_cast<std::size_t>(t.rows()));
    for (std::size_t r = 0; r < out.size(); ++r) out[r] = t(r, c);
    return out;
}

}  // namespace testutil
