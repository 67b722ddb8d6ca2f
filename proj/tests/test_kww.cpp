#include "helpers.hpp"
#include "oracles.hpp"

#include <rankcred/io.hpp>
#include <rankcred/kww.hpp>

#include <doctest.h>

#include <cmath>

using namespace rankcred;
using testutil::make_dataset;

TEST_CASE("gamma_from_alpha") {
    CHECK(gamma_from_alpha(0.1, 1, KwwMethod::Bonferroni) == doctest::Approx(0.1));
    CHECK(gamma_from_alpha(0.1, 1, KwwMethod::Independence) == doctest::Approx(0.1).epsilon(1e-14));
    const double gi = gamma_from_alpha(0.1, 18, KwwMethod::Independence);
    const double gb = gamma_from_alpha(0.1, 18, KwwMethod::Bonferroni);
    CHECK(gi == doctest::Approx(0.005837).epsilon(1e-3));
    CHECK(gb == doctest::Approx(0.1 / 18));
    CHECK(gb < gi);
    CHECK(oracle::normal_quantile(1 - gi / 2) == doctest::Approx(2.76).epsilon(1e-3));
    for (std::size_t m : {2u, 5u, 50u, 500u}) {
        for (double a : {0.01, 0.1, 0.5}) {
            CHECK(gamma_from_alpha(a, m, KwwMethod::Bonferroni) < gamma_from_alpha(a, m, KwwMethod::Independence));
        }
    }
}

TEST_CASE("kww_intervals") {
    const Dataset ds = make_dataset({0.0, 1.0}, {1.0, 2.0});
    const auto iv = kww_intervals(ds, 0.1);
    CHECK(iv[0].lower == doctest::Approx(-1.6448536269514722).epsilon(1e-12));
    CHECK(iv[0].upper == doctest::Approx(1.6448536269514722).epsilon(1e-12));
    const double w0 = iv[0].upper - iv[0].lower, w1 = iv[1].upper - iv[1].lower;
    CHECK(w1 / w0 == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(iv[1].lower < 1.0);
    CHECK(iv[1].upper > 1.0);
    const auto narrow = kww_intervals(ds, 1 - 1e-12);
    CHECK(narrow[0].upper - narrow[0].lower < 1e-10);
}

TEST_CASE("lambda_sets: overlapping and disjoint patterns") {
    const std::vector<Interval> overlap{{0, 2}, {1, 3}, {1.5, 4}, {0.5, 1.7}};
    for (const auto& c : lambda_sets(overlap)) {
        CHECK(c.left == 0);
        CHECK(c.right == 0);
        CHECK(c.overlap == 3);
    }
    const std::vector<Interval> disjoint{{0, 1}, {1, 2}, {2.5, 3}, {4, 5}};
    const auto cs = lambda_sets(disjoint);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(cs[i].left == i);
        CHECK(cs[i].overlap == 0);
        CHECK(cs[i].right == 3 - i);
    }
    const auto mem = lambda_members(disjoint);
    CHECK(mem[2].left == std::vector<std::size_t>{0, 1});
    CHECK(mem[2].right == std::vector<std::size_t>{3});
}

TEST_CASE("rank_confidence_set: small examples") {
    {
        const auto set = rank_confidence_set(std::vector<Interval>{{0, 1}, {2, 3}}, 0.1, KwwMethod::Independence);
        CHECK(set.rank_lo == std::vector<std::size_t>{1, 2});
        CHECK(set.rank_hi == std::vector<std::size_t>{1, 2});
    }
    {
        const auto set =
            rank_confidence_set(std::vector<Interval>{{-10, -9}, {0, 2}, {1, 3}}, 0.1, KwwMethod::Independence);
        CHECK(set.rank_lo == std::vector<std::size_t>{1, 2, 2});
        CHECK(set.rank_hi == std::vector<std::size_t>{1, 3, 3});
    }
}

TEST_CASE("rank_confidence_set: batting averages are unranked") {
    const Dataset ds = baseball_dataset();
    const auto set = rank_confidence_set(ds, 0.1);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(set.lambda_counts[i].left == 0);
        CHECK(set.rank_lo[i] == 1);
        CHECK(set.rank_hi[i] == 18);
    }
}

TEST_CASE("rank_confidence_set: partition, containment and monotonicity on random data") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> msize(2, 30);
    std::uniform_real_distribution<double> dv(0.01, 1.0);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = msize(rng);
        std::vector<double> y(m), d(m);
        for (int i = 0; i < m; ++i) {
            y[i] = 3 * z(rng);
            d[i] = dv(rng);
        }
        const Dataset ds = make_dataset(y, d);
        const auto obs = rank_of(ds.y());
        std::vector<std::size_t> prev_lo, prev_hi;
        for (double alpha : {0.5, 0.2, 0.1, 0.01}) {
            const auto set = rank_confidence_set(ds, alpha);
            for (int i = 0; i < m; ++i) {
                const auto& c = set.lambda_counts[i];
                CHECK(c.left + c.right + c.overlap == static_cast<std::size_t>(m - 1));
                CHECK(set.rank_lo[i] >= 1);
                CHECK(set.rank_lo[i] <= set.rank_hi[i]);
                CHECK(set.rank_hi[i] <= static_cast<std::size_t>(m));
                const double r = std::ceil(obs[i]);
                CHECK(r >= set.rank_lo[i]);
                CHECK(r <= set.rank_hi[i]);
                if (!prev_lo.empty()) {
                    CHECK(set.rank_lo[i] <= prev_lo[i]);
                    CHECK(set.rank_hi[i] >= prev_hi[i]);
                }
            }
            prev_lo = set.rank_lo;
            prev_hi = set.rank_hi;
        }
    }
}

TEST_CASE("rank_confidence_set: every rank vector from the box is covered") {
    std::mt19937_64 rng(32);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> msize(2, 4);
    for (int rep = 0; rep < 40; ++rep) {
        const int m = msize(rng);
        std::vector<Interval> iv(m);
        for (auto& v : iv) {
            const double c = 2 * z(rng), h = std::abs(z(rng)) + 0.05;
            v = {c - h, c + h};
        }
        const auto set = rank_confidence_set(iv, 0.1, KwwMethod::Independence);
        const int n = 12;
        std::vector<int> idx(m, 0);
        while (true) {
            std::vector<double> th(m);
            for (int i = 0; i < m; ++i) th[i] = iv[i].lower + (iv[i].upper - iv[i].lower) * idx[i] / (n - 1.0);
            const auto r = oracle::pairwise_midrank(th);
            const auto hi_r = oracle::pairwise_rank(th);
            for (int i = 0; i < m; ++i) {
                CHECK(std::floor(r[i]) >= set.rank_lo[i]);
                CHECK(hi_r[i] <= set.rank_hi[i]);
            }
            int k = 0;
            while (k < m && ++idx[k] == n) idx[k++] = 0;
            if (k == m) break;
        }
    }
}
