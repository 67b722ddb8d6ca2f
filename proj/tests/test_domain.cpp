#include "helpers.hpp"
#include "oracles.hpp"

#include <rankcred/domain.hpp>
#include <rankcred/error.hpp>
#include <rankcred/io.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace rankcred;

TEST_CASE("rank_of: strictly ordered input") {
    const std::vector<double> v{0.400, 0.378, 0.156};
    const auto r = rank_of(std::span<const double>(v));
    CHECK(r.ranks == std::vector<double>{3, 2, 1});
}

TEST_CASE("rank_of: tie rules") {
    const std::vector<double> v{0.222, 0.222};
    CHECK(rank_of(std::span<const double>(v), TieRule::HighestOfTies).ranks == std::vector<double>{2, 2});
    CHECK(rank_of(std::span<const double>(v), TieRule::Midrank).ranks == std::vector<double>{1.5, 1.5});

    const std::vector<double> w{1, 3, 3, 3, 0};
    CHECK(rank_of(std::span<const double>(w)).ranks == std::vector<double>{2, 4, 4, 4, 1});
    CHECK(rank_of(std::span<const double>(w), TieRule::HighestOfTies).ranks == std::vector<double>{2, 5, 5, 5, 1});
}

TEST_CASE("rank_of: batting averages give the published observed ranks") {
    const Dataset ds = baseball_dataset();
    const auto r = rank_of(ds.y());
    const std::vector<double> expected{18, 17, 16, 15, 13.5, 13.5, 12, 11, 9.5, 9.5, 6, 6, 6, 6, 6, 3, 2, 1};
    CHECK(r.ranks == expected);
    CHECK(ds[4].id == "Berry");
    CHECK(ds[5].id == "Spencer");
}

TEST_CASE("rank_of: gold ranks use midranks") {
    const Dataset ds = baseball_dataset();
    const auto r = rank_of(ds.gold());
    int halves = 0;
    for (double x : r.ranks) halves += x == 8.5;
    CHECK(halves == 2);
    CHECK(r.sum() == 171.0);
}

TEST_CASE("rank_of: matches pairwise counting and is location/scale invariant") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> z;
    std::uniform_int_distribution<int> msize(2, 30);
    std::uniform_real_distribution<double> shift(-100, 100), scale(0.01, 50);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = msize(rng);
        std::vector<double> v(m);
        for (double& x : v) x = z(rng);
        const auto r = rank_of(std::span<const double>(v));
        CHECK(r.ranks == oracle::pairwise_rank(v));

        const double a = shift(rng), b = scale(rng);
        std::vector<double> w(m);
        for (int i = 0; i < m; ++i) w[i] = b * v[i] + a;
        CHECK(rank_of(std::span<const double>(w)).ranks == r.ranks);
    }
}

TEST_CASE("rank_of: midranks match pairwise oracle and keep the sum") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> val(0, 5), msize(2, 25);
    for (int rep = 0; rep < 300; ++rep) {
        const int m = msize(rng);
        std::vector<double> v(m);
        for (double& x : v) x = val(rng);
        const auto r = rank_of(std::span<const double>(v));
        CHECK(r.ranks == oracle::pairwise_midrank(v));
        CHECK(r.sum() == m * (m + 1) / 2.0);
    }
}

TEST_CASE("Dataset validation") {
    auto ent = [](std::string id, double y, double d) {
        Entity e;
        e.id = std::move(id);
        e.y = y;
        e.d = d;
        return e;
    };
    CHECK_THROWS_AS(Dataset({ent("a", 0, 1)}), DataError);
    CHECK_THROWS_AS(Dataset({ent("a", 0, 1), ent("a", 1, 1)}), DataError);
    CHECK_THROWS_AS(Dataset({ent("a", 0, 1), ent("b", 1, 0)}), DataError);
    CHECK_THROWS_AS(Dataset({ent("a", 0, 1), ent("b", 1, -1)}), DataError);
    CHECK_THROWS_AS(Dataset({ent("a", std::numeric_limits<double>::quiet_NaN(), 1), ent("b", 1, 1)}), DataError);
    CHECK_THROWS_AS(Dataset({ent("a", std::numeric_limits<double>::infinity(), 1), ent("b", 1, 1)}), DataError);

    auto g = ent("a", 0, 1);
    g.gold = 0.5;
    CHECK_THROWS_AS(Dataset({g, ent("b", 1, 1)}), DataError);

    auto x1 = ent("a", 0, 1), x2 = ent("b", 1, 1);
    x1.x = {1.0};
    CHECK_THROWS_AS(Dataset({x1, x2}), DataError);
    x2.x = {std::numeric_limits<double>::quiet_NaN()};
    CHECK_THROWS_AS(Dataset({x1, x2}), DataError);
    x2.x = {2.0};
    const Dataset ok({x1, x2});
    CHECK(ok.covariate_dim() == 1);
    CHECK(ok.covariates()(1, 0) == 2.0);
    CHECK(!ok.has_gold());
    CHECK_THROWS_AS(ok.gold(), DataError);
    CHECK(ok.mean_d() == 1.0);
}

TEST_CASE("enum names") {
    CHECK(to_string(Model::UB) == "ub");
    CHECK(to_string(Model::HB) == "hb");
    CHECK(to_string(Geometry::Cartesian) == "cartesian");
    CHECK(to_string(Geometry::Elliptical) == "elliptical");
    CHECK(to_string(Weighting::Equal) == "equal");
    CHECK(to_string(Weighting::MahalanobisExp) == "mahal");
    CHECK(to_string(KwwMethod::Bonferroni) == "bonferroni");
    CHECK(to_string(KwwMethod::Independence) == "independence");
}
