#include "helpers.hpp"
#include "oracles.hpp"

#include <rankcred/credset.hpp>
#include <rankcred/error.hpp>
#include <rankcred/io.hpp>
#include <rankcred/posterior.hpp>
#include <rankcred/stats.hpp>

#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>

using namespace rankcred;
using testutil::make_draws;

namespace {

// Independent joint-inclusion count with its own type-7 quantile.
std::size_t count_inside(const DrawMatrix& t, double kappa) {
    const auto s = static_cast<std::size_t>(t.rows());
    std::vector<double> lo(t.cols()), hi(t.cols());
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
        std::vector<double> col(s);
        for (std::size_t r = 0; r < s; ++r) col[r] = t(r, c);
        std::sort(col.begin(), col.end());
        auto q = [&](double p) {
            const double h = (s - 1) * p;
            const auto j = static_cast<std::size_t>(std::floor(h));
            return j + 1 < s ? col[j] + (h - j) * (col[j + 1] - col[j]) : col[s - 1];
        };
        lo[c] = q(kappa / 2);
        hi[c] = q(1 - kappa / 2);
    }
    std::size_t n = 0;
    for (std::size_t r = 0; r < s; ++r) {
        bool ok = true;
        for (Eigen::Index c = 0; c < t.cols(); ++c) ok = ok && t(r, c) >= lo[c] && t(r, c) <= hi[c];
        n += ok;
    }
    return n;
}

std::size_t gap(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

}  // namespace

TEST_CASE("cartesian_select: one coordinate is the central interval") {
    std::mt19937_64 rng(1);
    const auto draws = make_draws(testutil::normal_draws(1000, 1, rng));
    const auto sel = cartesian_select(draws, 0.1);
    CHECK(sel.size() == 900);
    REQUIRE(sel.cart);
    CHECK(sel.cart->kappa == doctest::Approx(0.1).epsilon(1e-12));
    const auto col = testutil::column(draws.theta, 0);
    CHECK(sel.cart->lower(0) == doctest::Approx(quantile(col, 0.05)));
    CHECK(sel.cart->upper(0) == doctest::Approx(quantile(col, 0.95)));
}

TEST_CASE("cartesian_select: bounds separate selected from unselected draws") {
    std::mt19937_64 rng(2);
    const auto draws = make_draws(testutil::normal_draws(5000, 6, rng));
    const auto sel = cartesian_select(draws, 0.2);
    REQUIRE(sel.cart);
    CHECK(gap(sel.size(), 4000) <= 6);
    std::vector<bool> chosen(5000, false);
    for (auto s : sel.indices) chosen[s] = true;
    for (Eigen::Index s = 0; s < 5000; ++s) {
        const auto row = draws.theta.row(s).transpose();
        const bool inside = (row.array() >= sel.cart->lower.array()).all() &&
                            (row.array() <= sel.cart->upper.array()).all();
        CHECK(inside == chosen[static_cast<std::size_t>(s)]);
    }
    CHECK(std::is_sorted(sel.indices.begin(), sel.indices.end()));
}

TEST_CASE("tune_kappa: as close to the target as a brute-force kappa scan") {
    std::mt19937_64 rng(3);
    for (std::size_t m : {1u, 2u, 5u}) {
        const DrawMatrix t = testutil::normal_draws(2000, m, rng);
        const auto res = tune_kappa(t, 0.1, KappaSearch{0, 60});
        CHECK(res.target == 1800);
        CHECK(count_inside(t, res.kappa) == res.count);

        std::size_t best = 2000;
        for (int j = 1; j < 20000; ++j) best = std::min(best, gap(count_inside(t, j / 20000.0 * 0.3), 1800));
        CHECK(gap(res.count, res.target) <= best);
        // every coordinate's cut moves at the same kappa, so K_J steps by at most 2m
        CHECK(best <= m);
        if (m == 1) CHECK(res.count == 1800);
    }
}

TEST_CASE("tune_kappa: count is non-increasing in kappa") {
    std::mt19937_64 rng(4);
    const DrawMatrix t = testutil::normal_draws(1000, 4, rng);
    const CartesianCounter counter(t);
    std::size_t prev = counter.count(0.0);
    CHECK(prev == 1000);
    for (int j = 1; j <= 200; ++j) {
        const std::size_t c = counter.count(j / 200.0);
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("tune_kappa: tiny alpha selects everything") {
    std::mt19937_64 rng(5);
    const DrawMatrix t = testutil::normal_draws(1000, 3, rng);
    const auto res = tune_kappa(t, 1e-6, KappaSearch{0, 60});
    CHECK(res.count == 1000);
    CHECK(res.kappa < 1e-3);
}

TEST_CASE("tune_kappa: the independence guess is already close for independent draws") {
    std::mt19937_64 rng(6);
    const DrawMatrix t = testutil::normal_draws(20000, 10, rng);
    const CartesianCounter counter(t);
    const double guess = 1 - std::pow(0.9, 0.1);
    const double k = static_cast<double>(counter.count(guess));
    CHECK(std::abs(k - 18000) < 4 * std::sqrt(20000 * 0.9 * 0.1));
}

TEST_CASE("cartesian_select: batting-average bounds follow the normal closed form") {
    const Dataset ds = baseball_dataset();
    const auto draws = sample_ub(ds, 100000, 12);
    const auto sel = cartesian_select(draws, 0.1);
    REQUIRE(sel.cart);
    const double kappa = sel.cart->kappa;
    CHECK(kappa == doctest::Approx(1 - std::pow(0.9, 1.0 / 18)).epsilon(0.1));
    CHECK(gap(count_inside(draws.theta, kappa), 90000) <= 10);
    const double z = oracle::normal_quantile(1 - kappa / 2);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const double sd = std::sqrt(ds[i].d);
        CHECK(std::abs(sel.cart->lower(i) - (ds[i].y - z * sd)) < 0.08 * sd);
        CHECK(std::abs(sel.cart->upper(i) - (ds[i].y + z * sd)) < 0.08 * sd);
    }
}

TEST_CASE("cartesian_select: duplicated draws make the target unattainable") {
    DrawMatrix t(100, 2);
    t.col(0).setConstant(1.0);
    t.col(1).setConstant(2.0);
    try {
        cartesian_select(make_draws(t), 0.1);
        FAIL("expected an error");
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("best achieved K = 100") != std::string::npos);
    }
}

TEST_CASE("cartesian_select: invariant under increasing transforms of each coordinate") {
    std::mt19937_64 rng(7);
    const DrawMatrix t = testutil::normal_draws(3000, 5, rng);
    DrawMatrix u = t;
    for (Eigen::Index s = 0; s < u.rows(); ++s) {
        u(s, 0) = std::exp(t(s, 0));
        u(s, 1) = t(s, 1) * t(s, 1) * t(s, 1) + t(s, 1);
        u(s, 2) = 3.0 * t(s, 2) - 10.0;
        u(s, 3) = std::atan(t(s, 3));
        u(s, 4) = 1e-3 * t(s, 4);
    }
    const auto a = cartesian_select(make_draws(t), 0.1);
    const auto b = cartesian_select(make_draws(u), 0.1);
    CHECK(a.indices == b.indices);
}

TEST_CASE("mahalanobis") {
    const Eigen::Vector3d c(1, 2, 3);
    const Eigen::Matrix3d v = Eigen::Vector3d(0.5, 2, 4).asDiagonal();
    CHECK(mahalanobis(c, c, v) == 0.0);
    const Eigen::Vector3d x(2, 0, 5);
    CHECK(mahalanobis(x, c, v) == doctest::Approx(1 / 0.5 + 4 / 2.0 + 4 / 4.0).epsilon(1e-14));

    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 50; ++rep) {
        const Eigen::MatrixXd s = oracle::random_spd(3, rng);
        Eigen::VectorXd p(3), q(3);
        for (int i = 0; i < 3; ++i) {
            p(i) = z(rng);
            q(i) = z(rng);
        }
        const double ref = oracle::mahalanobis_explicit(p, q, s);
        CHECK(std::abs(mahalanobis(p, q, s) - ref) <= 1e-10 * std::max(1.0, ref));
    }
}

TEST_CASE("Mahalanobis: jitter rescues a singular dispersion once") {
    Eigen::Matrix2d singular;
    singular << 1, 1, 1, 1;
    CHECK_NOTHROW(Mahalanobis(Eigen::Vector2d::Zero(), singular));
    Eigen::Matrix2d neg;
    neg << -1, 0, 0, 1;
    CHECK_THROWS_AS(Mahalanobis(Eigen::Vector2d::Zero(), neg), NumericError);
}

TEST_CASE("elliptical_select: identity dispersion uses squared norms") {
    std::mt19937_64 rng(9);
    const auto draws = make_draws(testutil::normal_draws(2000, 4, rng));
    const auto sel = elliptical_select(draws, Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Identity(4, 4), 0.1);
    REQUIRE(sel.ellip);
    for (Eigen::Index s = 0; s < 2000; ++s) {
        CHECK(sel.ellip->distances(s) == doctest::Approx(draws.theta.row(s).squaredNorm()).epsilon(1e-13));
    }
    CHECK(gap(sel.size(), 1800) <= 1);
    for (auto s : sel.indices) CHECK(sel.ellip->distances(s) <= sel.ellip->cutoff);
    CHECK(std::count_if(sel.ellip->distances.begin(), sel.ellip->distances.end(),
                        [&](double d) { return d <= sel.ellip->cutoff; }) == static_cast<long>(sel.size()));
}

TEST_CASE("elliptical_select: single draw at the center") {
    DrawMatrix t(1, 3);
    t << 0.5, -1.0, 2.0;
    const auto sel = elliptical_select(make_draws(t), t.row(0).transpose(), Eigen::MatrixXd::Identity(3, 3), 0.1);
    REQUIRE(sel.ellip);
    CHECK(sel.ellip->distances(0) == 0.0);
    CHECK(sel.indices == std::vector<std::size_t>{0});
}

TEST_CASE("elliptical_select: unstructured cutoff approaches the chi-square quantile") {
    const Dataset ds = baseball_dataset();
    const auto draws = sample_ub(ds, 20000, 13);
    const Eigen::MatrixXd v = ds.d().asDiagonal();
    const auto sel = elliptical_select(draws, ds.y(), v, 0.1);
    const double ref = boost::math::quantile(boost::math::chi_squared(18), 0.9);
    CHECK(sel.ellip->cutoff == doctest::Approx(ref).epsilon(0.03));
}

TEST_CASE("elliptical_select: affine invariance of the selected set") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> z;
    const std::size_t m = 6;
    for (int rep = 0; rep < 10; ++rep) {
        const DrawMatrix t = testutil::normal_draws(4000, m, rng);
        const Eigen::MatrixXd v = oracle::random_spd(m, rng);
        Eigen::VectorXd c(m), b(m);
        Eigen::MatrixXd a(m, m);
        for (std::size_t i = 0; i < m; ++i) {
            c(i) = 0.3 * z(rng);
            b(i) = 5 * z(rng);
            for (std::size_t j = 0; j < m; ++j) a(i, j) = z(rng);
        }
        a += 3.0 * Eigen::MatrixXd::Identity(m, m);
        DrawMatrix u = (t * a.transpose()).rowwise() + b.transpose();
        const auto s1 = elliptical_select(make_draws(t), c, v, 0.1);
        const auto s2 = elliptical_select(make_draws(u), a * c + b, a * v * a.transpose(), 0.1);
        CHECK(s1.indices == s2.indices);
    }
}

TEST_CASE("elliptical_select: selections nest as alpha grows") {
    std::mt19937_64 rng(11);
    const auto draws = make_draws(testutil::normal_draws(3000, 5, rng));
    const Eigen::MatrixXd v = oracle::random_spd(5, rng);
    const Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
    std::vector<std::size_t> prev;
    bool first = true;
    for (double alpha : {0.01, 0.05, 0.1, 0.3, 0.6, 0.9}) {
        const auto sel = elliptical_select(draws, c, v, alpha);
        if (!first) CHECK(std::includes(prev.begin(), prev.end(), sel.indices.begin(), sel.indices.end()));
        prev = sel.indices;
        first = false;
    }
}

TEST_CASE("selection preconditions") {
    std::mt19937_64 rng(12);
    const auto draws = make_draws(testutil::normal_draws(100, 2, rng));
    CHECK_THROWS_AS(cartesian_select(draws, 0.0), NumericError);
    CHECK_THROWS_AS(cartesian_select(draws, 1.0), NumericError);
    CHECK_THROWS_AS(elliptical_select(draws, Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2), 1.5),
                    NumericError);
    CHECK_THROWS_AS(elliptical_select(draws, Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), 0.1),
                    NumericError);
}
