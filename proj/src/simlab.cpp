#include "rankcred/simlab.hpp"

#include "rankcred/credset.hpp"
#include "rankcred/error.hpp"
#include "rankcred/io.hpp"
#include "rankcred/kww.hpp"
#include "rankcred/metrics.hpp"
#include "rankcred/posterior.hpp"
#include "rankcred/rankdist.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace rankcred {

namespace {

constexpr std::uint64_t kCovariateStream = 0xC0FA41A7Eull;

// Slots of one replication result, in output order.
enum Slot : std::size_t {
    kKww,
    kHbCartW, kHbCartU, kHbEllW, kHbEllU,
    kUbCartW, kUbCartU, kUbEllW, kUbEllU,
    kSlots
};

struct RepResult {
    double dev[kSlots] = {};
    double volume[kSlots] = {};
    double length[kSlots] = {};
};

double mean_expected_deviation(const RankCredibleDistribution& dist, const RankVector& truth) {
    double total = 0.0;
    for (std::size_t i = 0; i < dist.dim(); ++i) {
        total += expected_abs_deviation(rank_marginal(dist, i), truth[i]);
    }
    return total / static_cast<double>(dist.dim());
}

void bayes_block(const PosteriorDraws& draws, const MahalContext& ctx, double alpha,
                 const RankVector& truth, std::size_t first_slot, RepResult& out) {
    const CredibleSelection cart = cartesian_select(draws, alpha);
    const CredibleSelection ell = elliptical_select(draws, ctx.center, ctx.dispersion, alpha);

    const SizeReport cart_size = orthotope_size(cart.cart->lower, cart.cart->upper);
    const SizeReport ell_size = ellipse_size_from_dispersion(ctx.dispersion, ell.ellip->cutoff);

    const auto fill = [&](std::size_t slot, const CredibleSelection& sel, Weighting w,
                          const SizeReport& size) {
        const RankCredibleDistribution dist = build_distribution(sel, draws, w, ctx);
        out.dev[slot] = mean_expected_deviation(dist, truth);
        out.volume[slot] = size.volume;
        out.length[slot] = size.avg_length;
    };
    fill(first_slot + 0, cart, Weighting::MahalanobisExp, cart_size);
    fill(first_slot + 1, cart, Weighting::Equal, cart_size);
    fill(first_slot + 2, ell, Weighting::MahalanobisExp, ell_size);
    fill(first_slot + 3, ell, Weighting::Equal, ell_size);
}

std::uint64_t cell_key(double a, double beta1) {
    return std::bit_cast<std::uint64_t>(a) ^ (std::bit_cast<std::uint64_t>(beta1) * 0x9E3779B97F4A7C15ull);
}

RepResult run_replication(const SimConfig& cfg, const Eigen::VectorXd& x, const Eigen::VectorXd& d,
                          double a, double beta1, std::size_t rep) {
    Rng rng = make_stream(cfg.seed, {cell_key(a, beta1), rep, 0});
    const SimInstance inst = generate_instance(x, cfg.beta0, beta1, a, d, rng);
    const RankVector truth = rank_of(inst.theta_true);
    RepResult out;

    const KwwRankSet kww = rank_confidence_set(inst.data, cfg.alpha, KwwMethod::Independence);
    double kww_dev = 0.0;
    for (std::size_t i = 0; i < cfg.m; ++i) {
        kww_dev += kww_abs_deviation(kww.rank_lo[i], kww.rank_hi[i], truth[i]);
    }
    out.dev[kKww] = kww_dev / static_cast<double>(cfg.m);
    const SizeReport box = orthotope_size(kww.intervals);
    out.volume[kKww] = box.volume;
    out.length[kKww] = box.avg_length;

    const std::uint64_t chain_seed = rng();

    // The no-slope cells fit the exchangeable (intercept-only) model.
    std::vector<Entity> entities = inst.data.entities();
    if (beta1 == 0.0) {
        for (Entity& e : entities) e.x.clear();
    }
    const Dataset hb_data(std::move(entities));
    HbConfig hb;
    hb.samples = cfg.samples;
    hb.burn_in = cfg.burn_in;
    hb.seed = chain_seed;
    const PosteriorDraws hb_draws = gibbs_hb(hb_data, hb);
    const PosteriorSummary hb_sum = summarize(hb_draws);
    bayes_block(hb_draws, MahalContext{hb_sum.mean, hb_sum.cov}, cfg.alpha, truth, kHbCartW, out);

    const PosteriorDraws ub_draws = sample_ub(inst.data, cfg.samples, chain_seed ^ 0x5555u);
    bayes_block(ub_draws, default_mahal_context(ub_draws, inst.data), cfg.alpha, truth, kUbCartW, out);
    return out;
}

std::vector<SimRow> summarize_cell(const SimConfig& cfg, double a, double beta1,
                                   const std::vector<RepResult>& reps) {
    struct Label {
        const char* method;
        const char* geometry;
        const char* weighting;
    };
    static constexpr Label labels[kSlots] = {
        {"kww", "cartesian", "none"},
        {"hb", "cartesian", "mahal"},  {"hb", "cartesian", "equal"},
        {"hb", "elliptical", "mahal"}, {"hb", "elliptical", "equal"},
        {"ub", "cartesian", "mahal"},  {"ub", "cartesian", "equal"},
        {"ub", "elliptical", "mahal"}, {"ub", "elliptical", "equal"},
    };
    std::vector<SimRow> rows;
    const auto n = static_cast<double>(reps.size());
    for (std::size_t slot = 0; slot < kSlots; ++slot) {
        double dev = 0.0, vol = 0.0, len = 0.0;
        for (const RepResult& r : reps) {
            dev += r.dev[slot];
            vol += r.volume[slot];
            len += r.length[slot];
        }
        SimRow row;
        row.a = a;
        row.beta1 = beta1;
        row.method = labels[slot].method;
        row.geometry = labels[slot].geometry;
        row.weighting = labels[slot].weighting;
        row.avg_exp_abs_dev = dev / n;
        row.vol_mth_root = std::pow(vol / n, 1.0 / static_cast<double>(cfg.m));
        row.avg_length = len / n;
        row.n_reps = reps.size();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

void SimConfig::validate() const {
    if (m < 5) throw DataError("simulation: m must be >= 5");
    if (n_reps < 1) throw DataError("simulation: n_reps must be >= 1");
    if (a_grid.empty() || beta1_grid.empty()) throw DataError("simulation: empty parameter grid");
    for (double a : a_grid) {
        if (!(a > 0.0)) throw DataError("simulation: model variances must be > 0");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw DataError("simulation: alpha must lie in (0, 1)");
    if (samples < 2) throw DataError("simulation: samples must be >= 2");
    if (!d.empty()) {
        if (d.size() != m) throw DataError("simulation: d must have m entries");
        for (double v : d) {
            if (!(v > 0.0)) throw DataError("simulation: sampling variances must be > 0");
        }
    } else if (m != 18) {
        throw DataError("simulation: default sampling variances need m = 18");
    }
}

Eigen::VectorXd SimConfig::sampling_variances() const {
    if (!d.empty()) return Eigen::Map<const Eigen::VectorXd>(d.data(), static_cast<Eigen::Index>(d.size()));
    return baseball_dataset().d();
}

SimInstance generate_instance(const Eigen::VectorXd& x, double beta0, double beta1, double a,
                              const Eigen::VectorXd& d, Rng& rng) {
    if (!(a > 0.0)) throw NumericError("generate_instance needs A > 0");
    if (x.size() != d.size()) throw NumericError("generate_instance: x and d lengths differ");
    std::normal_distribution<double> normal;
    const double sd_a = std::sqrt(a);
    Eigen::VectorXd theta(x.size());
    std::vector<Entity> entities;
    entities.reserve(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        theta[i] = beta0 + beta1 * x[i] + sd_a * normal(rng);
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Entity e;
        e.id = "E" + std::to_string(i + 1);
        e.y = theta[i] + std::sqrt(d[i]) * normal(rng);
        e.d = d[i];
        e.x = {x[i]};
        e.gold = theta[i];
        entities.push_back(std::move(e));
    }
    return SimInstance{std::move(theta), Dataset(std::move(entities))};
}

Eigen::VectorXd simulation_covariates(const SimConfig& cfg) {
    Rng rng = make_stream(cfg.seed, {kCovariateStream});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd x(static_cast<Eigen::Index>(cfg.m));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = unif(rng);
    return x;
}

std::vector<SimRow> run_cell(const SimConfig& cfg, double a, double beta1) {
    cfg.validate();
    const Eigen::VectorXd x = simulation_covariates(cfg);
    const Eigen::VectorXd d = cfg.sampling_variances();

    std::vector<RepResult> reps(cfg.n_reps);
    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, cfg.n_reps);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t rep = next++; rep < cfg.n_reps; rep = next++) {
            try {
                reps[rep] = run_replication(cfg, x, d, a, beta1, rep);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return summarize_cell(cfg, a, beta1, reps);
}

std::vector<SimRow> run_study(const SimConfig& cfg) {
    cfg.validate();
    std::vector<SimRow> rows;
    for (double a : cfg.a_grid) {
        for (double beta1 : cfg.beta1_grid) {
            std::vector<SimRow> cell = run_cell(cfg, a, beta1);
            rows.insert(rows.end(), cell.begin(), cell.end());
        }
    }
    return rows;
}

}  // namespace rankcred
