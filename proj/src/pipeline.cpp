#include "rankcred/pipeline.hpp"

#include "rankcred/credset.hpp"
#include "rankcred/io.hpp"
#include "rankcred/kww.hpp"

#include <json.hpp>

#include <cmath>
#include <sstream>

namespace rankcred {

namespace {

nlohmann::ordered_json json_number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_number(v));
}

nlohmann::ordered_json json_vector(const Eigen::VectorXd& v) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v[i]));
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

FitResult fit(const Dataset& ds, const FitOptions& options) {
    FitResult r;
    r.options = options;
    if (options.model == Model::UB) {
        r.draws = sample_ub(ds, options.samples, options.seed);
    } else {
        HbConfig cfg;
        cfg.samples = options.samples;
        cfg.burn_in = options.burn_in;
        cfg.thin = options.thin;
        cfg.seed = options.seed;
        cfg.include_intercept = options.include_intercept;
        r.draws = gibbs_hb(ds, cfg);
    }
    r.summary = summarize(r.draws, ds);
    r.context = options.model == Model::UB
                    ? MahalContext{ds.y(), ds.d().asDiagonal()}
                    : MahalContext{r.summary.mean, r.summary.cov};

    if (options.geometry == Geometry::Cartesian) {
        r.selection = cartesian_select(r.draws, options.alpha);
        r.size = orthotope_size(r.selection.cart->lower, r.selection.cart->upper);
    } else {
        r.selection = elliptical_select(r.draws, r.context.center, r.context.dispersion, options.alpha);
        r.size = ellipse_size_from_dispersion(r.context.dispersion, r.selection.ellip->cutoff);
    }
    r.distribution = build_distribution(r.selection, r.draws, options.weighting, r.context);
    r.observed_ranks = rank_of(ds.y(), TieRule::Midrank);
    if (ds.has_gold()) {
        r.gold_ranks = rank_of(ds.gold(), TieRule::Midrank);
        Eigen::VectorXd dev(static_cast<Eigen::Index>(ds.size()));
        for (std::size_t i = 0; i < ds.size(); ++i) {
            dev[static_cast<Eigen::Index>(i)] =
                expected_abs_deviation(rank_marginal(r.distribution, i), (*r.gold_ranks)[i]);
        }
        r.deviations = std::move(dev);
    }
    return r;
}

std::string rank_summary_csv(const FitResult& r, const Dataset& ds) {
    std::ostringstream out;
    out << "id,y,observed_rank,expected_rank,rank_var,rank_q05,rank_q50,rank_q95";
    if (r.gold_ranks) out << ",gold,gold_rank,eps";
    out << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const Eigen::VectorXd col = rank_marginal(r.distribution, i);
        const double mean = expected_rank(r.distribution, i);
        double var = 0.0;
        for (Eigen::Index k = 0; k < col.size(); ++k) {
            const double dk = static_cast<double>(k + 1) - mean;
            var += dk * dk * col[k];
        }
        out << csv_quote(ds[i].id) << ',' << format_number(ds[i].y) << ','
            << format_number(r.observed_ranks[i]) << ',' << format_number(mean) << ','
            << format_number(var) << ',' << marginal_quantile(col, 0.05) << ','
            << marginal_quantile(col, 0.5) << ',' << marginal_quantile(col, 0.95);
        if (r.gold_ranks) {
            out << ',' << format_number(*ds[i].gold) << ',' << format_number((*r.gold_ranks)[i]) << ','
                << format_number((*r.deviations)[static_cast<Eigen::Index>(i)]);
        }
        out << '\n';
    }
    return out.str();
}

std::string size_report_json(const FitResult& r) {
    nlohmann::ordered_json j;
    j["geometry"] = to_string(r.size.geometry);
    j["model"] = to_string(r.options.model);
    j["alpha"] = json_number(r.options.alpha);
    j["selected"] = r.selection.size();
    j["samples"] = r.draws.samples();
    j["volume"] = json_number(r.size.volume);
    j["log_volume"] = json_number(r.size.log_volume);
    j["volume_mth_root"] = json_number(r.size.volume_mth_root);
    j["avg_length"] = json_number(r.size.avg_length);
    j["per_side_lengths"] = json_vector(r.size.per_side_lengths);
    if (r.selection.cart) {
        j["kappa"] = json_number(r.selection.cart->kappa);
        j["lower"] = json_vector(r.selection.cart->lower);
        j["upper"] = json_vector(r.selection.cart->upper);
    }
    if (r.selection.ellip) j["cutoff"] = json_number(r.selection.ellip->cutoff);
    return j.dump(2) + "\n";
}

std::string posterior_summary_json(const FitResult& r, const Dataset& ds) {
    nlohmann::ordered_json j;
    j["model"] = to_string(r.options.model);
    j["samples"] = r.draws.samples();
    j["seed"] = r.options.seed;
    if (r.options.model == Model::HB) {
        j["burn_in"] = r.options.burn_in;
        j["thin"] = r.options.thin;
        j["include_intercept"] = r.options.include_intercept;
    }
    nlohmann::ordered_json ids = nlohmann::ordered_json::array();
    for (const Entity& e : ds.entities()) ids.push_back(e.id);
    j["ids"] = ids;
    j["mean"] = json_vector(r.summary.mean);
    j["variance"] = json_vector(r.summary.cov.diagonal());
    nlohmann::ordered_json cov = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < r.summary.cov.rows(); ++i) cov.push_back(json_vector(r.summary.cov.row(i).transpose()));
    j["cov"] = cov;
    if (r.summary.a_mean) j["a_mean"] = json_number(*r.summary.a_mean);
    if (r.summary.a_median) j["a_median"] = json_number(*r.summary.a_median);
    if (r.summary.shrinkage) j["shrinkage"] = json_vector(*r.summary.shrinkage);
    if (ds.has_gold()) {
        j["tese_posterior_mean"] = json_number(tese(r.summary.mean, ds.gold()));
        j["tese_direct"] = json_number(tese(ds.y(), ds.gold()));
        j["total_abs_deviation"] = json_number(r.deviations->sum());
    }
    return j.dump(2) + "\n";
}

std::string plot_data_csv(const FitResult& r, const Dataset& ds) {
    const KwwRankSet kww = rank_confidence_set(ds, r.options.alpha, KwwMethod::Independence);
    const RankVector observed = rank_of(ds.y(), TieRule::HighestOfTies);
    std::ostringstream out;
    out << "layer,entity,entity_index,rank,value\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string id = csv_quote(ds[i].id);
        for (std::size_t k = kww.rank_lo[i]; k <= kww.rank_hi[i]; ++k) {
            out << "kww_range," << id << ',' << i + 1 << ',' << k << ",1\n";
        }
        for (Eigen::Index k = 0; k < r.distribution.probs.rows(); ++k) {
            const double p = r.distribution.probs(k, static_cast<Eigen::Index>(i));
            if (p > 0.0) out << "credible," << id << ',' << i + 1 << ',' << k + 1 << ',' << format_number(p) << '\n';
        }
        out << "observed," << id << ',' << i + 1 << ',' << format_number(observed[i]) << ",1\n";
        if (r.gold_ranks) out << "gold," << id << ',' << i + 1 << ',' << format_number((*r.gold_ranks)[i]) << ",1\n";
    }
    return out.str();
}

void write_fit_outputs(const FitResult& r, const Dataset& ds, const std::filesystem::path& dir,
                       FitArtifacts extra) {
    std::filesystem::create_directories(dir);
    write_text(dir / "rank_matrix.csv", rank_matrix_csv(r.distribution, ds));
    write_text(dir / "rank_summary.csv", rank_summary_csv(r, ds));
    write_text(dir / "size_report.json", size_report_json(r));
    write_text(dir / "posterior_summary.json", posterior_summary_json(r, ds));
    if (extra.plot_data) write_text(dir / "plot_data.csv", plot_data_csv(r, ds));
    if (extra.draws) write_text(dir / "draws.csv", draws_csv(r.draws, ds));
}

}  // namespace rankcred
