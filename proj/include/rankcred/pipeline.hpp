#pragma once

#include "rankcred/domain.hpp"
#include "rankcred/metrics.hpp"
#include "rankcred/posterior.hpp"
#include "rankcred/rankdist.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace rankcred {

struct FitOptions {
    Model model = Model::HB;
    Geometry geometry = Geometry::Elliptical;
    Weighting weighting = Weighting::MahalanobisExp;
    double alpha = 0.1;
    std::size_t samples = 50000;
    std::size_t burn_in = 2000;
    std::size_t thin = 1;
    std::uint64_t seed = 0;
    bool include_intercept = true;
};

struct FitResult {
    FitOptions options;
    PosteriorDraws draws;
    PosteriorSummary summary;
    MahalContext context;
    CredibleSelection selection;
    RankCredibleDistribution distribution;
    SizeReport size;
    RankVector observed_ranks;
    std::optional<RankVector> gold_ranks;
    std::optional<Eigen::VectorXd> deviations;  // per-entity expected |rank - gold rank|
};

// Draws, credible set, rank distribution and size measures in one pass.
FitResult fit(const Dataset& ds, const FitOptions& options);

std::string rank_summary_csv(const FitResult& result, const Dataset& ds);
std::string size_report_json(const FitResult& result);
std::string posterior_summary_json(const FitResult& result, const Dataset& ds);
// Tidy overlay layers: kww_range, credible, observed, gold.
std::string plot_data_csv(const FitResult& result, const Dataset& ds);

struct FitArtifacts {
    bool plot_data = false;
    bool draws = false;
};

void write_fit_outputs(const FitResult& result, const Dataset& ds, const std::filesystem::path& dir,
                       FitArtifacts extra = {});

}  // namespace rankcred
