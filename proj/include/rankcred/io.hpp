#pragma once

#include "rankcred/domain.hpp"
#include "rankcred/kww.hpp"
#include "rankcred/metrics.hpp"
#include "rankcred/posterior.hpp"
#include "rankcred/simlab.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace rankcred {

// 12 significant digits, '.' decimal point, locale independent.
std::string format_number(double v);
// Shortest representation that reads back to the same double.
std::string format_exact(double v);

// CSV with header; required columns id,y,d; optional x1..xp and gold.
Dataset parse_dataset(std::string_view csv_text, const std::string& source = "<input>");
// A file path, or "@baseball" for the bundled fixture.
Dataset load_dataset(const std::string& path_or_builtin);
std::string emit_dataset(const Dataset& ds);

// First-45-at-bat batting averages of 18 players (1970) with rest-of-season
// averages as gold; D_i = y_i (1 - y_i) / 45.
Dataset baseball_dataset();
std::string baseball_csv();

std::string rank_matrix_csv(const RankCredibleDistribution& dist, const Dataset& ds);
std::string draws_csv(const PosteriorDraws& draws, const Dataset& ds);
std::string kww_csv(const KwwRankSet& set, const Dataset& ds);
std::string sim_csv(const std::vector<SimRow>& rows);

SimConfig parse_sim_config(std::string_view json_text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace rankcred
