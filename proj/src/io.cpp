#include "rankcred/io.hpp"

#include "rankcred/error.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace rankcred {

namespace {

struct BaseballRow {
    const char* id;
    double y;
    double gold;
};

constexpr std::array<BaseballRow, 18> kBaseball{{
    {"Clemente", 0.400, 0.346},     {"F. Robinson", 0.378, 0.298}, {"F. Howard", 0.356, 0.276},
    {"Johnstone", 0.333, 0.222},    {"Berry", 0.311, 0.273},       {"Spencer", 0.311, 0.270},
    {"Kessinger", 0.289, 0.263},    {"L. Alvarado", 0.267, 0.210}, {"Santo", 0.244, 0.269},
    {"Swoboda", 0.244, 0.230},      {"Unser", 0.222, 0.264},       {"Williams", 0.222, 0.256},
    {"Scott", 0.222, 0.303},        {"Petrocelli", 0.222, 0.264},  {"E. Rodriguez", 0.222, 0.226},
    {"Campaneris", 0.200, 0.285},   {"Munson", 0.178, 0.316},      {"Alvis", 0.156, 0.200},
}};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.emplace_back(trim(cur));
    return fields;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

double parse_real(const std::string& text, const std::string& where) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (!text.empty() && *begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (text.empty() || ec != std::errc() || ptr != end) {
        throw DataError(where + ": '" + text + "' is not a number");
    }
    if (!std::isfinite(v)) throw DataError(where + ": value must be finite");
    return v;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

std::string format_exact(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

Dataset parse_dataset(std::string_view csv_text, const std::string& source) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::size_t line_no = 0;
        std::size_t pos = 0;
        while (pos <= csv_text.size()) {
            const auto nl = csv_text.find('\n', pos);
            const auto line = csv_text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++line_no;
            if (!trim(line).empty()) lines.emplace_back(line_no, std::string(line));
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }
    if (lines.empty()) throw DataError(source + ": empty input");

    const std::vector<std::string> header = split_csv_line(lines.front().second);
    std::map<std::string, std::size_t> column;
    std::map<std::size_t, std::size_t> covariate_columns;  // covariate number -> column
    for (std::size_t c = 0; c < header.size(); ++c) {
        const std::string& name = header[c];
        if (!column.emplace(name, c).second) throw DataError(source + ": duplicate column '" + name + "'");
        if (name.size() > 1 && name[0] == 'x' &&
            name.find_first_not_of("0123456789", 1) == std::string::npos) {
            covariate_columns[std::stoul(name.substr(1))] = c;
        }
    }
    for (const char* required : {"id", "y", "d"}) {
        if (!column.count(required)) {
            throw DataError(source + ": missing required column '" + required + "'");
        }
    }
    {
        std::size_t expect = 1;
        for (const auto& [num, col] : covariate_columns) {
            if (num != expect++) throw DataError(source + ": covariate columns must be x1..xp without gaps");
        }
    }
    const auto gold_col = column.count("gold") ? std::optional<std::size_t>(column.at("gold")) : std::nullopt;

    std::vector<Entity> entities;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line_no, text] = lines[r];
        const std::vector<std::string> fields = split_csv_line(text);
        const std::string row = source + " row " + std::to_string(line_no);
        if (fields.size() != header.size()) {
            throw DataError(row + ": expected " + std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        auto at = [&](const std::string& name) -> const std::string& { return fields[column.at(name)]; };
        Entity e;
        e.id = at("id");
        if (e.id.empty()) throw DataError(row + " column 'id': empty id");
        e.y = parse_real(at("y"), row + " column 'y'");
        e.d = parse_real(at("d"), row + " column 'd'");
        if (e.d <= 0.0) throw DataError(row + " column 'd': sampling variance must be > 0");
        for (const auto& [num, col] : covariate_columns) {
            e.x.push_back(parse_real(fields[col], row + " column '" + header[col] + "'"));
        }
        if (gold_col && !fields[*gold_col].empty()) {
            e.gold = parse_real(fields[*gold_col], row + " column 'gold'");
        }
        entities.push_back(std::move(e));
    }
    return Dataset(std::move(entities));
}

Dataset load_dataset(const std::string& path_or_builtin) {
    if (path_or_builtin == "@baseball") return baseball_dataset();
    return parse_dataset(read_text(path_or_builtin), path_or_builtin);
}

std::string emit_dataset(const Dataset& ds) {
    std::ostringstream out;
    out << "id,y,d";
    for (std::size_t j = 0; j < ds.covariate_dim(); ++j) out << ",x" << j + 1;
    if (ds.has_gold()) out << ",gold";
    out << '\n';
    for (const Entity& e : ds.entities()) {
        out << csv_field(e.id) << ',' << format_exact(e.y) << ',' << format_exact(e.d);
        for (double v : e.x) out << ',' << format_exact(v);
        if (e.gold) out << ',' << format_exact(*e.gold);
        out << '\n';
    }
    return out.str();
}

Dataset baseball_dataset() {
    std::vector<Entity> entities;
    for (const BaseballRow& row : kBaseball) {
        Entity e;
        e.id = row.id;
        e.y = row.y;
        e.d = row.y * (1.0 - row.y) / 45.0;
        e.gold = row.gold;
        entities.push_back(std::move(e));
    }
    return Dataset(std::move(entities));
}

std::string baseball_csv() { return emit_dataset(baseball_dataset()); }

std::string rank_matrix_csv(const RankCredibleDistribution& dist, const Dataset& ds) {
    std::ostringstream out;
    out << "rank";
    for (const Entity& e : ds.entities()) out << ',' << csv_field(e.id);
    out << '\n';
    for (Eigen::Index k = 0; k < dist.probs.rows(); ++k) {
        out << k + 1;
        for (Eigen::Index i = 0; i < dist.probs.cols(); ++i) out << ',' << format_number(dist.probs(k, i));
        out << '\n';
    }
    return out.str();
}

std::string draws_csv(const PosteriorDraws& draws, const Dataset& ds) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ds.size(); ++i) out << (i ? "," : "") << "theta_" << i + 1;
    if (draws.beta) {
        for (Eigen::Index j = 0; j < draws.beta->cols(); ++j) out << ",beta_" << j;
    }
    if (draws.a) out << ",A";
    out << '\n';
    for (Eigen::Index s = 0; s < draws.theta.rows(); ++s) {
        for (Eigen::Index i = 0; i < draws.theta.cols(); ++i) {
            out << (i ? "," : "") << format_number(draws.theta(s, i));
        }
        if (draws.beta) {
            for (Eigen::Index j = 0; j < draws.beta->cols(); ++j) out << ',' << format_number((*draws.beta)(s, j));
        }
        if (draws.a) out << ',' << format_number((*draws.a)[s]);
        out << '\n';
    }
    return out.str();
}

std::string kww_csv(const KwwRankSet& set, const Dataset& ds) {
    std::optional<RankVector> gold_ranks;
    if (ds.has_gold()) gold_ranks = rank_of(ds.gold());
    std::ostringstream out;
    out << "id,L,U,rank_lo,rank_hi,eps_kww\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << csv_field(ds[i].id) << ',' << format_number(set.intervals[i].lower) << ','
            << format_number(set.intervals[i].upper) << ',' << set.rank_lo[i] << ',' << set.rank_hi[i] << ',';
        if (gold_ranks) out << format_number(kww_abs_deviation(set.rank_lo[i], set.rank_hi[i], (*gold_ranks)[i]));
        out << '\n';
    }
    return out.str();
}

std::string sim_csv(const std::vector<SimRow>& rows) {
    std::ostringstream out;
    out << "a,beta1,method,geometry,weighting,avg_exp_abs_dev,vol_mth_root,avg_length,n_reps\n";
    for (const SimRow& r : rows) {
        out << format_number(r.a) << ',' << format_number(r.beta1) << ',' << r.method << ',' << r.geometry
            << ',' << r.weighting << ',' << format_number(r.avg_exp_abs_dev) << ','
            << format_number(r.vol_mth_root) << ',' << format_number(r.avg_length) << ',' << r.n_reps << '\n';
    }
    return out.str();
}

SimConfig parse_sim_config(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("simulation config: ") + ex.what());
    }
    if (!j.is_object()) throw DataError("simulation config must be a JSON object");
    SimConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "m") cfg.m = value.get<std::size_t>();
            else if (key == "a_grid") cfg.a_grid = value.get<std::vector<double>>();
            else if (key == "beta0") cfg.beta0 = value.get<double>();
            else if (key == "beta1_grid") cfg.beta1_grid = value.get<std::vector<double>>();
            else if (key == "d") cfg.d = value.get<std::vector<double>>();
            else if (key == "n_reps") cfg.n_reps = value.get<std::size_t>();
            else if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "samples") cfg.samples = value.get<std::size_t>();
            else if (key == "burn_in") cfg.burn_in = value.get<std::size_t>();
            else if (key == "threads") cfg.threads = value.get<std::size_t>();
            else throw DataError("simulation config: unknown field '" + key + "'");
        }
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("simulation config: ") + ex.what());
    }
    cfg.validate();
    return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace rankcred
