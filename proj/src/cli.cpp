#include "rankcred/cli.hpp"

#include "rankcred/error.hpp"
#include "rankcred/io.hpp"
#include "rankcred/kww.hpp"
#include "rankcred/pipeline.hpp"
#include "rankcred/simlab.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>

namespace rankcred {

namespace {

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct FitArgs {
    std::string model = "hb";
    std::string set = "elliptical";
    std::string weights = "mahal";
    std::string input;
    std::string out_dir = ".";
    bool no_intercept = false;
    bool plot_data = false;
    bool save_draws = false;
    FitOptions options;
};

struct KwwArgs {
    std::string input;
    std::string out_dir = ".";
    std::string method = "independence";
    double alpha = 0.1;
};

struct SimArgs {
    std::string config;
    std::string out = "table3.csv";
    std::size_t n_reps = 0;
};

int run_fit(const FitArgs& a, std::ostream& out) {
    const Dataset ds = load_dataset(a.input);
    FitOptions opt = a.options;
    opt.model = a.model == "ub" ? Model::UB : Model::HB;
    opt.geometry = a.set == "cartesian" ? Geometry::Cartesian : Geometry::Elliptical;
    opt.weighting = a.weights == "equal" ? Weighting::Equal : Weighting::MahalanobisExp;
    opt.include_intercept = !a.no_intercept;
    const FitResult r = fit(ds, opt);
    write_fit_outputs(r, ds, a.out_dir, FitArtifacts{a.plot_data, a.save_draws});
    out << "model=" << to_string(opt.model) << " set=" << to_string(opt.geometry)
        << " weights=" << to_string(opt.weighting) << " selected=" << r.selection.size() << "/"
        << r.draws.samples() << " avg_length=" << format_number(r.size.avg_length);
    if (r.deviations) out << " total_abs_dev=" << format_number(r.deviations->sum());
    out << '\n';
    return kOk;
}

int run_kww(const KwwArgs& a, std::ostream& out) {
    const Dataset ds = load_dataset(a.input);
    const KwwMethod method = a.method == "bonferroni" ? KwwMethod::Bonferroni : KwwMethod::Independence;
    const KwwRankSet set = rank_confidence_set(ds, a.alpha, method);
    const std::filesystem::path path = std::filesystem::path(a.out_dir) / "kww_ranksets.csv";
    write_text(path, kww_csv(set, ds));
    const SizeReport box = orthotope_size(set.intervals);
    out << "gamma=" << format_number(set.gamma) << " z=" << format_number(normal_quantile(1.0 - 0.5 * set.gamma))
        << " avg_length=" << format_number(box.avg_length) << " volume=" << format_number(box.volume)
        << " -> " << path.string() << '\n';
    return kOk;
}

int run_simulate(const SimArgs& a, std::ostream& out) {
    SimConfig cfg = a.config.empty() ? SimConfig{} : parse_sim_config(read_text(a.config));
    if (a.n_reps) cfg.n_reps = a.n_reps;
    const std::vector<SimRow> rows = run_study(cfg);
    write_text(a.out, sim_csv(rows));
    out << rows.size() << " rows -> " << a.out << '\n';
    return kOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Credible distributions of overall rankings"};
    app.require_subcommand(1);

    FitArgs fit_args;
    auto* fit_cmd = app.add_subcommand("fit", "Posterior draws, credible set and rank credible distribution");
    fit_cmd->add_option("--model", fit_args.model)->check(CLI::IsMember({"ub", "hb"}));
    fit_cmd->add_option("--set", fit_args.set)->check(CLI::IsMember({"cartesian", "elliptical"}));
    fit_cmd->add_option("--weights", fit_args.weights)->check(CLI::IsMember({"equal", "mahal"}));
    fit_cmd->add_option("--alpha", fit_args.options.alpha)->check(CLI::Range(0.0, 1.0));
    fit_cmd->add_option("--samples", fit_args.options.samples)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--burnin", fit_args.options.burn_in);
    fit_cmd->add_option("--thin", fit_args.options.thin)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--seed", fit_args.options.seed);
    fit_cmd->add_flag("--no-intercept", fit_args.no_intercept);
    fit_cmd->add_flag("--plot-data", fit_args.plot_data, "Also write plot_data.csv");
    fit_cmd->add_flag("--save-draws", fit_args.save_draws, "Also write draws.csv");
    fit_cmd->add_option("--out", fit_args.out_dir, "Output directory");
    fit_cmd->add_option("input", fit_args.input, "Dataset CSV, or @baseball")->required();

    KwwArgs kww_args;
    auto* kww_cmd = app.add_subcommand("kww", "Frequentist joint confidence set for the rank vector");
    kww_cmd->add_option("--alpha", kww_args.alpha)->check(CLI::Range(0.0, 1.0));
    kww_cmd->add_option("--method", kww_args.method)->check(CLI::IsMember({"independence", "bonferroni"}));
    kww_cmd->add_option("--out", kww_args.out_dir, "Output directory");
    kww_cmd->add_option("input", kww_args.input, "Dataset CSV, or @baseball")->required();

    SimArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Comparative simulation study");
    sim_cmd->add_option("--config", sim_args.config, "JSON file with SimConfig fields");
    sim_cmd->add_option("--out", sim_args.out, "Output CSV");
    sim_cmd->add_option("--reps", sim_args.n_reps, "Override n_reps");

    std::string fixture_name;
    std::string fixture_out;
    auto* fixture_cmd = app.add_subcommand("fixture", "Write a bundled dataset as CSV");
    fixture_cmd->add_option("name", fixture_name)->required()->check(CLI::IsMember({"baseball"}));
    fixture_cmd->add_option("--out", fixture_out, "Output CSV (stdout if omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for usage\n";
        return kUsageError;
    }

    try {
        if (fit_cmd->parsed()) {
            if (fit_args.options.alpha <= 0.0 || fit_args.options.alpha >= 1.0) {
                err << "usage error: --alpha must lie in (0, 1)\n";
                return kUsageError;
            }
            return run_fit(fit_args, out);
        }
        if (kww_cmd->parsed()) {
            if (kww_args.alpha <= 0.0 || kww_args.alpha >= 1.0) {
                err << "usage error: --alpha must lie in (0, 1)\n";
                return kUsageError;
            }
            return run_kww(kww_args, out);
        }
        if (sim_cmd->parsed()) return run_simulate(sim_args, out);
        if (fixture_cmd->parsed()) {
            if (fixture_out.empty()) {
                out << baseball_csv();
            } else {
                write_text(fixture_out, baseball_csv());
            }
            return kOk;
        }
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "file error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsageError;
}

}  // namespace rankcred
