// Command-line front end: simulate experiments from JSON configs, solve the
// genie upper bound, regenerate the built-in figure suites, and run the
// property self-tests.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ehpc/environment.hpp"
#include "ehpc/harness.hpp"
#include "ehpc/oracle.hpp"
#include "ehpc/selftest.hpp"
#include "ehpc/utility.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

// Default directory for outputs whose paths are given as bare filenames.
fs::path output_dir() {
    if (const char* env = std::getenv("EHPC_OUTDIR")) return fs::path(env);
    return fs::current_path();
}

fs::path resolve_out(const std::string& given) {
    fs::path p(given);
    return p.is_absolute() ? p : output_dir() / p;
}

int cmd_simulate(const std::string& config_path, const std::string& out_csv,
                 const std::string& out_svg) {
    auto cfg = ehpc::ExperimentConfig::from_json(read_file(config_path));
    if (!out_csv.empty()) cfg.out_csv = out_csv;
    if (!out_svg.empty()) cfg.out_svg = out_svg;

    auto result = ehpc::run_experiment(cfg);
    if (!cfg.out_csv.empty())
        write_file(resolve_out(cfg.out_csv), ehpc::csv_string(result.rows));
    if (!cfg.out_svg.empty()) {
        ehpc::FigureResult fig;
        fig.title = cfg.name.empty() ? "experiment" : cfg.name;
        fig.curves.push_back({fig.title, result.rows});
        write_file(resolve_out(cfg.out_svg), ehpc::render_figure_svg(fig));
    }

    const auto& s = result.summary;
    nlohmann::json summary{
        {"name", cfg.name},
        {"final_mean_avg_utility", s.final_mean_avg_utility},
        {"final_stderr", s.final_stderr},
        {"min_virtual_queue", s.min_virtual_queue},
        {"total_scaled", s.total_scaled},
        {"total_violations", s.total_violations},
    };
    if (s.envelope_at_horizon) summary["envelope_at_horizon"] = *s.envelope_at_horizon;
    std::cout << summary.dump(2) << "\n";
    return s.total_violations == 0 ? 0 : 1;
}

int cmd_oracle(const std::string& config_path, long samples) {
    auto cfg = ehpc::ExperimentConfig::from_json(read_file(config_path));
    auto energy = cfg.energy.make();
    auto channel = cfg.channel.make();
    ehpc::Rng crng(cfg.master_seed, 0, 1);
    ehpc::LogUtility util;

    ehpc::OracleProblem prob;
    prob.samples.reserve(static_cast<std::size_t>(samples));
    for (long i = 0; i < samples; ++i)
        prob.samples.push_back({0.0, channel->sample(crng)});
    prob.mean_energy = energy->mean();
    prob.p_max = cfg.p_max;
    prob.utility = &util;
    double smax = 0.0;
    for (double s : channel->support_max()) smax = std::max(smax, s);
    prob.curvature_bound = smax * smax;

    auto res = ehpc::solve_upper_bound(prob, 20000, 1e-9);
    nlohmann::json out{
        {"u_star", res.u_star},
        {"p_star", res.p_star},
        {"samples", samples},
        {"iterations", res.iterations},
        {"gradient_mapping_norm", res.gradient_mapping_norm},
    };
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_figures(int id, const std::string& outdir_arg) {
    fs::path outdir = outdir_arg.empty() ? output_dir() : fs::path(outdir_arg);
    fs::create_directories(outdir);
    auto fig = ehpc::run_figure_suite(id);

    char stem[32];
    std::snprintf(stem, sizeof stem, "figure%d", id);
    std::ostringstream csv;
    ehpc::write_figure_csv(fig, csv);
    write_file(outdir / (std::string(stem) + ".csv"), csv.str());
    write_file(outdir / (std::string(stem) + ".svg"), ehpc::render_figure_svg(fig));
    std::cout << "wrote " << (outdir / stem).string() << ".{csv,svg}\n";
    return 0;
}

int cmd_selftest() {
    int failed = 0;
    for (const auto& suite :
         {ehpc::projection_selftest(), ehpc::utility_selftest(), ehpc::controller_selftest()}) {
        for (const auto& c : suite) {
            std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
            if (!c.detail.empty()) std::cout << "  [" << c.detail << "]";
            std::cout << "\n";
            if (!c.passed) ++failed;
        }
    }
    std::cout << (failed == 0 ? "all checks passed" : "checks failed") << "\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"energy-harvesting power-control simulator"};
    app.require_subcommand(1);

    std::string config_path, out_csv, out_svg, outdir;
    long samples = 1000000;
    int figure_id = 1;

    auto* sim = app.add_subcommand("simulate", "run one experiment from a JSON config");
    sim->add_option("--config", config_path, "experiment config (JSON)")->required();
    sim->add_option("--out-csv", out_csv, "override the config's CSV output path");
    sim->add_option("--out-svg", out_svg, "override the config's SVG output path");

    auto* orc = app.add_subcommand("oracle", "solve the genie upper bound by sample average");
    orc->add_option("--config", config_path, "experiment config (JSON)")->required();
    orc->add_option("--samples", samples, "number of channel draws")->check(CLI::PositiveNumber);

    auto* figs = app.add_subcommand("figures", "regenerate a built-in figure suite");
    figs->add_option("--id", figure_id, "figure id")->required()->check(CLI::Range(1, 8));
    figs->add_option("--outdir", outdir, "output directory (default: EHPC_OUTDIR or cwd)");

    app.add_subcommand("selftest", "run the invariant/property suites");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_csv, out_svg);
        if (orc->parsed()) return cmd_oracle(config_path, samples);
        if (figs->parsed()) return cmd_figures(figure_id, outdir);
        return cmd_selftest();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
