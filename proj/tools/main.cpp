#include "selfaffine/cli_io.hpp"
#include "selfaffine/geometry.hpp"
#include "selfaffine/rational.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using selfaffine::AffinePair;
using selfaffine::Rat;
using selfaffine::invalid_input;
namespace cli = selfaffine::cli;

struct PairArgs {
    std::string p, q, a, m, n;

    AffinePair parse() const {
        return AffinePair{cli::parse_integer_field(p, "p"), cli::parse_integer_field(q, "q"),
                          cli::parse_rational_field(a, "a"), cli::parse_integer_field(m, "m"),
                          cli::parse_integer_field(n, "n")};
    }
};

void add_pair_positionals(CLI::App* command, PairArgs& args) {
    command->add_option("p", args.p, "horizontal expansion factor")->required();
    command->add_option("q", args.q, "vertical expansion factor")->required();
    command->add_option("a", args.a, "shear entry, exact rational")->required();
    command->add_option("m", args.m, "row digit count")->required();
    command->add_option("n", args.n, "column digit count")->required();
}

std::filesystem::path prepare_output_dir(const std::string& output_dir) {
    std::filesystem::path dir(output_dir);
    std::error_code error;
    std::filesystem::create_directories(dir, error);
    if (error) throw invalid_input("output_dir: cannot create '" + output_dir + "'");
    return dir;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("cannot write '" + path.string() + "'");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void print_record(const cli::Record& record) { std::cout << cli::write_record(record); }

cli::RunConfig startup_config(int argc, char** argv) {
    std::string config_path;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }
    if (!config_path.empty()) return cli::load_config_file(config_path);
    return cli::environment_config();
}

int run(int argc, char** argv) {
    cli::RunConfig config = startup_config(argc, argv);

    CLI::App app{"triangular self-affine carpet analyzer"};
    app.require_subcommand(1);
    std::string config_path_display;
    app.add_option("--config", config_path_display,
                   "flat key/value config file (also via SELFAFFINE_CONFIG)");

    PairArgs decide_args;
    CLI::App* decide = app.add_subcommand("decide", "closed-form connectedness verdict");
    add_pair_positionals(decide, decide_args);
    decide->callback([&] { print_record(cli::decide_record(decide_args.parse())); });

    PairArgs verify_args;
    long long verify_depth = config.depth;
    long long verify_nodes = 2'000'000;
    CLI::App* verify = app.add_subcommand("verify", "formula, sequence oracle and piece graph side by side");
    add_pair_positionals(verify, verify_args);
    verify->add_option("--depth", verify_depth, "search depth")->capture_default_str();
    verify->add_option("--node-budget", verify_nodes, "oracle search node budget")->capture_default_str();
    verify->callback([&] {
        print_record(cli::verify_record(verify_args.parse(), verify_depth, verify_nodes));
    });

    std::string extremes_p, extremes_q, extremes_m;
    long long extremes_depth = config.depth;
    CLI::App* extremes = app.add_subcommand("extremes", "extremal digit sums with enclosures");
    extremes->add_option("p", extremes_p, "horizontal expansion factor")->required();
    extremes->add_option("q", extremes_q, "vertical expansion factor")->required();
    extremes->add_option("m", extremes_m, "row digit count")->required();
    extremes->add_option("--depth", extremes_depth, "enclosure depth")->capture_default_str();
    extremes->callback([&] {
        print_record(cli::extremes_record(cli::parse_integer_field(extremes_p, "p"),
                                          cli::parse_integer_field(extremes_q, "q"),
                                          cli::parse_integer_field(extremes_m, "m"),
                                          extremes_depth));
    });

    PairArgs adjacency_args;
    long long adjacency_depth = config.depth;
    long long adjacency_nodes = 4'000'000;
    CLI::App* adjacency = app.add_subcommand("adjacency", "neighbor predicates and labeled piece graph");
    add_pair_positionals(adjacency, adjacency_args);
    adjacency->add_option("--depth", adjacency_depth, "certification depth")->capture_default_str();
    adjacency->add_option("--node-budget", adjacency_nodes, "branch and bound node budget")
        ->capture_default_str();
    adjacency->callback([&] {
        print_record(
            cli::adjacency_record(adjacency_args.parse(), adjacency_depth, adjacency_nodes));
    });

    PairArgs tile_args;
    long long tile_k_max = 3;
    long long tile_points = config.point_budget;
    CLI::App* tile = app.add_subcommand("tile", "tiling classification with independent probes");
    add_pair_positionals(tile, tile_args);
    tile->add_option("--k-max", tile_k_max, "deepest probed level")->capture_default_str();
    tile->add_option("--point-budget", tile_points, "probe point budget")->capture_default_str();
    tile->callback([&] { print_record(cli::tile_record(tile_args.parse(), tile_k_max, tile_points)); });

    std::string sweep_p, sweep_q, sweep_m, sweep_n, sweep_a_min, sweep_a_max, sweep_steps;
    long long sweep_jobs = config.jobs;
    std::string sweep_dir = config.output_dir;
    std::string sweep_name = "sweep.csv";
    bool sweep_phase = false;
    std::string sweep_phase_name = "sweep.pgm";
    CLI::App* sweep = app.add_subcommand("sweep", "verdicts across a shear grid, written as CSV");
    sweep->add_option("p", sweep_p, "horizontal expansion factor")->required();
    sweep->add_option("q", sweep_q, "vertical expansion factor")->required();
    sweep->add_option("m", sweep_m, "row digit count")->required();
    sweep->add_option("n", sweep_n, "column digit count")->required();
    sweep->add_option("a_min", sweep_a_min, "grid start, exact rational")->required();
    sweep->add_option("a_max", sweep_a_max, "grid end, exact rational")->required();
    sweep->add_option("steps", sweep_steps, "grid point count")->required();
    sweep->add_option("--jobs", sweep_jobs, "worker threads")->capture_default_str();
    sweep->add_option("--output-dir", sweep_dir, "directory for outputs")->capture_default_str();
    sweep->add_option("--out", sweep_name, "CSV file name")->capture_default_str();
    sweep->add_flag("--phase", sweep_phase, "also write a P5 phase strip");
    sweep->add_option("--phase-out", sweep_phase_name, "phase strip file name")
        ->capture_default_str();
    sweep->callback([&] {
        cli::SweepRequest request;
        request.p = cli::parse_integer_field(sweep_p, "p");
        request.q = cli::parse_integer_field(sweep_q, "q");
        request.m = cli::parse_integer_field(sweep_m, "m");
        request.n = cli::parse_integer_field(sweep_n, "n");
        request.a_min = cli::parse_rational_field(sweep_a_min, "a_min");
        request.a_max = cli::parse_rational_field(sweep_a_max, "a_max");
        request.steps = cli::parse_integer_field(sweep_steps, "steps");
        if (sweep_jobs < 1) throw invalid_input("jobs: must be positive");

        cli::SweepResult result = cli::run_sweep(request, sweep_jobs);
        std::filesystem::path dir = prepare_output_dir(sweep_dir);
        std::filesystem::path csv_path = dir / sweep_name;
        write_file(csv_path, cli::sweep_csv(result));

        cli::Record record;
        record.add("rows", static_cast<long long>(result.rows.size()));
        record.add("csv", csv_path.string());
        if (sweep_phase) {
            std::filesystem::path phase_path = dir / sweep_phase_name;
            write_file(phase_path, cli::phase_strip(result));
            record.add("phase", phase_path.string());
        }
        print_record(record);
    });

    PairArgs render_args;
    long long render_depth = config.depth;
    long long render_raster = config.raster_size;
    long long render_points = config.point_budget;
    std::string render_format = "pgm";
    std::string render_dir = config.output_dir;
    std::string render_name;
    CLI::App* render = app.add_subcommand("render", "plot the depth-limited attractor cloud");
    add_pair_positionals(render, render_args);
    render->add_option("--depth", render_depth, "cloud depth")->capture_default_str();
    render->add_option("--format", render_format, "pgm or svg")
        ->check(CLI::IsMember({"pgm", "svg"}))
        ->capture_default_str();
    render->add_option("--raster-size", render_raster, "image width in pixels")
        ->capture_default_str();
    render->add_option("--point-budget", render_points, "cloud point budget")
        ->capture_default_str();
    render->add_option("--output-dir", render_dir, "directory for outputs")->capture_default_str();
    render->add_option("--out", render_name, "output file name (default attractor.<format>)");
    render->callback([&] {
        AffinePair pair = render_args.parse();
        bool graymap = render_format == "pgm";
        std::filesystem::path dir = prepare_output_dir(render_dir);
        std::string name = render_name.empty() ? "attractor." + render_format : render_name;
        std::filesystem::path out_path = dir / name;
        selfaffine::geometry::render(pair, render_depth,
                                     graymap ? selfaffine::geometry::RenderFormat::PortableGraymap
                                             : selfaffine::geometry::RenderFormat::ScalableVector,
                                     out_path.string(), render_raster, render_points);
        cli::Record record;
        record.add("out", out_path.string());
        record.add("format", render_format);
        record.add("depth", render_depth);
        record.add("raster_size", render_raster);
        print_record(record);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const selfaffine::budget_exceeded& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 3;
    } catch (const selfaffine::invalid_input& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 2;
    }
}
