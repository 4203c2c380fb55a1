#include "fuss/cli.hpp"

#include "fuss/config.hpp"
#include "fuss/engine.hpp"
#include "fuss/errors.hpp"
#include "fuss/experiments.hpp"
#include "fuss/pairing.hpp"
#include "fuss/problems.hpp"
#include "parse_util.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fuss {

namespace {

using detail::format_full;
using detail::parse_double;
using detail::parse_uint64;
using detail::split;
using detail::trim;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + *path + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("short write to '" + *path + "'");
}

/// Histogram input: one "level count" pair per line, '#' comments.
std::map<double, std::uint64_t> parse_histogram_file(const std::string& text) {
    std::map<double, std::uint64_t> hist;
    int line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream fields{std::string(line)};
        std::string level_str, count_str, extra;
        fields >> level_str >> count_str;
        if (count_str.empty() || (fields >> extra))
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'level count'");
        const double level = parse_double(level_str, "level");
        const std::uint64_t count = parse_uint64(count_str, "count");
        if (hist.count(level))
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate level " +
                              level_str);
        hist[level] = count;
    }
    return hist;
}

void cmd_run(const std::string& config_path, const std::optional<std::string>& output_flag) {
    const RunConfig cfg = parse_run_config(read_file(config_path));
    const RunTrace trace = run_steady_state(cfg);
    std::optional<std::string> out = output_flag;
    if (!out && !cfg.output.empty()) out = cfg.output;
    write_output(out, trace_to_json(trace));
}

void cmd_sweep(const std::string& config_path, const std::optional<std::string>& output_flag,
               const std::optional<std::string>& slopes_flag) {
    const SweepSpec spec = parse_sweep_config(read_file(config_path));
    const SweepResult result = run_sweep(spec);
    write_output(output_flag, sweep_csv(result));
    if (slopes_flag) {
        write_output(slopes_flag, slopes_csv(result));
    } else if (!output_flag) {
        std::cout << '\n' << slopes_csv(result);
    } else {
        std::cout << slopes_csv(result);
    }
}

void cmd_histogram(const std::string& input_path, const std::string& scheme_str,
                   std::uint64_t offspring, double epsilon, std::uint64_t seed,
                   const std::optional<std::string>& output_flag) {
    const auto before = parse_histogram_file(read_file(input_path));
    const SelectionScheme scheme = SelectionScheme::parse(scheme_str);
    RandomSource rng(seed);
    const auto after = generational_transform(before, scheme, offspring, epsilon, rng);
    write_output(output_flag, histogram_tsv(before, after));
}

void cmd_pairdist(std::size_t levels, double epsilon, double f_min,
                  const std::optional<std::string>& output_flag) {
    const FitnessGrid grid = FitnessGrid::from_levels(f_min, epsilon, levels);
    const PairDistribution dist = build_pair_distribution(grid);
    std::string text;
    for (std::size_t i = 0; i < levels; ++i) {
        for (std::size_t j = 0; j < levels; ++j) {
            if (j) text += ',';
            text += format_full(dist.prob(i, j));
        }
        text += '\n';
    }
    write_output(output_flag, text);
}

void cmd_tsp(std::size_t cities, std::optional<std::uint64_t> instance_seed, bool asym,
             const std::optional<std::string>& file, std::uint64_t budget, std::size_t seeds,
             std::uint64_t base_seed, const std::optional<std::string>& output_flag) {
    std::string problem_spec;
    if (file) {
        problem_spec = "tsp:file:" + *file;
    } else {
        if (!instance_seed)
            throw ConfigError("either --file or --instance-seed is required");
        problem_spec = "tsp:random:" + std::to_string(cities) + ":" +
                       std::to_string(*instance_seed) + (asym ? ":asym" : "");
    }
    make_problem(problem_spec);  // fail before any run starts

    const std::vector<std::string> schemes = {"fuss", "tournament:2:1"};
    std::string text = "scheme,seed,best_fitness\n";
    for (std::size_t s = 0; s < schemes.size(); ++s) {
        for (std::size_t k = 0; k < seeds; ++k) {
            RunConfig cfg;
            cfg.problem = problem_spec;
            cfg.scheme = schemes[s];
            cfg.budget = budget;
            cfg.seed = RandomSource::derive(base_seed, s, k);
            cfg.use_default_target = false;
            const RunTrace trace = run_steady_state(cfg);
            text += schemes[s];
            text += ',';
            text += std::to_string(cfg.seed);
            text += ',';
            text += format_full(trace.best_fitness);
            text += '\n';
        }
    }
    write_output(output_flag, text);
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"Fitness uniform selection benchmark harness"};
    app.require_subcommand(1);

    // the vendored argument parser has no std::optional bindings; presence
    // is recovered from count() inside the callbacks
    std::string config_path;
    std::string output_path;
    std::string slopes_path;
    const auto given = [](const CLI::App* sub, const std::string& name,
                          const std::string& value) -> std::optional<std::string> {
        if (sub->count(name) == 0) return std::nullopt;
        return value;
    };

    CLI::App* run = app.add_subcommand("run", "Execute one run and write its JSON trace");
    run->add_option("--config", config_path, "key=value config file")->required();
    run->add_option("--output", output_path,
                    "trace destination (default: config's output, else stdout)");

    CLI::App* sweep = app.add_subcommand("sweep", "Execute a sweep and write result CSVs");
    sweep->add_option("--config", config_path, "key=value sweep config file")->required();
    sweep->add_option("--output", output_path, "per-cell CSV destination (default stdout)");
    sweep->add_option("--slopes-output", slopes_path, "scaling-law CSV destination (default stdout)");

    std::string scheme_str = "fuss";
    std::uint64_t offspring = 100000;
    double epsilon = 1.0;
    std::uint64_t seed = 0;
    std::string input_path;

    CLI::App* histogram =
        app.add_subcommand("histogram", "Apply a selection scheme to a fitness histogram");
    histogram->add_option("--input", input_path, "histogram file: 'level count' lines")->required();
    histogram->add_option("--scheme", scheme_str, "selection scheme spec (default fuss)");
    histogram->add_option("--offspring", offspring, "number of selections (default 100000)");
    histogram->add_option("--epsilon", epsilon, "fitness resolution")->required();
    histogram->add_option("--seed", seed, "random seed")->required();
    histogram->add_option("--output", output_path, "TSV destination (default stdout)");

    std::size_t levels = 0;
    double f_min = 0.0;

    CLI::App* pairdist =
        app.add_subcommand("pairdist", "Write the correlated pair probability matrix as CSV");
    pairdist->add_option("--levels", levels, "number of fitness levels (>= 3)")->required();
    pairdist->add_option("--epsilon", epsilon, "grid spacing")->required();
    pairdist->add_option("--f-min", f_min, "lowest grid level (default 0)");
    pairdist->add_option("--output", output_path, "CSV destination (default stdout)");

    std::size_t cities = 50;
    std::uint64_t instance_seed = 0;
    bool asym = false;
    std::string tsp_file;
    std::uint64_t budget = 100000;
    std::size_t n_seeds = 20;
    std::uint64_t base_seed = 0;

    CLI::App* tsp = app.add_subcommand(
        "tsp", "Compare FUSS against tournament selection on a traveling-salesman instance");
    tsp->add_option("--cities", cities, "city count for a random instance (default 50)");
    tsp->add_option("--instance-seed", instance_seed, "seed for the random distance matrix");
    tsp->add_flag("--asym", asym, "draw an asymmetric distance matrix");
    tsp->add_option("--file", tsp_file, "load the instance from a file instead");
    tsp->add_option("--budget", budget, "creations per run (default 100000)");
    tsp->add_option("--seeds", n_seeds, "runs per scheme (default 20)");
    tsp->add_option("--base-seed", base_seed, "base seed for per-run streams")->required();
    tsp->add_option("--output", output_path, "CSV destination (default stdout)");

    run->callback([&]() { cmd_run(config_path, given(run, "--output", output_path)); });
    sweep->callback([&]() {
        cmd_sweep(config_path, given(sweep, "--output", output_path),
                  given(sweep, "--slopes-output", slopes_path));
    });
    histogram->callback([&]() {
        cmd_histogram(input_path, scheme_str, offspring, epsilon, seed,
                      given(histogram, "--output", output_path));
    });
    pairdist->callback([&]() {
        cmd_pairdist(levels, epsilon, f_min, given(pairdist, "--output", output_path));
    });
    tsp->callback([&]() {
        std::optional<std::uint64_t> inst_seed;
        if (tsp->count("--instance-seed")) inst_seed = instance_seed;
        cmd_tsp(cities, inst_seed, asym, given(tsp, "--file", tsp_file), budget, n_seeds,
                base_seed, given(tsp, "--output", output_path));
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("fuss");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace fuss
