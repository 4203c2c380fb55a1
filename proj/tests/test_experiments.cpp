#include "fuss/errors.hpp"
#include "fuss/experiments.hpp"
#include "fuss/selection.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <cmath>
#include <cstdlib>

using namespace fuss;
using testsupport::chi_square_pvalue;

TEST_SUITE_BEGIN("experiments");

static SweepCell make_cell(const std::string& family, const std::string& problem, double scale,
                           const std::string& scheme, std::uint64_t budget,
                           const std::string& params) {
    SweepCell cell;
    cell.family = family;
    cell.params = params;
    cell.scale = scale;
    cell.run.problem = problem;
    cell.run.scheme = scheme;
    cell.run.budget = budget;
    if (problem.rfind("line:", 0) == 0) cell.run.init = InitRecipe{InitRecipe::Kind::Min, 1};
    cell.run.finalize();
    return cell;
}

TEST_CASE("loglog slope recovers exact power laws") {
    const std::vector<std::pair<double, double>> sq = {
        {0.2, 25.0}, {0.1, 100.0}, {0.05, 400.0}};
    CHECK(fit_loglog_slope(sq).slope == doctest::Approx(2.0).epsilon(1e-9));

    const std::vector<std::pair<double, double>> lin = {
        {0.2, 35.0}, {0.1, 70.0}, {0.05, 140.0}, {0.025, 280.0}};
    const SlopeFit fit = fit_loglog_slope(lin);
    CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.stderr_ == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("loglog slope tolerates multiplicative noise") {
    const double noise[] = {1.05, 0.92, 1.08, 0.97};
    std::vector<std::pair<double, double>> pts;
    int i = 0;
    for (const double d : {0.2, 0.1, 0.05, 0.025}) {
        pts.push_back({d, noise[i++] / (d * d)});
    }
    CHECK(fit_loglog_slope(pts).slope == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("loglog slope needs three positive points") {
    CHECK_THROWS_AS(fit_loglog_slope({{0.2, 25.0}, {0.1, 100.0}}), ConfigError);
    CHECK_THROWS_AS(fit_loglog_slope({{0.2, 25.0}, {0.1, 0.0}, {0.05, 400.0}}), ConfigError);
    CHECK_THROWS_AS(fit_loglog_slope({{0.2, 25.0}, {0.2, 30.0}, {0.2, 28.0}}), ConfigError);
}

TEST_CASE("sweep spec validation") {
    SweepSpec empty;
    CHECK_THROWS_AS(empty.validate(), ConfigError);

    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:4", 0.25, "fuss", 100, "N=4"));
    spec.trials = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.trials = 1;
    spec.threads = -1;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.threads = 0;
    spec.validate();
}

TEST_CASE("single tiny cell sweeps censor cleanly") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:50", 0.02, "fuss", 3, "N=50"));
    spec.trials = 4;
    spec.base_seed = 5;
    spec.threads = 1;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 1);
    const CellResult& cr = result.cells[0];
    CHECK(cr.censored_count == 4);
    CHECK(cr.median_censored);
    CHECK(cr.median_t == 3.0);
    for (const auto t : cr.hit_times) CHECK(t == 3);
    for (const bool c : cr.censored) CHECK(c);
    REQUIRE(result.slopes.size() == 1);
    CHECK_FALSE(result.slopes[0].defined);
}

TEST_CASE("sweep results are independent of the thread count") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:4", 0.25, "fuss", 500, "N=4"));
    spec.cells.push_back(make_cell("line", "line:8", 0.125, "fuss", 500, "N=8"));
    spec.trials = 6;
    spec.base_seed = 11;
    spec.threads = 1;
    const std::string csv_seq = sweep_csv(run_sweep(spec));
    spec.threads = 3;
    const std::string csv_par = sweep_csv(run_sweep(spec));
    CHECK(csv_seq == csv_par);
}

TEST_CASE("sweep honors the threads environment variable") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:4", 0.25, "fuss", 500, "N=4"));
    spec.trials = 2;
    spec.base_seed = 3;
    spec.threads = 1;
    const std::string base = sweep_csv(run_sweep(spec));
    setenv("FUSS_THREADS", "2", 1);
    spec.threads = 0;
    CHECK(sweep_csv(run_sweep(spec)) == base);
    setenv("FUSS_THREADS", "zero", 1);
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
    unsetenv("FUSS_THREADS");
}

TEST_CASE("per-trial seeds differ across cells and trials") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:6", 1.0 / 6, "fuss", 2000, "N=6"));
    spec.cells.push_back(make_cell("line", "line:6", 1.0 / 6, "fuss", 2000, "N=6"));
    spec.trials = 5;
    spec.base_seed = 17;
    spec.threads = 1;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.cells.size() == 2);
    // identical cells with different derived seeds: same distribution, not
    // the same numbers
    CHECK(result.cells[0].hit_times != result.cells[1].hit_times);
}

TEST_CASE("sweep rows sort by problem, scheme, then difficulty") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("deceptive2d", "deceptive2d:0.1", 0.1, "random", 40, "delta=0.1"));
    spec.cells.push_back(make_cell("deceptive2d", "deceptive2d:0.2", 0.2, "random", 40, "delta=0.2"));
    spec.cells.push_back(make_cell("deceptive2d", "deceptive2d:0.1", 0.1, "fuss", 40, "delta=0.1"));
    spec.cells.push_back(make_cell("deceptive2d", "deceptive2d:0.2", 0.2, "fuss", 40, "delta=0.2"));
    spec.trials = 2;
    spec.base_seed = 23;
    spec.threads = 1;
    const auto rows = parse_sweep_csv(sweep_csv(run_sweep(spec)));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].scheme == "fuss");
    CHECK(rows[0].params == "delta=0.2");
    CHECK(rows[1].scheme == "fuss");
    CHECK(rows[1].params == "delta=0.1");
    CHECK(rows[2].scheme == "random");
    CHECK(rows[2].params == "delta=0.2");
}

TEST_CASE("slopes appear once three uncensored medians exist") {
    SweepSpec spec;
    for (const int n : {2, 4, 8})
        spec.cells.push_back(make_cell("line", "line:" + std::to_string(n), 1.0 / n, "fuss",
                                       50L * n * n, "N=" + std::to_string(n)));
    spec.trials = 5;
    spec.base_seed = 29;
    spec.threads = 1;
    const SweepResult result = run_sweep(spec);
    REQUIRE(result.slopes.size() == 1);
    CHECK(result.slopes[0].defined);
    CHECK(result.slopes[0].family == "line");
    CHECK(result.slopes[0].scheme == "fuss");
    CHECK(std::isfinite(result.slopes[0].slope));

    const auto parsed = parse_slopes_csv(slopes_csv(result));
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].defined);
    CHECK(parsed[0].slope == doctest::Approx(result.slopes[0].slope));
}

TEST_CASE("csv round-trips preserve every field") {
    SweepSpec spec;
    spec.cells.push_back(make_cell("line", "line:4", 0.25, "tournament:2:1", 300, "N=4"));
    spec.trials = 3;
    spec.base_seed = 31;
    spec.threads = 1;
    const SweepResult result = run_sweep(spec);
    const std::string csv = sweep_csv(result);
    const auto rows = parse_sweep_csv(csv);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].problem == "line");
    CHECK(rows[0].scheme == "tournament:2:1");
    CHECK(rows[0].pair_mode == "independent");
    CHECK(rows[0].trials == 3);
    CHECK(rows[0].median_t == result.cells[0].median_t);
    CHECK(rows[0].mean_t == result.cells[0].mean_t);
    CHECK(rows[0].censored == result.cells[0].censored_count);
    CHECK(rows[0].budget == 300);

    CHECK_THROWS_AS(parse_sweep_csv("bogus header\n1,2,3"), ConfigError);
    CHECK_THROWS_AS(parse_slopes_csv("x\n"), ConfigError);
}

TEST_CASE("uniform transform resamples the input shape") {
    const std::map<double, std::uint64_t> before = {{1.0, 100}, {2.0, 300}};
    RandomSource rng(37);
    const auto after = generational_transform(before, SelectionScheme::parse("uniform"), 8000,
                                              1.0, rng);
    std::uint64_t total = 0;
    for (const auto& [f, c] : after) total += c;
    CHECK(total == 8000);
    const double stat = testsupport::chi_square_stat(
        {static_cast<double>(after.at(1.0)), static_cast<double>(after.at(2.0))},
        {2000.0, 6000.0});
    CHECK(chi_square_pvalue(stat, 1.0) > 0.001);
}

TEST_CASE("truncation transform zeroes the lower levels") {
    const std::map<double, std::uint64_t> before = {
        {1.0, 100}, {2.0, 100}, {3.0, 100}, {4.0, 100}};
    RandomSource rng(38);
    const auto after = generational_transform(before, SelectionScheme::parse("truncation:0.5"),
                                              5000, 1.0, rng);
    CHECK(after.count(1.0) == 0);
    CHECK(after.count(2.0) == 0);
    CHECK(after.at(3.0) + after.at(4.0) == 5000);
}

TEST_CASE("fuss transform flattens toward the analytic law") {
    // bell-shaped histogram over 7 levels
    const std::map<double, std::uint64_t> before = {{0.0, 2},  {1.0, 20}, {2.0, 80}, {3.0, 120},
                                                    {4.0, 80}, {5.0, 20}, {6.0, 2}};
    const Population pop = testsupport::make_population(
        {{0.0, 2}, {1.0, 20}, {2.0, 80}, {3.0, 120}, {4.0, 80}, {5.0, 20}, {6.0, 2}});
    const auto expected_probs = fuss_selection_probabilities(pop, 1.0);

    RandomSource rng(39);
    const std::uint64_t offspring = 100000;
    const auto after =
        generational_transform(before, SelectionScheme::parse("fuss"), offspring, 1.0, rng);

    std::vector<double> observed, expected;
    for (const auto& [f, p] : expected_probs) {
        observed.push_back(after.count(f) ? static_cast<double>(after.at(f)) : 0.0);
        expected.push_back(p * static_cast<double>(offspring));
    }
    const double stat = testsupport::chi_square_stat(observed, expected);
    CHECK(chi_square_pvalue(stat, static_cast<double>(observed.size() - 1)) > 0.001);

    // flatter than the input: max/min occupancy ratio shrinks
    const double before_ratio = 120.0 / 2.0;
    double after_min = 1e18, after_max = 0.0;
    for (const auto& [f, c] : after) {
        after_min = std::min(after_min, static_cast<double>(c));
        after_max = std::max(after_max, static_cast<double>(c));
    }
    CHECK(after_max / after_min < before_ratio);
}

TEST_CASE("transform rejects random search and empty input") {
    RandomSource rng(40);
    CHECK_THROWS_AS(generational_transform({{1.0, 5}}, SelectionScheme::parse("random"), 10, 1.0,
                                           rng),
                    ConfigError);
    CHECK_THROWS_AS(generational_transform({}, SelectionScheme::parse("fuss"), 10, 1.0, rng),
                    ConfigError);
}

TEST_CASE("histogram tsv merges levels and zero-fills") {
    const std::string tsv = histogram_tsv({{1.0, 5}, {2.0, 7}}, {{2.0, 3}, {4.0, 9}});
    CHECK(tsv ==
          "level\tbefore\tafter\n"
          "1\t5\t0\n"
          "2\t7\t3\n"
          "4\t0\t9\n");
}

TEST_SUITE_END();
