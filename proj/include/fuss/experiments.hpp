#pragma once

#include "fuss/engine.hpp"
#include "fuss/selection.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace fuss {

/// One (problem instance, scheme) cell of a sweep.
struct SweepCell {
    std::string family;     // "deceptive2d", "deceptiveNd:3", "line", ...
    std::string params;     // display form, e.g. "delta=0.1" or "N=32"
    double scale = 0.0;     // difficulty scale for log-log fits (delta, or 1/N)
    RunConfig run;          // fully-formed config; seed filled per trial
};

struct SweepSpec {
    std::vector<SweepCell> cells;
    std::size_t trials = 1;
    std::uint64_t base_seed = 1;
    int threads = 0;        // 0: FUSS_THREADS env or hardware default

    void validate() const;  // throws ConfigError
};

struct CellResult {
    SweepCell cell;
    std::vector<std::uint64_t> hit_times;  // per trial; censored entries hold the budget
    std::vector<bool> censored;
    std::uint64_t budget = 0;
    double median_t = 0.0;   // censored values enter as >= budget
    double mean_t = 0.0;
    std::size_t censored_count = 0;
    bool median_censored = false;  // true unless more than half the trials hit
};

struct SlopeRow {
    std::string family;
    std::string scheme;
    double slope = 0.0;
    double stderr_ = 0.0;
    bool defined = false;    // needs >= 3 uncensored medians
};

struct SweepResult {
    std::vector<CellResult> cells;
    std::vector<SlopeRow> slopes;
    std::size_t trials = 0;
    std::uint64_t base_seed = 0;
};

/// Execute trials x cells runs with seeds derived from (base seed, cell
/// index, trial index); results are independent of execution order and of
/// the thread count.
SweepResult run_sweep(const SweepSpec& spec);

struct SlopeFit {
    double slope;
    double stderr_;
    double intercept;
};

/// OLS slope of ln T against ln(1/scale); a 1/scale^2 law fits slope 2.
/// Needs >= 3 points with positive scale and T.
SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& scale_time);

/// Build a synthetic population matching the histogram, apply the scheme
/// offspring_count times (selection only, no variation), and return the
/// offspring fitness histogram. epsilon feeds FUSS and proportionate.
std::map<double, std::uint64_t> generational_transform(
    const std::map<double, std::uint64_t>& histogram, const SelectionScheme& scheme,
    std::uint64_t offspring_count, double epsilon, RandomSource& rng);

/// CSV with one row per cell:
/// problem,params,scheme,pair_mode,p_x,trials,median_T,mean_T,censored,budget
std::string sweep_csv(const SweepResult& result);

/// CSV with one row per fitted scaling law: problem,scheme,slope,stderr
std::string slopes_csv(const SweepResult& result);

/// Histogram transform TSV: level<TAB>before<TAB>after.
std::string histogram_tsv(const std::map<double, std::uint64_t>& before,
                          const std::map<double, std::uint64_t>& after);

/// Round-trip parsers for the emitted files (schema validators).
struct SweepCsvRow {
    std::string problem, params, scheme, pair_mode;
    double p_x;
    std::size_t trials;
    double median_t, mean_t;
    std::size_t censored;
    std::uint64_t budget;
};
std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text);
std::vector<SlopeRow> parse_slopes_csv(const std::string& text);

} // namespace fuss
