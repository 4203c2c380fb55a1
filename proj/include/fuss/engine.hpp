#pragma once

#include "fuss/pairing.hpp"
#include "fuss/population.hpp"
#include "fuss/selection.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fuss {

/// How the initial population is created. count = 0 means a single fresh
/// sample; capacity-limited schemes then grow to capacity by selection, so
/// first-hit comparisons are not dominated by the initial sampling pass.
struct InitRecipe {
    enum class Kind { Uniform, Min };  // fresh samples / copies of the base genome
    Kind kind = Kind::Uniform;
    std::size_t count = 0;

    static InitRecipe parse(std::string_view spec);  // "uniform:N" | "min:N"
    std::string to_string() const;
};

/// Full description of one steady-state run. Defaults follow the scheme:
/// FUSS and random search run the pure model (no capacity), the standard
/// schemes run at capacity 100 with delete-worst.
struct RunConfig {
    std::string problem;                       // canonical problem spec
    std::string scheme = "fuss";               // canonical scheme spec
    PairMode pair_mode = PairMode::Independent;
    double p_x = 0.0;                          // crossover step probability
    bool mutate_after_crossover = false;
    std::uint64_t budget = 0;                  // max creations, initial pop included
    std::optional<std::size_t> capacity;
    DeletionPolicy deletion = DeletionPolicy::Worst;
    InitRecipe init;
    std::uint64_t seed = 0;
    std::optional<double> target;              // success: fitness >= target
    bool use_default_target = true;            // fall back to the problem's optimum
    bool zero_epsilon = false;                 // continuous FUSS eps->0 limit
    std::string output;                        // CLI destination, unused by the engine

    /// Applies scheme-dependent defaults (capacity) and checks ranges.
    void finalize();  // throws ConfigError

    /// Canonical key=value form; parse_config inverts it losslessly.
    std::string canonical() const;
};

struct TracePoint {
    std::uint64_t creation;
    double fitness;
};

struct HistogramRow {
    double fitness;
    std::uint64_t count;
    double fraction;
};

/// Per-run record sufficient to extract the first-hit time and occupation
/// statistics. Serializes to JSON; identical (seed, config) pairs produce
/// byte-identical documents.
struct RunTrace {
    RunConfig config;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> first_hit_time;
    std::vector<TracePoint> best_curve;        // improvements, <= 10^4 points
    std::vector<HistogramRow> final_histogram;
    double best_fitness = 0.0;
    std::uint64_t creations = 0;
    bool pair_fallback = false;                // correlated pairing degraded
};

/// Run one steady-state EA. Each step either selects a pair and recombines
/// (probability p_x) or selects one individual and mutates a copy; the
/// offspring is evaluated and added. Stops at the first individual reaching
/// the target, or when the creation budget is exhausted.
RunTrace run_steady_state(const RunConfig& cfg);

std::string trace_to_json(const RunTrace& trace);

/// Lossless inverse of trace_to_json; throws ConfigError on schema errors.
RunTrace trace_from_json(const std::string& text);

} // namespace fuss
