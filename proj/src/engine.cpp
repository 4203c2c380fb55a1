#include "fuss/engine.hpp"

#include "fuss/errors.hpp"
#include "fuss/problems.hpp"
#include "parse_util.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fuss {

using detail::format_full;
using detail::format_short;
using detail::parse_int;
using detail::split;

InitRecipe InitRecipe::parse(std::string_view spec) {
    const auto parts = split(spec, ':');
    if (parts.size() != 2) throw ConfigError("expected init uniform:N or min:N");
    InitRecipe r;
    if (parts[0] == "uniform") r.kind = Kind::Uniform;
    else if (parts[0] == "min") r.kind = Kind::Min;
    else throw ConfigError("unknown init kind: '" + parts[0] + "'");
    const long long n = parse_int(parts[1], "init count");
    if (n < 1) throw ConfigError("init count must be positive");
    r.count = static_cast<std::size_t>(n);
    return r;
}

std::string InitRecipe::to_string() const {
    const char* name = kind == Kind::Uniform ? "uniform" : "min";
    return std::string(name) + ":" + std::to_string(count);
}

void RunConfig::finalize() {
    const SelectionScheme s = SelectionScheme::parse(scheme);
    if (!(p_x >= 0.0 && p_x <= 1.0)) throw ConfigError("p_x must lie in [0, 1]");
    if (capacity && *capacity == 0) throw ConfigError("capacity must be positive");
    if (!capacity && s.is_std()) capacity = 100;
    if (init.count == 0) {
        init.kind = InitRecipe::Kind::Uniform;
        init.count = 1;
    }
    if (capacity && init.count > *capacity)
        throw ConfigError("initial population exceeds capacity");
}

std::string RunConfig::canonical() const {
    std::string out;
    out += "problem=" + problem + "\n";
    out += "scheme=" + scheme + "\n";
    out += "pair=" + fuss::to_string(pair_mode) + "\n";
    out += "p_x=" + format_short(p_x) + "\n";
    if (mutate_after_crossover) out += "mutate_after_crossover=true\n";
    out += "budget=" + std::to_string(budget) + "\n";
    if (capacity) {
        out += "capacity=" + std::to_string(*capacity) + "\n";
        out += std::string("deletion=") +
               (deletion == DeletionPolicy::Worst ? "worst" : "most_occupied") + "\n";
    }
    if (init.count != 0) out += "init=" + init.to_string() + "\n";
    out += "seed=" + std::to_string(seed) + "\n";
    if (target) out += "target=" + format_short(*target) + "\n";
    else if (!use_default_target) out += "target=none\n";
    if (zero_epsilon) out += "zero_epsilon=true\n";
    if (!output.empty()) out += "output=" + output + "\n";
    return out;
}

namespace {

constexpr std::size_t kMaxCurvePoints = 10000;

void decimate_curve(std::vector<TracePoint>& curve) {
    if (curve.size() <= kMaxCurvePoints) return;
    const std::size_t stride = (curve.size() + kMaxCurvePoints - 1) / kMaxCurvePoints;
    std::vector<TracePoint> kept;
    kept.reserve(kMaxCurvePoints);
    for (std::size_t i = 0; i < curve.size(); i += stride) kept.push_back(curve[i]);
    if (kept.back().creation != curve.back().creation) kept.push_back(curve.back());
    curve = std::move(kept);
}

} // namespace

RunTrace run_steady_state(const RunConfig& input) {
    RunConfig cfg = input;
    cfg.finalize();

    const auto problem = make_problem(cfg.problem);
    const SelectionScheme scheme = SelectionScheme::parse(cfg.scheme);
    if (cfg.p_x > 0.0 && !problem->has_crossover())
        throw ConfigError("problem '" + cfg.problem + "' defines no crossover");
    if (cfg.pair_mode != PairMode::Independent && scheme.kind != SchemeKind::Fuss &&
        scheme.kind != SchemeKind::RandomSearch)
        throw ConfigError("dependent/correlated pairing applies to FUSS only");

    std::optional<double> target = cfg.target;
    if (!target && cfg.use_default_target) target = problem->default_target();

    const auto grid = problem->grid();
    RandomSource rng(cfg.seed);
    Population pop(cfg.capacity, cfg.deletion);
    PairDistributionCache pair_cache;

    RunTrace trace;
    trace.config = cfg;
    trace.seed = cfg.seed;

    const auto current_epsilon = [&]() -> double {
        if (cfg.zero_epsilon) return 0.0;
        if (grid) return grid->epsilon();
        return pop.effective_epsilon_or_zero();
    };

    std::uint64_t creations = 0;
    double best = -std::numeric_limits<double>::infinity();

    // evaluate + record + insert; true once the target is reached
    const auto create = [&](Genome genome) {
        const double fitness = problem->evaluate(genome);
        ++creations;
        if (fitness > best) {
            best = fitness;
            trace.best_curve.push_back({creations, fitness});
        }
        const bool hit = target && fitness >= *target && !trace.first_hit_time;
        if (hit) trace.first_hit_time = creations;
        pop.add(Individual{std::move(genome), fitness}, rng);
        return hit;
    };

    bool done = false;
    for (std::size_t k = 0; k < cfg.init.count && creations < cfg.budget && !done; ++k) {
        Genome g;
        if (cfg.init.kind == InitRecipe::Kind::Min) {
            const auto base = problem->base_genome();
            if (!base) throw ConfigError("problem '" + cfg.problem + "' has no base genome");
            g = *base;
        } else {
            g = problem->sample(rng);
        }
        done = create(std::move(g));
    }

    while (!done && creations < cfg.budget) {
        const bool cross = cfg.p_x > 0.0 && (cfg.p_x >= 1.0 || rng.coin(cfg.p_x));
        Genome child;
        if (scheme.kind == SchemeKind::RandomSearch) {
            if (cross) {
                const Individual& a = select_uniform(pop, rng);
                const Individual& b = select_uniform(pop, rng);
                child = *problem->crossover(a.genome, b.genome, rng);
                if (cfg.mutate_after_crossover) child = problem->mutate(child, rng);
            } else {
                child = problem->sample(rng);
            }
        } else if (cross) {
            const Individual* a = nullptr;
            const Individual* b = nullptr;
            if (scheme.kind == SchemeKind::Fuss) {
                const PairSample pair =
                    sample_pair(pop, cfg.pair_mode, current_epsilon(), rng, &pair_cache);
                if (pair.correlated_fallback) trace.pair_fallback = true;
                a = pair.first;
                b = pair.second;
            } else {
                a = &select_one(pop, scheme, current_epsilon(), rng);
                b = &select_one(pop, scheme, current_epsilon(), rng);
            }
            child = *problem->crossover(a->genome, b->genome, rng);
            if (cfg.mutate_after_crossover) child = problem->mutate(child, rng);
        } else {
            const Individual& parent = select_one(pop, scheme, current_epsilon(), rng);
            child = problem->mutate(parent.genome, rng);
        }
        done = create(std::move(child));
    }

    decimate_curve(trace.best_curve);
    for (const auto& [f, cf] : pop.occupation_histogram())
        trace.final_histogram.push_back({f, cf.first, cf.second});
    if (creations > 0) trace.best_fitness = best;
    trace.creations = creations;
    return trace;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

std::string trace_to_json(const RunTrace& trace) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json config;
    const RunConfig& c = trace.config;
    config["problem"] = c.problem;
    config["scheme"] = c.scheme;
    config["pair"] = fuss::to_string(c.pair_mode);
    config["p_x"] = c.p_x;
    config["mutate_after_crossover"] = c.mutate_after_crossover;
    config["budget"] = c.budget;
    if (c.capacity) config["capacity"] = *c.capacity;
    else config["capacity"] = nullptr;
    config["deletion"] = c.deletion == DeletionPolicy::Worst ? "worst" : "most_occupied";
    config["init"] = c.init.to_string();
    config["seed"] = c.seed;
    if (c.target) config["target"] = *c.target;
    else config["target"] = nullptr;
    config["use_default_target"] = c.use_default_target;
    config["zero_epsilon"] = c.zero_epsilon;
    config["output"] = c.output;
    j["config"] = std::move(config);

    j["seed"] = trace.seed;
    if (trace.first_hit_time) j["first_hit_time"] = *trace.first_hit_time;
    else j["first_hit_time"] = nullptr;

    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const TracePoint& p : trace.best_curve)
        curve.push_back(nlohmann::ordered_json::array({p.creation, p.fitness}));
    j["best_fitness_curve"] = std::move(curve);

    nlohmann::ordered_json hist = nlohmann::ordered_json::array();
    for (const HistogramRow& row : trace.final_histogram) {
        nlohmann::ordered_json r;
        r["fitness"] = row.fitness;
        r["count"] = row.count;
        r["fraction"] = row.fraction;
        hist.push_back(std::move(r));
    }
    j["final_histogram"] = std::move(hist);

    j["best_fitness"] = trace.best_fitness;
    j["creations"] = trace.creations;
    j["pair_fallback"] = trace.pair_fallback;
    return j.dump(2) + "\n";
}

RunTrace trace_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("trace JSON: ") + e.what());
    }
    try {
        RunTrace trace;
        const auto& config = j.at("config");
        RunConfig& c = trace.config;
        c.problem = config.at("problem").get<std::string>();
        c.scheme = config.at("scheme").get<std::string>();
        c.pair_mode = parse_pair_mode(config.at("pair").get<std::string>());
        c.p_x = config.at("p_x").get<double>();
        c.mutate_after_crossover = config.at("mutate_after_crossover").get<bool>();
        c.budget = config.at("budget").get<std::uint64_t>();
        if (!config.at("capacity").is_null())
            c.capacity = config.at("capacity").get<std::size_t>();
        c.deletion = config.at("deletion").get<std::string>() == "worst"
                         ? DeletionPolicy::Worst
                         : DeletionPolicy::MostOccupied;
        c.init = InitRecipe::parse(config.at("init").get<std::string>());
        c.seed = config.at("seed").get<std::uint64_t>();
        if (!config.at("target").is_null()) c.target = config.at("target").get<double>();
        c.use_default_target = config.at("use_default_target").get<bool>();
        c.zero_epsilon = config.at("zero_epsilon").get<bool>();
        c.output = config.at("output").get<std::string>();

        trace.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("first_hit_time").is_null())
            trace.first_hit_time = j.at("first_hit_time").get<std::uint64_t>();
        for (const auto& p : j.at("best_fitness_curve"))
            trace.best_curve.push_back({p.at(0).get<std::uint64_t>(), p.at(1).get<double>()});
        for (const auto& r : j.at("final_histogram"))
            trace.final_histogram.push_back({r.at("fitness").get<double>(),
                                             r.at("count").get<std::uint64_t>(),
                                             r.at("fraction").get<double>()});
        trace.best_fitness = j.at("best_fitness").get<double>();
        trace.creations = j.at("creations").get<std::uint64_t>();
        trace.pair_fallback = j.at("pair_fallback").get<bool>();
        return trace;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("trace JSON schema: ") + e.what());
    }
}

} // namespace fuss
