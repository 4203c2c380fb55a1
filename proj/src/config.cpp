#include "fuss/config.hpp"

#include "fuss/errors.hpp"
#include "fuss/problems.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace fuss {

using detail::format_short;
using detail::parse_double;
using detail::parse_int;
using detail::parse_uint64;
using detail::split;
using detail::trim;

std::vector<KvEntry> parse_kv(const std::string& text) {
    std::vector<KvEntry> entries;
    std::vector<std::string> errors;
    int line_no = 0;
    for (const std::string& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key=value");
            continue;
        }
        KvEntry e;
        e.key = std::string(trim(line.substr(0, eq)));
        e.value = std::string(trim(line.substr(eq + 1)));
        e.line = line_no;
        if (e.key.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": empty key");
            continue;
        }
        entries.push_back(std::move(e));
    }
    if (!errors.empty()) {
        std::string all;
        for (const std::string& e : errors) {
            if (!all.empty()) all += "\n";
            all += e;
        }
        throw ConfigError(all);
    }
    return entries;
}

namespace {

/// Collects (key, line, reason) triples and throws them all at once.
class ErrorList {
public:
    void add(const std::string& key, int line, const std::string& reason) {
        std::string msg = "key '" + key + "'";
        if (line > 0) msg += " (line " + std::to_string(line) + ")";
        msg += ": " + reason;
        errors_.push_back(std::move(msg));
    }
    void check() const {
        if (errors_.empty()) return;
        std::string all;
        for (const std::string& e : errors_) {
            if (!all.empty()) all += "\n";
            all += e;
        }
        throw ConfigError(all);
    }

private:
    std::vector<std::string> errors_;
};

class KvMap {
public:
    explicit KvMap(const std::vector<KvEntry>& entries, ErrorList& errors) {
        for (const KvEntry& e : entries) {
            if (map_.count(e.key))
                errors.add(e.key, e.line, "duplicate key");
            else
                map_.emplace(e.key, e);
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    const KvEntry* get(const std::string& key) {
        const auto it = map_.find(key);
        if (it == map_.end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    void require_no_unknown(ErrorList& errors) const {
        for (const auto& [key, entry] : map_)
            if (!used_.count(key)) errors.add(key, entry.line, "unknown key");
    }

private:
    std::map<std::string, KvEntry> map_;
    std::set<std::string> used_;
};

bool parse_bool(const KvEntry& e, ErrorList& errors) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    errors.add(e.key, e.line, "expected true or false");
    return false;
}

/// Default creation budgets where the problem family defines one.
std::optional<std::uint64_t> auto_budget(const std::string& problem_spec) {
    const auto parts = split(problem_spec, ':');
    const auto budget_for = [](double base, double delta, int power) {
        return static_cast<std::uint64_t>(std::ceil(base / std::pow(delta, power)));
    };
    try {
        if (parts[0] == "deceptive2d" && parts.size() >= 2)
            return budget_for(50.0, parse_double(parts[1], "width"), 2);
        if (parts[0] == "deceptiveNd" && parts.size() >= 3) {
            const int dim = static_cast<int>(parse_int(parts[1], "dimension"));
            return budget_for(20.0, parse_double(parts[2], "width"), dim);
        }
        if (parts[0] == "line" && parts.size() >= 2) {
            const auto n = static_cast<std::uint64_t>(parse_int(parts[1], "N"));
            return 50 * n * n;
        }
    } catch (const ConfigError&) {
        return std::nullopt;  // make_problem reports the real parse error
    }
    return std::nullopt;
}

/// Keys shared between single-run and per-cell sweep settings.
struct CommonSettings {
    PairMode pair = PairMode::Independent;
    double p_x = 0.0;
    bool mutate_after_crossover = false;
    std::optional<std::size_t> capacity;
    std::optional<DeletionPolicy> deletion;
    std::optional<InitRecipe> init;
    std::optional<double> target;
    bool use_default_target = true;
    bool zero_epsilon = false;
};

CommonSettings read_common(KvMap& kv, ErrorList& errors) {
    CommonSettings s;
    if (const KvEntry* e = kv.get("pair")) {
        try {
            s.pair = parse_pair_mode(e->value);
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }
    if (const KvEntry* e = kv.get("p_x")) {
        try {
            s.p_x = parse_double(e->value, "p_x");
            if (!(s.p_x >= 0.0 && s.p_x <= 1.0))
                errors.add(e->key, e->line, "must lie in [0, 1]");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }
    if (const KvEntry* e = kv.get("mutate_after_crossover"))
        s.mutate_after_crossover = parse_bool(*e, errors);
    if (const KvEntry* e = kv.get("capacity")) {
        try {
            const long long v = parse_int(e->value, "capacity");
            if (v < 1) errors.add(e->key, e->line, "must be positive");
            else s.capacity = static_cast<std::size_t>(v);
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }
    if (const KvEntry* e = kv.get("deletion")) {
        if (e->value == "worst") s.deletion = DeletionPolicy::Worst;
        else if (e->value == "most_occupied") s.deletion = DeletionPolicy::MostOccupied;
        else errors.add(e->key, e->line, "expected worst or most_occupied");
    }
    if (const KvEntry* e = kv.get("init")) {
        try {
            s.init = InitRecipe::parse(e->value);
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }
    if (const KvEntry* e = kv.get("target")) {
        if (e->value == "none") {
            s.use_default_target = false;
        } else {
            try {
                s.target = parse_double(e->value, "target");
            } catch (const ConfigError& err) {
                errors.add(e->key, e->line, err.what());
            }
        }
    }
    if (const KvEntry* e = kv.get("zero_epsilon")) s.zero_epsilon = parse_bool(*e, errors);
    return s;
}

void apply_common(RunConfig& cfg, const CommonSettings& s, const SelectionScheme& scheme) {
    cfg.pair_mode = s.pair;
    cfg.p_x = s.p_x;
    cfg.mutate_after_crossover = s.mutate_after_crossover;
    cfg.capacity = s.capacity;
    // standard schemes delete the worst; FUSS under memory pressure thins
    // the most occupied level
    cfg.deletion = s.deletion ? *s.deletion
                              : (scheme.is_std() ? DeletionPolicy::Worst
                                                 : DeletionPolicy::MostOccupied);
    if (s.init) cfg.init = *s.init;
    cfg.target = s.target;
    cfg.use_default_target = s.use_default_target;
    cfg.zero_epsilon = s.zero_epsilon;
}

SelectionScheme check_scheme(const KvEntry* e, const std::string& fallback,
                             std::string& out, ErrorList& errors) {
    out = e ? e->value : fallback;
    try {
        return SelectionScheme::parse(out);
    } catch (const ConfigError& err) {
        if (e) errors.add(e->key, e->line, err.what());
        else errors.add("scheme", 0, err.what());
        return SelectionScheme{};
    }
}

RunConfig build_run_config(KvMap& kv, ErrorList& errors) {
    RunConfig cfg;

    const KvEntry* problem = kv.get("problem");
    if (!problem) errors.add("problem", 0, "missing required key");
    else cfg.problem = problem->value;

    const SelectionScheme scheme = check_scheme(kv.get("scheme"), "fuss", cfg.scheme, errors);
    apply_common(cfg, read_common(kv, errors), scheme);

    if (const KvEntry* e = kv.get("budget")) {
        try {
            cfg.budget = parse_uint64(e->value, "budget");
            if (cfg.budget == 0) errors.add(e->key, e->line, "must be positive");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    } else if (problem) {
        const auto def = auto_budget(problem->value);
        if (def) cfg.budget = *def;
        else errors.add("budget", 0, "missing required key (no default for this problem)");
    }

    if (const KvEntry* e = kv.get("seed")) {
        try {
            cfg.seed = parse_uint64(e->value, "seed");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    } else {
        errors.add("seed", 0, "missing required key (seeds are always explicit)");
    }

    if (const KvEntry* e = kv.get("output")) cfg.output = e->value;

    kv.require_no_unknown(errors);
    errors.check();

    make_problem(cfg.problem);  // validates the problem string
    cfg.finalize();
    return cfg;
}

SweepSpec build_sweep_spec(KvMap& kv, ErrorList& errors) {
    SweepSpec spec;

    std::string family;
    const KvEntry* problem = kv.get("problem");
    if (!problem) errors.add("problem", 0, "missing required key");
    else family = problem->value;

    const bool is_line = split(family, ':')[0] == "line";
    if (split(family, ':')[0] == "tsp" && problem)
        errors.add(problem->key, problem->line,
                   "tsp has no difficulty scale; use the tsp subcommand");

    std::vector<double> scales;        // delta values, or N values for line
    if (const KvEntry* e = kv.get(is_line ? "n" : "delta")) {
        for (const std::string& part : split(e->value, ',')) {
            try {
                const double v = is_line
                                     ? static_cast<double>(parse_int(part, "n"))
                                     : parse_double(part, "delta");
                if (!(v > 0.0)) errors.add(e->key, e->line, "values must be positive");
                scales.push_back(v);
            } catch (const ConfigError& err) {
                errors.add(e->key, e->line, err.what());
            }
        }
        if (is_line) {
            if (!std::is_sorted(scales.begin(), scales.end()) ||
                std::adjacent_find(scales.begin(), scales.end()) != scales.end())
                errors.add(e->key, e->line, "N values must be strictly increasing");
        } else {
            const auto desc = [](double a, double b) { return a > b; };
            if (!std::is_sorted(scales.begin(), scales.end(), desc) ||
                std::adjacent_find(scales.begin(), scales.end()) != scales.end())
                errors.add(e->key, e->line, "delta values must be strictly decreasing");
        }
    } else if (problem) {
        errors.add(is_line ? "n" : "delta", 0, "missing required key");
    }

    std::vector<std::string> schemes;
    if (const KvEntry* e = kv.get("scheme")) {
        for (const std::string& part : split(e->value, ',')) {
            try {
                SelectionScheme::parse(part);
                schemes.push_back(part);
            } catch (const ConfigError& err) {
                errors.add(e->key, e->line, err.what());
            }
        }
    } else {
        errors.add("scheme", 0, "missing required key");
    }

    const CommonSettings common = read_common(kv, errors);

    std::optional<std::uint64_t> budget;
    if (const KvEntry* e = kv.get("budget")) {
        try {
            budget = parse_uint64(e->value, "budget");
            if (*budget == 0) errors.add(e->key, e->line, "must be positive");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }

    if (const KvEntry* e = kv.get("trials")) {
        try {
            spec.trials = static_cast<std::size_t>(parse_uint64(e->value, "trials"));
            if (spec.trials < 1) errors.add(e->key, e->line, "must be at least 1");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }
    if (const KvEntry* e = kv.get("base_seed")) {
        try {
            spec.base_seed = parse_uint64(e->value, "base_seed");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    } else {
        errors.add("base_seed", 0, "missing required key (seeds are always explicit)");
    }
    if (const KvEntry* e = kv.get("threads")) {
        try {
            spec.threads = static_cast<int>(parse_int(e->value, "threads"));
            if (spec.threads < 0) errors.add(e->key, e->line, "must be non-negative");
        } catch (const ConfigError& err) {
            errors.add(e->key, e->line, err.what());
        }
    }

    kv.require_no_unknown(errors);
    errors.check();

    for (const std::string& scheme_str : schemes) {
        const SelectionScheme scheme = SelectionScheme::parse(scheme_str);
        for (const double v : scales) {
            SweepCell cell;
            cell.family = family;
            if (is_line) {
                const auto n = static_cast<long long>(v);
                cell.params = "N=" + std::to_string(n);
                cell.scale = 1.0 / v;
                cell.run.problem = family + ":" + std::to_string(n);
            } else {
                cell.params = "delta=" + format_short(v);
                cell.scale = v;
                cell.run.problem = family + ":" + format_short(v);
            }
            cell.run.scheme = scheme_str;
            apply_common(cell.run, common, scheme);
            // Sweeps start from the problem's base point so first-hit medians
            // measure search dynamics rather than initialization luck.
            if (!common.init) cell.run.init = InitRecipe{InitRecipe::Kind::Min, 1};
            if (budget) {
                cell.run.budget = *budget;
            } else {
                const auto def = auto_budget(cell.run.problem);
                if (!def)
                    throw ConfigError("key 'budget': missing required key (no default for '" +
                                      cell.run.problem + "')");
                cell.run.budget = *def;
            }
            make_problem(cell.run.problem);  // validates early, per cell
            cell.run.finalize();
            spec.cells.push_back(std::move(cell));
        }
    }
    spec.validate();
    return spec;
}

} // namespace

ParsedConfig parse_config(const std::string& text) {
    const auto entries = parse_kv(text);
    ErrorList errors;
    KvMap kv(entries, errors);
    if (kv.has("trials")) return build_sweep_spec(kv, errors);
    return build_run_config(kv, errors);
}

RunConfig parse_run_config(const std::string& text) {
    auto parsed = parse_config(text);
    if (auto* cfg = std::get_if<RunConfig>(&parsed)) return std::move(*cfg);
    throw ConfigError("expected a run config, found a sweep (has 'trials')");
}

SweepSpec parse_sweep_config(const std::string& text) {
    auto parsed = parse_config(text);
    if (auto* spec = std::get_if<SweepSpec>(&parsed)) return std::move(*spec);
    throw ConfigError("expected a sweep config (missing 'trials')");
}

} // namespace fuss
