#include "fuss/experiments.hpp"

#include "fuss/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace fuss {

using detail::format_full;
using detail::parse_double;
using detail::parse_int;
using detail::parse_uint64;
using detail::split;
using detail::trim;

void SweepSpec::validate() const {
    if (cells.empty()) throw ConfigError("sweep has no cells");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (threads < 0) throw ConfigError("threads must be non-negative");
    for (const SweepCell& cell : cells) {
        if (cell.run.budget < 1) throw ConfigError("cell budget must be at least 1");
        if (!(cell.scale > 0.0)) throw ConfigError("cell scale must be positive");
    }
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FUSS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v < 1) throw ConfigError("FUSS_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

double median_of(std::vector<std::uint64_t> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return static_cast<double>(values[n / 2]);
    return (static_cast<double>(values[n / 2 - 1]) + static_cast<double>(values[n / 2])) / 2.0;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();

    const std::size_t n_cells = spec.cells.size();
    const std::size_t n_tasks = n_cells * spec.trials;
    std::vector<std::uint64_t> hits(n_tasks, 0);
    std::vector<char> censored(n_tasks, 0);

    const auto run_task = [&](std::size_t task) {
        const std::size_t ci = task / spec.trials;
        const std::size_t ti = task % spec.trials;
        RunConfig cfg = spec.cells[ci].run;
        cfg.seed = RandomSource::derive(spec.base_seed, ci, ti);
        const RunTrace trace = run_steady_state(cfg);
        if (trace.first_hit_time) {
            hits[task] = *trace.first_hit_time;
        } else {
            hits[task] = cfg.budget;
            censored[task] = 1;
        }
    };

    const int threads = std::min<int>(resolve_threads(spec.threads),
                                      static_cast<int>(n_tasks));
    if (threads <= 1) {
        for (std::size_t task = 0; task < n_tasks; ++task) run_task(task);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        const auto worker = [&] {
            for (;;) {
                const std::size_t task = next.fetch_add(1);
                if (task >= n_tasks) return;
                try {
                    run_task(task);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    SweepResult result;
    result.trials = spec.trials;
    result.base_seed = spec.base_seed;
    result.cells.reserve(n_cells);
    for (std::size_t ci = 0; ci < n_cells; ++ci) {
        CellResult cr;
        cr.cell = spec.cells[ci];
        cr.budget = spec.cells[ci].run.budget;
        cr.hit_times.assign(hits.begin() + static_cast<std::ptrdiff_t>(ci * spec.trials),
                            hits.begin() + static_cast<std::ptrdiff_t>((ci + 1) * spec.trials));
        cr.censored.reserve(spec.trials);
        for (std::size_t ti = 0; ti < spec.trials; ++ti)
            cr.censored.push_back(censored[ci * spec.trials + ti] != 0);
        cr.censored_count = static_cast<std::size_t>(
            std::count(cr.censored.begin(), cr.censored.end(), true));
        cr.median_t = median_of(cr.hit_times);
        double sum = 0.0;
        for (std::uint64_t t : cr.hit_times) sum += static_cast<double>(t);
        cr.mean_t = sum / static_cast<double>(spec.trials);
        const std::size_t uncensored = spec.trials - cr.censored_count;
        cr.median_censored = !(2 * uncensored > spec.trials);
        result.cells.push_back(std::move(cr));
    }

    std::stable_sort(result.cells.begin(), result.cells.end(),
                     [](const CellResult& a, const CellResult& b) {
                         if (a.cell.family != b.cell.family)
                             return a.cell.family < b.cell.family;
                         const std::string sa = a.cell.run.scheme;
                         const std::string sb = b.cell.run.scheme;
                         if (sa != sb) return sa < sb;
                         return a.cell.scale > b.cell.scale;
                     });

    // one slope row per (family, scheme), defined when at least three cells
    // have an uncensored median
    for (const CellResult& cr : result.cells) {
        const auto match = [&](const SlopeRow& row) {
            return row.family == cr.cell.family && row.scheme == cr.cell.run.scheme;
        };
        if (std::any_of(result.slopes.begin(), result.slopes.end(), match)) continue;
        std::vector<std::pair<double, double>> points;
        for (const CellResult& other : result.cells)
            if (other.cell.family == cr.cell.family &&
                other.cell.run.scheme == cr.cell.run.scheme && !other.median_censored &&
                other.median_t > 0.0)
                points.emplace_back(other.cell.scale, other.median_t);
        SlopeRow row;
        row.family = cr.cell.family;
        row.scheme = cr.cell.run.scheme;
        if (points.size() >= 3) {
            const SlopeFit fit = fit_loglog_slope(points);
            row.slope = fit.slope;
            row.stderr_ = fit.stderr_;
            row.defined = true;
        }
        result.slopes.push_back(std::move(row));
    }
    return result;
}

SlopeFit fit_loglog_slope(const std::vector<std::pair<double, double>>& scale_time) {
    if (scale_time.size() < 3) throw ConfigError("slope fit needs at least 3 points");
    const auto n = static_cast<double>(scale_time.size());
    std::vector<double> xs, ys;
    xs.reserve(scale_time.size());
    ys.reserve(scale_time.size());
    for (const auto& [scale, t] : scale_time) {
        if (!(scale > 0.0) || !(t > 0.0))
            throw ConfigError("slope fit needs positive scales and times");
        xs.push_back(-std::log(scale));
        ys.push_back(std::log(t));
    }
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= n;
    y_mean /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
    }
    if (!(sxx > 0.0)) throw ConfigError("slope fit needs distinct scales");

    SlopeFit fit{};
    fit.slope = sxy / sxx;
    fit.intercept = y_mean - fit.slope * x_mean;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ssr += r * r;
    }
    fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

std::map<double, std::uint64_t> generational_transform(
    const std::map<double, std::uint64_t>& histogram, const SelectionScheme& scheme,
    std::uint64_t offspring_count, double epsilon, RandomSource& rng) {
    if (scheme.kind == SchemeKind::RandomSearch)
        throw ConfigError("the generational transform needs a selection scheme");
    Population pop;
    for (const auto& [f, count] : histogram)
        for (std::uint64_t k = 0; k < count; ++k)
            pop.add(Individual{IntScalar(0), f}, rng);
    if (pop.empty()) throw ConfigError("empty histogram");

    std::map<double, std::uint64_t> out;
    for (std::uint64_t k = 0; k < offspring_count; ++k)
        ++out[select_one(pop, scheme, epsilon, rng).fitness];
    return out;
}

// ---------------------------------------------------------------------------
// File formats
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kSweepHeader =
    "problem,params,scheme,pair_mode,p_x,trials,median_T,mean_T,censored,budget";
constexpr const char* kSlopesHeader = "problem,scheme,slope,stderr";

} // namespace

std::string sweep_csv(const SweepResult& result) {
    std::string out = std::string(kSweepHeader) + "\n";
    for (const CellResult& cr : result.cells) {
        out += cr.cell.family + ",";
        out += cr.cell.params + ",";
        out += cr.cell.run.scheme + ",";
        out += to_string(cr.cell.run.pair_mode) + ",";
        out += format_full(cr.cell.run.p_x) + ",";
        out += std::to_string(result.trials) + ",";
        out += format_full(cr.median_t) + ",";
        out += format_full(cr.mean_t) + ",";
        out += std::to_string(cr.censored_count) + ",";
        out += std::to_string(cr.budget) + "\n";
    }
    return out;
}

std::string slopes_csv(const SweepResult& result) {
    std::string out = std::string(kSlopesHeader) + "\n";
    for (const SlopeRow& row : result.slopes) {
        out += row.family + "," + row.scheme + ",";
        if (row.defined) out += format_full(row.slope) + "," + format_full(row.stderr_);
        else out += "nan,nan";
        out += "\n";
    }
    return out;
}

std::string histogram_tsv(const std::map<double, std::uint64_t>& before,
                          const std::map<double, std::uint64_t>& after) {
    std::map<double, std::pair<std::uint64_t, std::uint64_t>> merged;
    for (const auto& [f, c] : before) merged[f].first = c;
    for (const auto& [f, c] : after) merged[f].second = c;
    std::string out = "level\tbefore\tafter\n";
    for (const auto& [f, counts] : merged)
        out += format_full(f) + "\t" + std::to_string(counts.first) + "\t" +
               std::to_string(counts.second) + "\n";
    return out;
}

namespace {

std::vector<std::string> non_empty_lines(const std::string& text) {
    std::vector<std::string> lines;
    for (const std::string& raw : split(text, '\n')) {
        const auto t = trim(raw);
        if (!t.empty()) lines.emplace_back(t);
    }
    return lines;
}

} // namespace

std::vector<SweepCsvRow> parse_sweep_csv(const std::string& text) {
    const auto lines = non_empty_lines(text);
    if (lines.empty() || lines[0] != kSweepHeader)
        throw ConfigError("sweep CSV: missing or wrong header");
    std::vector<SweepCsvRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        if (f.size() != 10)
            throw ConfigError("sweep CSV line " + std::to_string(i + 1) +
                              ": expected 10 fields");
        SweepCsvRow row;
        row.problem = f[0];
        row.params = f[1];
        row.scheme = f[2];
        row.pair_mode = f[3];
        row.p_x = parse_double(f[4], "sweep CSV p_x");
        row.trials = static_cast<std::size_t>(parse_uint64(f[5], "sweep CSV trials"));
        row.median_t = parse_double(f[6], "sweep CSV median_T");
        row.mean_t = parse_double(f[7], "sweep CSV mean_T");
        row.censored = static_cast<std::size_t>(parse_uint64(f[8], "sweep CSV censored"));
        row.budget = parse_uint64(f[9], "sweep CSV budget");
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SlopeRow> parse_slopes_csv(const std::string& text) {
    const auto lines = non_empty_lines(text);
    if (lines.empty() || lines[0] != kSlopesHeader)
        throw ConfigError("slopes CSV: missing or wrong header");
    std::vector<SlopeRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        if (f.size() != 4)
            throw ConfigError("slopes CSV line " + std::to_string(i + 1) +
                              ": expected 4 fields");
        SlopeRow row;
        row.family = f[0];
        row.scheme = f[1];
        row.slope = parse_double(f[2], "slopes CSV slope");
        row.stderr_ = parse_double(f[3], "slopes CSV stderr");
        row.defined = !std::isnan(row.slope);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace fuss
