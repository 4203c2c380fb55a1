#include "fuss/problems.hpp"

#include "fuss/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fuss {

using detail::format_full;
using detail::format_short;
using detail::parse_double;
using detail::parse_int;
using detail::parse_uint64;
using detail::split;

// ---------------------------------------------------------------------------
// Deceptive feature problems
// ---------------------------------------------------------------------------

DeceptiveParams DeceptiveParams::with_defaults(int dim, double width) {
    static constexpr double cycle[3] = {0.4, 0.2, 0.6};
    DeceptiveParams p;
    p.dim = dim;
    p.width = width;
    p.offsets.reserve(static_cast<std::size_t>(dim > 0 ? dim : 0));
    for (int d = 0; d < dim; ++d) p.offsets.push_back(cycle[d % 3]);
    return p;
}

void DeceptiveParams::validate() const {
    if (dim < 2) throw ConfigError("deceptive problem needs dimension >= 2");
    if (!(width > 0.0 && width < 0.5))
        throw ConfigError("feature width must lie in (0, 0.5)");
    if (offsets.size() != static_cast<std::size_t>(dim))
        throw ConfigError("deceptive problem needs one offset per dimension");
    for (double a : offsets)
        if (!(a >= 0.0 && a + width <= 1.0))
            throw ConfigError("feature strip must fit inside [0, 1]");
}

int chi(const RealVector& x, int d, const DeceptiveParams& p) {
    const double a = p.offsets[static_cast<std::size_t>(d)];
    const double xd = x[static_cast<std::size_t>(d)];
    return (xd >= a && xd <= a + p.width) ? 1 : 0;
}

int fitness_2d(double x, double y, const DeceptiveParams& p) {
    const RealVector v{x, y};
    const bool in1 = chi(v, 0, p) != 0;
    const bool in2 = chi(v, 1, p) != 0;
    if (in1 && in2) return 4;
    if (in1) return 1;
    if (in2) return 2;
    return 3;
}

int fitness_nd(const RealVector& x, const DeceptiveParams& p) {
    const int d_total = p.dim;
    int prod = 1;
    int max_term = 0;
    for (int d = 0; d < d_total; ++d) {
        const int c = chi(x, d, p);
        prod *= c;
        max_term = std::max(max_term, (d + 1) * c);
    }
    return (d_total + 1) * prod - max_term + d_total + 1;
}

double fitness_cont2d(double x, double y, const DeceptiveParams& p) {
    const double u = x - p.offsets[0];
    const double v = y - p.offsets[1];
    const double w2 = p.width * p.width;
    const double u2 = u * u;
    const double v2 = v * v;
    return 2.0 * u2 / (u2 + w2) + v2 / (v2 + w2) + 4.0 * std::exp(-(u2 + v2) / w2);
}

// ---------------------------------------------------------------------------
// Worst-case line
// ---------------------------------------------------------------------------

long long fitness_line(long long i, long long n_max) {
    if (i < 0 || i > n_max) throw std::out_of_range("line genome outside {0..N}");
    return i;
}

// ---------------------------------------------------------------------------
// Variation operators for real-vector genomes
// ---------------------------------------------------------------------------

RealVector mutate_real(const RealVector& x, RandomSource& rng) {
    RealVector out = x;
    out[rng.index(out.size())] = rng.uniform();
    return out;
}

RealVector crossover_xy(const RealVector& a, const RealVector& b, RandomSource& rng) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("crossover needs equal-dimension parents");
    if (a.size() == 2) return {a[0], b[1]};
    RealVector out(a.size());
    for (std::size_t d = 0; d < a.size(); ++d)
        out[d] = rng.index(2) == 0 ? a[d] : b[d];
    return out;
}

// ---------------------------------------------------------------------------
// Random-matrix TSP
// ---------------------------------------------------------------------------

TspInstance make_tsp_instance(int n, bool symmetric, std::uint64_t seed) {
    if (n < 2) throw ConfigError("TSP instance needs at least 2 cities");
    TspInstance inst;
    inst.n_cities = n;
    inst.symmetric = symmetric;
    inst.seed = seed;
    inst.dist.assign(static_cast<std::size_t>(n) * n, 0.0);

    RandomSource rng(seed);
    const auto draw = [&rng] {
        double u;
        do { u = rng.uniform(); } while (u == 0.0);
        return u;
    };
    for (int i = 0; i < n; ++i) {
        for (int j = symmetric ? i + 1 : 0; j < n; ++j) {
            if (i == j) continue;
            const double u = draw();
            inst.dist[static_cast<std::size_t>(i) * n + j] = u;
            if (symmetric) inst.dist[static_cast<std::size_t>(j) * n + i] = u;
        }
    }
    return inst;
}

void save_tsp_instance(const TspInstance& inst, std::ostream& out) {
    out << inst.n_cities << ' ' << (inst.symmetric ? 1 : 0) << ' ' << inst.seed << '\n';
    for (int i = 0; i < inst.n_cities; ++i) {
        for (int j = 0; j < inst.n_cities; ++j) {
            if (j) out << ' ';
            out << format_full(inst.d(i, j));
        }
        out << '\n';
    }
}

TspInstance load_tsp_instance(std::istream& in) {
    TspInstance inst;
    int sym = 0;
    if (!(in >> inst.n_cities >> sym >> inst.seed))
        throw ConfigError("TSP file: bad header, expected 'n symmetric seed'");
    if (inst.n_cities < 2) throw ConfigError("TSP file: needs at least 2 cities");
    inst.symmetric = sym != 0;
    const auto n = static_cast<std::size_t>(inst.n_cities);
    inst.dist.assign(n * n, 0.0);
    for (std::size_t k = 0; k < n * n; ++k)
        if (!(in >> inst.dist[k]))
            throw ConfigError("TSP file: expected " + std::to_string(n * n) + " distances");
    return inst;
}

double tsp_fitness(const Permutation& tour, const TspInstance& inst) {
    const std::size_t n = tour.size();
    double len = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        len += inst.d(tour[k], tour[(k + 1) % n]);
    if (!(len > 0.0)) throw std::domain_error("zero-length tour");
    return 1.0 / len;
}

namespace {

Permutation relocate_city(const Permutation& tour, RandomSource& rng) {
    Permutation out = tour;
    const std::size_t src = rng.index(out.size());
    const int city = out[src];
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(src));
    const std::size_t dst = rng.index(out.size() + 1);
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(dst), city);
    return out;
}

Permutation reverse_segment(const Permutation& tour, RandomSource& rng) {
    Permutation out = tour;
    std::size_t i = rng.index(out.size());
    std::size_t j = rng.index(out.size());
    if (i > j) std::swap(i, j);
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(i),
                 out.begin() + static_cast<std::ptrdiff_t>(j) + 1);
    return out;
}

} // namespace

Permutation tsp_mutate(const Permutation& tour, TspMove move, RandomSource& rng) {
    if (tour.size() < 4) throw std::invalid_argument("TSP mutation needs at least 4 cities");
    switch (move) {
        case TspMove::OneOpt:
            return relocate_city(tour, rng);
        case TspMove::TwoHalfOpt:
            return rng.index(2) == 0 ? reverse_segment(tour, rng) : relocate_city(tour, rng);
    }
    throw std::logic_error("unknown TSP move");
}

// ---------------------------------------------------------------------------
// Problem implementations
// ---------------------------------------------------------------------------

namespace {

// A point outside every feature strip; strips are narrower than 1/2, so one
// of the two box corners works per coordinate.
RealVector featureless_corner(const DeceptiveParams& p) {
    RealVector x(static_cast<std::size_t>(p.dim));
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = p.offsets[d] > 0.0 ? 0.0 : 1.0;
    return x;
}

class DeceptiveProblem final : public Problem {
public:
    DeceptiveProblem(DeceptiveParams params, bool use_nd_formula)
        : params_(std::move(params)), use_nd_formula_(use_nd_formula) {
        params_.validate();
        if (!use_nd_formula_ && params_.dim != 2)
            throw ConfigError("deceptive2d is two-dimensional");
        has_crossover_ = true;
    }

    std::string spec() const override {
        if (use_nd_formula_)
            return "deceptiveNd:" + std::to_string(params_.dim) + ":" +
                   format_short(params_.width);
        return "deceptive2d:" + format_short(params_.width) + ":" +
               format_short(params_.offsets[0]) + ":" + format_short(params_.offsets[1]);
    }

    double evaluate(const Genome& g) const override {
        const RealVector& x = as_real(g);
        if (x.size() != static_cast<std::size_t>(params_.dim))
            throw std::invalid_argument("genome dimension mismatch");
        if (use_nd_formula_) return fitness_nd(x, params_);
        return fitness_2d(x[0], x[1], params_);
    }

    Genome sample(RandomSource& rng) const override {
        RealVector x(static_cast<std::size_t>(params_.dim));
        for (double& xi : x) xi = rng.uniform();
        return x;
    }

    Genome mutate(const Genome& g, RandomSource& rng) const override {
        return mutate_real(as_real(g), rng);
    }

    std::optional<Genome> crossover(const Genome& a, const Genome& b,
                                    RandomSource& rng) const override {
        return Genome(crossover_xy(as_real(a), as_real(b), rng));
    }

    std::optional<FitnessGrid> grid() const override {
        return FitnessGrid::from_range(1.0, static_cast<double>(params_.dim + 2), 1.0);
    }

    std::optional<double> default_target() const override {
        return static_cast<double>(params_.dim + 2);
    }

    // Canonical start: a corner outside every feature strip.
    std::optional<Genome> base_genome() const override {
        return Genome(featureless_corner(params_));
    }

private:
    DeceptiveParams params_;
    bool use_nd_formula_;
};

class Cont2dProblem final : public Problem {
public:
    explicit Cont2dProblem(DeceptiveParams params) : params_(std::move(params)) {
        params_.validate();
        if (params_.dim != 2) throw ConfigError("cont2d is two-dimensional");
        has_crossover_ = true;
    }

    std::string spec() const override {
        return "cont2d:" + format_short(params_.width) + ":" +
               format_short(params_.offsets[0]) + ":" + format_short(params_.offsets[1]);
    }

    double evaluate(const Genome& g) const override {
        const RealVector& x = as_real(g);
        if (x.size() != 2) throw std::invalid_argument("genome dimension mismatch");
        return fitness_cont2d(x[0], x[1], params_);
    }

    Genome sample(RandomSource& rng) const override {
        return RealVector{rng.uniform(), rng.uniform()};
    }

    Genome mutate(const Genome& g, RandomSource& rng) const override {
        return mutate_real(as_real(g), rng);
    }

    std::optional<Genome> crossover(const Genome& a, const Genome& b,
                                    RandomSource& rng) const override {
        return Genome(crossover_xy(as_real(a), as_real(b), rng));
    }

    std::optional<FitnessGrid> grid() const override { return std::nullopt; }

    std::optional<double> default_target() const override { return std::nullopt; }

    std::optional<Genome> base_genome() const override {
        return Genome(featureless_corner(params_));
    }

private:
    DeceptiveParams params_;
};

class LineProblem final : public Problem {
public:
    explicit LineProblem(long long n_max) : n_max_(n_max) {
        if (n_max_ < 1) throw ConfigError("line problem needs N >= 1");
    }

    std::string spec() const override { return "line:" + std::to_string(n_max_); }

    double evaluate(const Genome& g) const override {
        return static_cast<double>(fitness_line(as_int(g), n_max_));
    }

    Genome sample(RandomSource& rng) const override {
        return IntScalar(rng.index(static_cast<std::uint64_t>(n_max_) + 1));
    }

    Genome mutate(const Genome& g, RandomSource& rng) const override {
        const IntScalar i = as_int(g);
        const IntScalar j = rng.index(2) == 0 ? i - 1 : i + 1;
        if (j < 0 || j > n_max_) return i;  // walls: the step is swallowed
        return j;
    }

    std::optional<FitnessGrid> grid() const override {
        return FitnessGrid::from_range(0.0, static_cast<double>(n_max_), 1.0);
    }

    std::optional<double> default_target() const override {
        return static_cast<double>(n_max_);
    }

    std::optional<Genome> base_genome() const override { return Genome(IntScalar(0)); }

private:
    long long n_max_;
};

class TspProblem final : public Problem {
public:
    TspProblem(TspInstance inst, std::string spec_string, TspMove move)
        : inst_(std::move(inst)), spec_(std::move(spec_string)), move_(move) {}

    std::string spec() const override { return spec_; }

    double evaluate(const Genome& g) const override {
        return tsp_fitness(as_perm(g), inst_);
    }

    Genome sample(RandomSource& rng) const override {
        Permutation tour(static_cast<std::size_t>(inst_.n_cities));
        std::iota(tour.begin(), tour.end(), 0);
        rng.shuffle(tour);
        return tour;
    }

    Genome mutate(const Genome& g, RandomSource& rng) const override {
        return tsp_mutate(as_perm(g), move_, rng);
    }

    std::optional<FitnessGrid> grid() const override { return std::nullopt; }

    std::optional<double> default_target() const override { return std::nullopt; }

    std::optional<Genome> base_genome() const override {
        Permutation tour(static_cast<std::size_t>(inst_.n_cities));
        std::iota(tour.begin(), tour.end(), 0);
        return tour;
    }

private:
    TspInstance inst_;
    std::string spec_;
    TspMove move_;
};

} // namespace

std::unique_ptr<Problem> make_problem(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string& name = parts[0];

    if (name == "deceptive2d" || name == "cont2d") {
        if (parts.size() != 2 && parts.size() != 4)
            throw ConfigError("expected " + name + ":width or " + name + ":width:a:b");
        auto p = DeceptiveParams::with_defaults(2, parse_double(parts[1], name + " width"));
        if (parts.size() == 4) {
            p.offsets[0] = parse_double(parts[2], name + " offset a");
            p.offsets[1] = parse_double(parts[3], name + " offset b");
        }
        if (name == "cont2d") return std::make_unique<Cont2dProblem>(std::move(p));
        return std::make_unique<DeceptiveProblem>(std::move(p), false);
    }
    if (name == "deceptiveNd") {
        if (parts.size() != 3) throw ConfigError("expected deceptiveNd:D:width");
        const auto dim = static_cast<int>(parse_int(parts[1], "deceptiveNd dimension"));
        auto p = DeceptiveParams::with_defaults(dim, parse_double(parts[2], "deceptiveNd width"));
        return std::make_unique<DeceptiveProblem>(std::move(p), true);
    }
    if (name == "line") {
        if (parts.size() != 2) throw ConfigError("expected line:N");
        return std::make_unique<LineProblem>(parse_int(parts[1], "line N"));
    }
    if (name == "tsp") {
        if (parts.size() >= 2 && parts[1] == "random") {
            if (parts.size() != 4 && parts.size() != 5)
                throw ConfigError("expected tsp:random:n:seed[:asym]");
            bool symmetric = true;
            if (parts.size() == 5) {
                if (parts[4] != "asym") throw ConfigError("expected tsp:random:n:seed[:asym]");
                symmetric = false;
            }
            const auto n = static_cast<int>(parse_int(parts[2], "tsp city count"));
            const auto seed = parse_uint64(parts[3], "tsp seed");
            return std::make_unique<TspProblem>(make_tsp_instance(n, symmetric, seed),
                                                std::string(spec), TspMove::TwoHalfOpt);
        }
        if (parts.size() >= 2 && parts[1] == "file") {
            if (parts.size() < 3) throw ConfigError("expected tsp:file:path");
            std::string path = parts[2];
            for (std::size_t k = 3; k < parts.size(); ++k) path += ":" + parts[k];
            std::ifstream in(path);
            if (!in) throw ConfigError("cannot open TSP file: " + path);
            return std::make_unique<TspProblem>(load_tsp_instance(in), std::string(spec),
                                                TspMove::TwoHalfOpt);
        }
        throw ConfigError("expected tsp:random:... or tsp:file:...");
    }
    throw ConfigError("unknown problem: '" + name + "'");
}

} // namespace fuss
