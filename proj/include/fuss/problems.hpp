#pragma once

#include "fuss/grid.hpp"
#include "fuss/individual.hpp"
#include "fuss/random.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fuss {

// ---------------------------------------------------------------------------
// Deceptive feature problems
// ---------------------------------------------------------------------------

/// Feature strips for the deceptive test functions. Feature d covers
/// [offset_d, offset_d + width] in coordinate d; every strip must fit in [0,1].
struct DeceptiveParams {
    int dim = 2;
    std::vector<double> offsets;  // one per dimension
    double width = 0.2;           // feature width, in (0, 0.5)

    /// Default offsets cycle 0.4, 0.2, 0.6 across dimensions.
    static DeceptiveParams with_defaults(int dim, double width);
    void validate() const;  // throws ConfigError
};

/// 1 iff x[d] lies in the closed feature interval of dimension d (0-based).
int chi(const RealVector& x, int d, const DeceptiveParams& p);

/// 2D deceptive landscape: 1 on feature-1 only, 2 on feature-2 only,
/// 3 on the featureless bulk, 4 on the intersection (global optimum).
int fitness_2d(double x, double y, const DeceptiveParams& p);

/// D-dimensional generalization:
///   f(x) = (D+1) * prod_d chi_d(x) - max_d { d * chi_d(x) } + D + 1,
/// with the max over 1-based d and an all-zero max counting as 0. The bulk
/// maps to D+1 and the all-features optimum to D+2. At D = 2 the two
/// single-feature labels come out swapped relative to fitness_2d; the
/// dynamics are symmetric under the swap.
int fitness_nd(const RealVector& x, const DeceptiveParams& p);

/// Smooth variant with the same feature structure: with u = x - a, v = y - b,
///   2u^2/(u^2+w^2) + v^2/(v^2+w^2) + 4 exp(-(u^2+v^2)/w^2).
/// Peak value 4 at (a, b); tends to 3 far from both ridges.
double fitness_cont2d(double x, double y, const DeceptiveParams& p);

// ---------------------------------------------------------------------------
// Worst-case line
// ---------------------------------------------------------------------------

/// Unimodal staircase f(i) = i on {0..n_max}; throws on out-of-range i.
long long fitness_line(long long i, long long n_max);

// ---------------------------------------------------------------------------
// Variation operators for real-vector genomes
// ---------------------------------------------------------------------------

/// Replace one uniformly chosen coordinate with a fresh uniform draw in [0,1].
RealVector mutate_real(const RealVector& x, RandomSource& rng);

/// D = 2: (x of first parent, y of second). D > 2: uniform crossover, each
/// coordinate from either parent with probability 1/2. Throws on dimension
/// mismatch.
RealVector crossover_xy(const RealVector& a, const RealVector& b, RandomSource& rng);

// ---------------------------------------------------------------------------
// Random-matrix TSP
// ---------------------------------------------------------------------------

struct TspInstance {
    int n_cities = 0;
    std::vector<double> dist;  // row-major n x n, zero diagonal
    bool symmetric = true;
    std::uint64_t seed = 0;

    double d(int i, int j) const { return dist[static_cast<std::size_t>(i) * n_cities + j]; }
};

/// Off-diagonal distances uniform in (0,1); the symmetric flag mirrors the
/// upper triangle. Deterministic per seed.
TspInstance make_tsp_instance(int n, bool symmetric, std::uint64_t seed);

/// Plain-text format: line 1 "n symmetric seed", then n rows of n distances.
void save_tsp_instance(const TspInstance& inst, std::ostream& out);
TspInstance load_tsp_instance(std::istream& in);

/// Inverse cyclic tour length. Throws on a zero-length cycle.
double tsp_fitness(const Permutation& tour, const TspInstance& inst);

enum class TspMove {
    OneOpt,      // relocate one city to another position
    TwoHalfOpt,  // 50/50 mixture of segment reversal and relocation
};

/// Apply one random move; always returns a valid permutation. Needs n >= 4.
Permutation tsp_mutate(const Permutation& tour, TspMove move, RandomSource& rng);

// ---------------------------------------------------------------------------
// Problem interface used by the steady-state engine
// ---------------------------------------------------------------------------

class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string spec() const = 0;
    virtual double evaluate(const Genome& g) const = 0;

    /// Fresh random genome: the initializer and the random-search baseline.
    virtual Genome sample(RandomSource& rng) const = 0;
    virtual Genome mutate(const Genome& g, RandomSource& rng) const = 0;

    /// Recombination, when the problem defines one.
    virtual std::optional<Genome> crossover(const Genome& a, const Genome& b,
                                            RandomSource& rng) const {
        (void)a; (void)b; (void)rng;
        return std::nullopt;
    }
    bool has_crossover() const { return has_crossover_; }

    /// Fixed fitness grid for discrete problems, nullopt for continuous.
    virtual std::optional<FitnessGrid> grid() const = 0;

    /// Default success threshold (the optimum for discrete problems).
    virtual std::optional<double> default_target() const = 0;

    /// Lowest-fitness starting genome, where one exists (the line problem).
    virtual std::optional<Genome> base_genome() const { return std::nullopt; }

protected:
    bool has_crossover_ = false;
};

/// Parse the canonical problem strings:
///   deceptive2d:W[:a:b]   deceptiveNd:D:W   cont2d:W[:a:b]   line:N
///   tsp:random:n:seed[:asym]   tsp:file:path
std::unique_ptr<Problem> make_problem(std::string_view spec);

} // namespace fuss
