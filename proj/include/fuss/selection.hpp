#pragma once

#include "fuss/population.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fuss {

enum class SchemeKind {
    Fuss,          // two-stage: uniform fitness value, then nearest individual
    Proportionate, // P(i) linear in fitness above the population minimum
    Truncation,    // uniform over the top alpha fraction
    Ranking,       // linear function of worst-to-best rank
    Tournament,    // best l out of k uniform draws with replacement
    Uniform,       // one-stage uniform over individuals
    RandomSearch,  // engine-level baseline: fresh individual each step
};

/// A selection scheme plus its parameters, addressable by the canonical
/// string forms used in configs and CSV output: "fuss", "proportionate",
/// "uniform", "random", "truncation:0.3", "ranking:1.8", "tournament:4:1".
struct SelectionScheme {
    SchemeKind kind = SchemeKind::Fuss;
    double alpha = 0.5;      // truncation fraction in (0, 1]
    double eta_plus = 1.8;   // ranking slope in [1, 2]; eta_minus = 2 - eta_plus
    int tournament_k = 2;
    int tournament_l = 1;    // 1 <= l <= k

    static SelectionScheme parse(std::string_view spec);  // throws ConfigError
    std::string to_string() const;
    void validate() const;                                // throws ConfigError

    /// True for the schemes that bias toward higher fitness and run at
    /// fixed capacity by default (everything except FUSS and random search).
    bool is_std() const {
        return kind != SchemeKind::Fuss && kind != SchemeKind::RandomSearch;
    }
};

/// FUSS: map draw u in [0,1) to f = (f_min - eps/2) + u*(f_max - f_min + eps)
/// and return a uniform member of the occupied level nearest to f. Missing
/// intermediate levels hand their interval mass to the nearest neighbors.
/// eps is the problem grid spacing, or the effective scale (0 if degenerate)
/// for continuous fitness.
const Individual& fuss_select(const Population& pop, double u, double epsilon,
                              RandomSource& rng, TieRule tie = TieRule::Random);

/// Convenience overload drawing u from rng.
const Individual& fuss_select(const Population& pop, double epsilon, RandomSource& rng);

/// Analytic per-level FUSS selection probability: each occupied level owns
/// the part of [f_min - eps/2, f_max + eps/2] nearer to it than to any other
/// occupied level. Sums to 1 within 1e-12.
std::map<double, double> fuss_selection_probabilities(const Population& pop, double epsilon);

/// P(i) = g(f_i) / sum_j g(f_j) with g(f) = f - f_min + delta. A nonpositive
/// total weight (all-equal fitness with delta = 0) degrades to uniform.
const Individual& select_proportionate(const Population& pop, double delta, RandomSource& rng);

/// Uniform over the ceil(alpha*|P|) fittest; a level tied at the cutoff is
/// included whole.
const Individual& select_truncation(const Population& pop, double alpha, RandomSource& rng);

/// Linear ranking, worst-to-best ranks r in {1..N}:
/// P(r) = (eta_minus + (eta_plus - eta_minus)*(r-1)/(N-1)) / N.
const Individual& select_ranking(const Population& pop, double eta_plus, RandomSource& rng);

/// k uniform draws with replacement; returns the l fittest, fitness ties
/// broken by draw order.
std::vector<const Individual*> select_tournament(const Population& pop, int k, int l,
                                                 RandomSource& rng);

const Individual& select_uniform(const Population& pop, RandomSource& rng);

/// Dispatch on scheme kind; tournament yields its single best (l is
/// honored by pair-producing callers). RandomSearch is rejected here --
/// the engine handles it before selection.
const Individual& select_one(const Population& pop, const SelectionScheme& scheme,
                             double epsilon, RandomSource& rng);

} // namespace fuss
