#pragma once

#include "fuss/grid.hpp"
#include "fuss/population.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fuss {

/// How the two recombination parents are drawn.
enum class PairMode {
    Independent,  // two independent FUSS selections
    Dependent,    // one fitness value, both parents from its nearest level
    Correlated,   // (f, f') from the scale-independent joint distribution
};

PairMode parse_pair_mode(std::string_view spec);  // throws ConfigError
std::string to_string(PairMode mode);

/// Uncorrected joint weight over a grid with |F| >= 3 levels:
///   p~(f,f') = 1 / (2|F| ln|F|) * 1 / (|f-f'|/eps + 1).
/// Throws ConfigError("grid too small") for |F| < 3.
double pair_prob_tilde(double f, double f_prime, const FitnessGrid& grid);

/// Marginal sum_{f' in F} p~(f,f'); lies in [1/(2|F|), 1/|F|].
double marginal_tilde(double f, const FitnessGrid& grid);

/// The corrected joint distribution: off-diagonal entries keep p~, each
/// diagonal entry gains 1/|F| - p~(f). Normalized to 1 with exactly uniform
/// marginals, symmetric, and entrywise >= p~.
class PairDistribution {
public:
    explicit PairDistribution(const FitnessGrid& grid);

    const FitnessGrid& grid() const { return grid_; }
    double prob(std::size_t i, std::size_t j) const { return joint_[i * n_ + j]; }
    double marginal(std::size_t i) const { return marginal_[i]; }

    /// Two-stage inverse-CDF sample: level index i uniform (the marginal is
    /// exactly uniform), then j from the precomputed conditional row CDF.
    std::pair<std::size_t, std::size_t> sample(RandomSource& rng) const;

private:
    FitnessGrid grid_;
    std::size_t n_;
    std::vector<double> joint_;     // row-major n x n
    std::vector<double> marginal_;  // length n
    std::vector<double> row_cdf_;   // row-major conditional CDFs, each row ends at 1
};

PairDistribution build_pair_distribution(const FitnessGrid& grid);

/// Rebuilds only when the population's fitness range grid changes.
class PairDistributionCache {
public:
    const PairDistribution& get(const FitnessGrid& grid);

private:
    std::optional<PairDistribution> dist_;
};

struct PairSample {
    const Individual* first;
    const Individual* second;
    bool correlated_fallback = false;  // correlated mode degraded to dependent
};

/// Draw a parent pair. eps is the grid spacing (discrete) or effective scale
/// (continuous; 0 when degenerate). Correlated mode needs at least three
/// levels in F_t = {f_min^t, f_min^t+eps, ..., f_max^t} and eps > 0;
/// otherwise it falls back to dependent mode and flags the sample.
PairSample sample_pair(const Population& pop, PairMode mode, double epsilon,
                       RandomSource& rng, PairDistributionCache* cache = nullptr);

} // namespace fuss
