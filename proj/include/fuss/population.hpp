#pragma once

#include "fuss/individual.hpp"
#include "fuss/random.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace fuss {

/// Tie handling when a fitness value is exactly halfway between two levels.
enum class TieRule { Random, Lower };

/// What to remove when a capacity-limited population overflows.
enum class DeletionPolicy { MostOccupied, Worst };

/// Multiset of individuals indexed by fitness. The ordered map gives
/// O(log #levels) nearest-fitness lookup, which is the selection hot path.
/// Fitness keys are compared exactly; discrete problems emit exactly
/// representable values, continuous problems go through the effective
/// discretization scale instead of key merging.
class Population {
public:
    using LevelMap = std::map<double, std::vector<Individual>>;

    Population() = default;
    explicit Population(std::optional<std::size_t> capacity,
                        DeletionPolicy policy = DeletionPolicy::MostOccupied)
        : capacity_(capacity), policy_(policy) {}

    /// Insert one individual, bumping the creation counter. If a capacity is
    /// set and already full, exactly one existing member is deleted first
    /// (per the configured policy), so the insertion always completes.
    void add(Individual ind, RandomSource& rng);

    /// Remove one uniformly random member of a level with maximal count;
    /// ties between maximal levels break uniformly at random.
    void delete_from_most_occupied(RandomSource& rng);

    /// Remove one uniformly random member of the lowest fitness level.
    void delete_worst(RandomSource& rng);

    /// Occupied level whose fitness minimizes |level - f|. Exact distance
    /// ties follow the tie rule (Random consumes one draw only on a tie).
    LevelMap::const_iterator nearest_level(double f, RandomSource& rng,
                                           TieRule tie = TieRule::Random) const;

    /// Uniformly random member of the nearest occupied level.
    const Individual& nearest(double f, RandomSource& rng,
                              TieRule tie = TieRule::Random) const;

    bool empty() const { return size_ == 0; }
    std::size_t size() const { return size_; }
    std::uint64_t creations() const { return creations_; }
    std::size_t level_total() const { return levels_.size(); }
    std::size_t level_count(double f) const;
    const LevelMap& levels() const { return levels_; }
    std::optional<std::size_t> capacity() const { return capacity_; }
    DeletionPolicy deletion_policy() const { return policy_; }

    double min_fitness() const;   // throws on empty population
    double max_fitness() const;

    /// Effective discretization scale (f_max - f_min) / (|P| - 1).
    /// Throws std::domain_error("degenerate range") when |P| < 2 or the
    /// range is zero; effective_epsilon_or_zero is the callers' fallback.
    double effective_epsilon() const;
    double effective_epsilon_or_zero() const;

    /// Per-level (count, fraction of population). Empty map for empty pop.
    std::map<double, std::pair<std::size_t, double>> occupation_histogram() const;

    /// r-th member in (fitness ascending, insertion order) global order,
    /// r in [0, size). Walks the level map: O(#levels).
    const Individual& member_at_rank(std::size_t r) const;

    /// Uniformly random member of the whole population.
    const Individual& uniform_member(RandomSource& rng) const;

private:
    void require_non_empty() const;

    LevelMap levels_;
    std::size_t size_ = 0;
    std::uint64_t creations_ = 0;
    std::optional<std::size_t> capacity_;
    DeletionPolicy policy_ = DeletionPolicy::MostOccupied;
};

} // namespace fuss
