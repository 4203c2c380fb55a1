#include "fuss/population.hpp"

#include <cmath>
#include <stdexcept>

namespace fuss {

void Population::require_non_empty() const {
    if (size_ == 0) throw std::invalid_argument("empty population");
}

void Population::add(Individual ind, RandomSource& rng) {
    if (capacity_ && size_ >= *capacity_) {
        if (policy_ == DeletionPolicy::MostOccupied)
            delete_from_most_occupied(rng);
        else
            delete_worst(rng);
    }
    levels_[ind.fitness].push_back(std::move(ind));
    ++size_;
    ++creations_;
}

void Population::delete_from_most_occupied(RandomSource& rng) {
    require_non_empty();
    std::size_t max_count = 0;
    for (const auto& [f, bucket] : levels_)
        if (bucket.size() > max_count) max_count = bucket.size();

    // reservoir pick among the maximal levels
    LevelMap::iterator chosen = levels_.end();
    std::size_t seen = 0;
    for (auto it = levels_.begin(); it != levels_.end(); ++it) {
        if (it->second.size() != max_count) continue;
        ++seen;
        if (seen == 1 || rng.index(seen) == 0) chosen = it;
    }

    auto& bucket = chosen->second;
    bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(rng.index(bucket.size())));
    if (bucket.empty()) levels_.erase(chosen);
    --size_;
}

void Population::delete_worst(RandomSource& rng) {
    require_non_empty();
    auto it = levels_.begin();
    auto& bucket = it->second;
    bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(rng.index(bucket.size())));
    if (bucket.empty()) levels_.erase(it);
    --size_;
}

Population::LevelMap::const_iterator Population::nearest_level(double f, RandomSource& rng,
                                                               TieRule tie) const {
    require_non_empty();
    auto hi = levels_.lower_bound(f);
    if (hi == levels_.end()) return std::prev(hi);
    if (hi == levels_.begin()) return hi;
    auto lo = std::prev(hi);
    const double d_lo = f - lo->first;
    const double d_hi = hi->first - f;
    if (d_lo < d_hi) return lo;
    if (d_hi < d_lo) return hi;
    if (tie == TieRule::Lower) return lo;
    return rng.index(2) == 0 ? lo : hi;
}

const Individual& Population::nearest(double f, RandomSource& rng, TieRule tie) const {
    const auto& bucket = nearest_level(f, rng, tie)->second;
    return bucket[rng.index(bucket.size())];
}

std::size_t Population::level_count(double f) const {
    auto it = levels_.find(f);
    return it == levels_.end() ? 0 : it->second.size();
}

double Population::min_fitness() const {
    require_non_empty();
    return levels_.begin()->first;
}

double Population::max_fitness() const {
    require_non_empty();
    return levels_.rbegin()->first;
}

double Population::effective_epsilon() const {
    if (size_ < 2) throw std::domain_error("degenerate range");
    const double span = max_fitness() - min_fitness();
    if (!(span > 0.0)) throw std::domain_error("degenerate range");
    return span / static_cast<double>(size_ - 1);
}

double Population::effective_epsilon_or_zero() const {
    if (size_ < 2) return 0.0;
    const double span = max_fitness() - min_fitness();
    return span > 0.0 ? span / static_cast<double>(size_ - 1) : 0.0;
}

std::map<double, std::pair<std::size_t, double>> Population::occupation_histogram() const {
    std::map<double, std::pair<std::size_t, double>> hist;
    if (size_ == 0) return hist;
    const double total = static_cast<double>(size_);
    for (const auto& [f, bucket] : levels_)
        hist.emplace(f, std::make_pair(bucket.size(), static_cast<double>(bucket.size()) / total));
    return hist;
}

const Individual& Population::member_at_rank(std::size_t r) const {
    require_non_empty();
    if (r >= size_) throw std::out_of_range("rank out of range");
    for (const auto& [f, bucket] : levels_) {
        if (r < bucket.size()) return bucket[r];
        r -= bucket.size();
    }
    throw std::logic_error("population size bookkeeping is inconsistent");
}

const Individual& Population::uniform_member(RandomSource& rng) const {
    require_non_empty();
    return member_at_rank(rng.index(size_));
}

} // namespace fuss
