#include "fuss/pairing.hpp"

#include "fuss/errors.hpp"
#include "fuss/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuss {

PairMode parse_pair_mode(std::string_view s) {
    if (s == "independent") return PairMode::Independent;
    if (s == "dependent") return PairMode::Dependent;
    if (s == "correlated") return PairMode::Correlated;
    throw ConfigError("unknown pair mode: '" + std::string(s) + "'");
}

std::string to_string(PairMode m) {
    switch (m) {
        case PairMode::Independent: return "independent";
        case PairMode::Dependent: return "dependent";
        case PairMode::Correlated: return "correlated";
    }
    return "?";
}

double pair_prob_tilde(double f, double f_prime, const FitnessGrid& grid) {
    if (grid.levels() < 3) throw ConfigError("grid too small");
    const auto n = static_cast<double>(grid.levels());
    const double norm = 2.0 * n * std::log(n);
    return 1.0 / (norm * (std::abs(f - f_prime) / grid.epsilon() + 1.0));
}

double marginal_tilde(double f, const FitnessGrid& grid) {
    double total = 0.0;
    for (std::size_t j = 0; j < grid.levels(); ++j)
        total += pair_prob_tilde(f, grid.value(j), grid);
    return total;
}

PairDistribution::PairDistribution(const FitnessGrid& grid) : grid_(grid), n_(grid.levels()) {
    if (n_ < 3) throw ConfigError("pair distribution needs at least 3 fitness levels");

    joint_.assign(n_ * n_, 0.0);
    marginal_.assign(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            const double p = pair_prob_tilde(grid_.value(i), grid_.value(j), grid_);
            joint_[i * n_ + j] = p;
            row += p;
        }
        // dump the missing mass onto the diagonal so every marginal is exactly 1/n
        joint_[i * n_ + i] += 1.0 / static_cast<double>(n_) - row;
        marginal_[i] = 1.0 / static_cast<double>(n_);
    }

    row_cdf_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            acc += joint_[i * n_ + j] / marginal_[i];
            row_cdf_[i * n_ + j] = acc;
        }
        row_cdf_[i * n_ + n_ - 1] = 1.0;  // pin the tail against drift
    }
}

std::pair<std::size_t, std::size_t> PairDistribution::sample(RandomSource& rng) const {
    const std::size_t i = rng.index(n_);  // marginals are uniform by construction
    const double u = rng.uniform();
    const auto* begin = row_cdf_.data() + i * n_;
    const auto* it = std::lower_bound(begin, begin + n_, u);
    std::size_t j = static_cast<std::size_t>(it - begin);
    if (j >= n_) j = n_ - 1;
    return {i, j};
}

PairDistribution build_pair_distribution(const FitnessGrid& grid) {
    return PairDistribution(grid);
}

const PairDistribution& PairDistributionCache::get(const FitnessGrid& grid) {
    if (!dist_ || !(dist_->grid() == grid)) dist_.emplace(grid);
    return *dist_;
}

namespace {

PairSample dependent_pair(const Population& pop, double epsilon, RandomSource& rng) {
    const double u = rng.uniform();
    const double lo = pop.min_fitness() - epsilon / 2.0;
    const double len = pop.max_fitness() - pop.min_fitness() + epsilon;
    const auto level = pop.nearest_level(lo + u * len, rng);
    const auto& bucket = level->second;

    PairSample out{};
    const std::size_t a = rng.index(bucket.size());
    out.first = &bucket[a];
    if (bucket.size() == 1) {
        out.second = out.first;
        return out;
    }
    std::size_t b = rng.index(bucket.size() - 1);
    if (b >= a) ++b;
    out.second = &bucket[b];
    return out;
}

} // namespace

PairSample sample_pair(const Population& pop, PairMode mode, double epsilon,
                       RandomSource& rng, PairDistributionCache* cache) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    PairSample out{};
    switch (mode) {
        case PairMode::Independent:
            out.first = &fuss_select(pop, epsilon, rng);
            out.second = &fuss_select(pop, epsilon, rng);
            return out;
        case PairMode::Dependent:
            return dependent_pair(pop, epsilon, rng);
        case PairMode::Correlated:
            break;
    }

    // the level set runs from f_min to f_max in steps of epsilon
    const double span = pop.empty() ? 0.0 : pop.max_fitness() - pop.min_fitness();
    std::size_t n_levels = 0;
    if (epsilon > 0.0 && span > 0.0)
        n_levels = static_cast<std::size_t>(std::llround(span / epsilon)) + 1;
    if (n_levels < 3) {
        out = dependent_pair(pop, epsilon, rng);
        out.correlated_fallback = true;
        return out;
    }

    const auto grid = FitnessGrid::from_levels(pop.min_fitness(), epsilon, n_levels);
    PairDistributionCache local;
    const PairDistribution& dist = (cache ? *cache : local).get(grid);
    const auto [i, j] = dist.sample(rng);
    out.first = &pop.nearest(grid.value(i), rng);
    out.second = &pop.nearest(grid.value(j), rng);
    return out;
}

} // namespace fuss
