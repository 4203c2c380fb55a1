#include "fuss/errors.hpp"
#include "fuss/grid.hpp"
#include "fuss/population.hpp"
#include "fuss/random.hpp"

#include <doctest.h>

#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace fuss;
using testsupport::make_population;

TEST_SUITE_BEGIN("core");

TEST_CASE("grid from inclusive range") {
    const FitnessGrid g = FitnessGrid::from_range(1.0, 4.0, 1.0);
    CHECK(g.levels() == 4);
    CHECK(g.f_min() == 1.0);
    CHECK(g.f_max() == 4.0);
    CHECK(g.value(2) == 3.0);
}

TEST_CASE("grid rejects bad ranges") {
    CHECK_THROWS_AS(FitnessGrid::from_range(0.0, 1.0, 0.3), ConfigError);
    CHECK_THROWS_AS(FitnessGrid::from_range(0.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(FitnessGrid::from_range(1.0, 0.0, 0.5), ConfigError);
    CHECK_THROWS_AS(FitnessGrid::from_levels(0.0, 1.0, 0), ConfigError);
}

TEST_CASE("grid nearest index clamps and rounds") {
    const FitnessGrid g = FitnessGrid::from_levels(0.0, 0.5, 3);  // {0, 0.5, 1}
    CHECK(g.f_max() == 1.0);
    CHECK(g.nearest_index(0.2) == 0);
    CHECK(g.nearest_index(0.3) == 1);
    CHECK(g.nearest_index(10.0) == 2);
    CHECK(g.nearest_index(-10.0) == 0);
}

TEST_CASE("random stream replays per seed") {
    RandomSource a(7), b(7), c(8);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        all_equal = all_equal && (x == b.next_u64());
        any_diff = any_diff || (x != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("uniform and index stay in range") {
    RandomSource rng(123);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 10000; ++i) CHECK(rng.index(7) < 7);
}

TEST_CASE("index is roughly uniform") {
    RandomSource rng(5);
    std::vector<int> counts(10, 0);
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) ++counts[rng.index(10)];
    for (const int c : counts) {
        CHECK(c > draws / 10 - 5 * 100);  // 5 sigma, sigma ~ sqrt(n*p*(1-p)) ~ 95
        CHECK(c < draws / 10 + 5 * 100);
    }
}

TEST_CASE("shuffle yields a permutation") {
    RandomSource rng(11);
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    rng.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 50; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("derived seeds separate streams") {
    const auto s00 = RandomSource::derive(1, 0, 0);
    const auto s01 = RandomSource::derive(1, 0, 1);
    const auto s10 = RandomSource::derive(1, 1, 0);
    CHECK(s00 != s01);
    CHECK(s00 != s10);
    CHECK(s01 != s10);
    CHECK(s00 == RandomSource::derive(1, 0, 0));
    CHECK(s00 != RandomSource::derive(2, 0, 0));
}

TEST_CASE("population add and counters") {
    Population pop;
    RandomSource rng(1);
    pop.add(Individual{IntScalar(0), 2.0}, rng);
    pop.add(Individual{IntScalar(1), 2.0}, rng);
    pop.add(Individual{IntScalar(2), 5.0}, rng);
    CHECK(pop.size() == 3);
    CHECK(pop.creations() == 3);
    CHECK(pop.level_total() == 2);
    CHECK(pop.level_count(2.0) == 2);
    CHECK(pop.level_count(5.0) == 1);
    CHECK(pop.level_count(3.0) == 0);
    CHECK(pop.min_fitness() == 2.0);
    CHECK(pop.max_fitness() == 5.0);
}

TEST_CASE("capacity with delete-worst removes the lowest level") {
    Population pop = make_population({{1.0, 1}, {2.0, 9}}, 10, DeletionPolicy::Worst);
    RandomSource rng(3);
    pop.add(Individual{IntScalar(99), 3.0}, rng);
    CHECK(pop.size() == 10);
    CHECK(pop.level_count(1.0) == 0);
    CHECK(pop.level_count(2.0) == 9);
    CHECK(pop.level_count(3.0) == 1);
    CHECK(pop.creations() == 11);
}

TEST_CASE("capacity with most-occupied thins the biggest level") {
    Population pop = make_population({{1.0, 1}, {2.0, 9}}, 10, DeletionPolicy::MostOccupied);
    RandomSource rng(3);
    pop.add(Individual{IntScalar(99), 3.0}, rng);
    CHECK(pop.size() == 10);
    CHECK(pop.level_count(1.0) == 1);
    CHECK(pop.level_count(2.0) == 8);
    CHECK(pop.level_count(3.0) == 1);
}

TEST_CASE("most-occupied tie breaks between maximal levels") {
    // two levels tied at 5: over many seeds both must lose members sometimes
    bool lost_low = false, lost_high = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Population pop = make_population({{1.0, 5}, {2.0, 5}});
        RandomSource rng(seed);
        pop.delete_from_most_occupied(rng);
        if (pop.level_count(1.0) == 4) lost_low = true;
        if (pop.level_count(2.0) == 4) lost_high = true;
    }
    CHECK(lost_low);
    CHECK(lost_high);
}

TEST_CASE("nearest level rounds to the closer occupied level") {
    Population pop = make_population({{1.0, 5}, {2.0, 3}});
    RandomSource rng(4);
    CHECK(pop.nearest_level(1.4, rng)->first == 1.0);
    CHECK(pop.nearest_level(1.6, rng)->first == 2.0);
    CHECK(pop.nearest_level(-100.0, rng)->first == 1.0);
    CHECK(pop.nearest_level(100.0, rng)->first == 2.0);
    CHECK(pop.nearest_level(1.5, rng, TieRule::Lower)->first == 1.0);
}

TEST_CASE("nearest level random tie rule hits both sides") {
    Population pop = make_population({{1.0, 1}, {2.0, 1}});
    bool low = false, high = false;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        RandomSource rng(seed);
        const double f = pop.nearest_level(1.5, rng)->first;
        if (f == 1.0) low = true;
        if (f == 2.0) high = true;
    }
    CHECK(low);
    CHECK(high);
}

TEST_CASE("effective epsilon is range over size minus one") {
    Population pop = make_population({{-1.0, 3}, {3.0, 2}, {5.0, 2}});
    CHECK(pop.effective_epsilon() == doctest::Approx(1.0));
    CHECK(pop.effective_epsilon_or_zero() == doctest::Approx(1.0));
}

TEST_CASE("effective epsilon throws on degenerate populations") {
    Population single = make_population({{2.0, 1}});
    CHECK_THROWS_AS(single.effective_epsilon(), std::domain_error);
    CHECK(single.effective_epsilon_or_zero() == 0.0);

    Population flat = make_population({{2.0, 5}});
    CHECK_THROWS_AS(flat.effective_epsilon(), std::domain_error);
    CHECK(flat.effective_epsilon_or_zero() == 0.0);
}

TEST_CASE("occupation histogram fractions") {
    Population pop = make_population({{1.0, 1}, {2.0, 3}});
    const auto hist = pop.occupation_histogram();
    CHECK(hist.size() == 2);
    CHECK(hist.at(1.0).first == 1);
    CHECK(hist.at(1.0).second == doctest::Approx(0.25));
    CHECK(hist.at(2.0).first == 3);
    CHECK(hist.at(2.0).second == doctest::Approx(0.75));
    CHECK(Population().occupation_histogram().empty());
}

TEST_CASE("member at rank walks fitness ascending") {
    Population pop = make_population({{1.0, 2}, {5.0, 1}});
    CHECK(pop.member_at_rank(0).fitness == 1.0);
    CHECK(pop.member_at_rank(1).fitness == 1.0);
    CHECK(pop.member_at_rank(2).fitness == 5.0);
}

TEST_CASE("uniform member reaches every individual") {
    Population pop = make_population({{1.0, 1}, {2.0, 1}});
    std::set<double> seen;
    RandomSource rng(2);
    for (int i = 0; i < 200; ++i) seen.insert(pop.uniform_member(rng).fitness);
    CHECK(seen.size() == 2);
}

TEST_CASE("empty population operations throw") {
    Population pop;
    RandomSource rng(1);
    CHECK_THROWS(pop.min_fitness());
    CHECK_THROWS(pop.nearest(1.0, rng));
    CHECK_THROWS(pop.uniform_member(rng));
}

TEST_SUITE_END();
