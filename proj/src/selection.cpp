#include "fuss/selection.hpp"

#include "fuss/errors.hpp"
#include "parse_util.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fuss {

using detail::format_short;
using detail::parse_double;
using detail::parse_int;
using detail::split;

SelectionScheme SelectionScheme::parse(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string& name = parts[0];
    SelectionScheme s;
    if (name == "fuss") {
        s.kind = SchemeKind::Fuss;
        if (parts.size() != 1) throw ConfigError("scheme fuss takes no parameters");
    } else if (name == "proportionate") {
        s.kind = SchemeKind::Proportionate;
        if (parts.size() != 1) throw ConfigError("scheme proportionate takes no parameters");
    } else if (name == "uniform") {
        s.kind = SchemeKind::Uniform;
        if (parts.size() != 1) throw ConfigError("scheme uniform takes no parameters");
    } else if (name == "random") {
        s.kind = SchemeKind::RandomSearch;
        if (parts.size() != 1) throw ConfigError("scheme random takes no parameters");
    } else if (name == "truncation") {
        s.kind = SchemeKind::Truncation;
        if (parts.size() != 2) throw ConfigError("scheme truncation expects truncation:alpha");
        s.alpha = parse_double(parts[1], "truncation alpha");
    } else if (name == "ranking") {
        s.kind = SchemeKind::Ranking;
        if (parts.size() != 2) throw ConfigError("scheme ranking expects ranking:eta_plus");
        s.eta_plus = parse_double(parts[1], "ranking eta_plus");
    } else if (name == "tournament") {
        s.kind = SchemeKind::Tournament;
        if (parts.size() != 3) throw ConfigError("scheme tournament expects tournament:k:l");
        s.tournament_k = static_cast<int>(parse_int(parts[1], "tournament k"));
        s.tournament_l = static_cast<int>(parse_int(parts[2], "tournament l"));
    } else {
        throw ConfigError("unknown selection scheme: '" + name + "'");
    }
    s.validate();
    return s;
}

std::string SelectionScheme::to_string() const {
    switch (kind) {
        case SchemeKind::Fuss: return "fuss";
        case SchemeKind::Proportionate: return "proportionate";
        case SchemeKind::Uniform: return "uniform";
        case SchemeKind::RandomSearch: return "random";
        case SchemeKind::Truncation: return "truncation:" + format_short(alpha);
        case SchemeKind::Ranking: return "ranking:" + format_short(eta_plus);
        case SchemeKind::Tournament:
            return "tournament:" + std::to_string(tournament_k) + ":" +
                   std::to_string(tournament_l);
    }
    return "?";
}

void SelectionScheme::validate() const {
    if (kind == SchemeKind::Truncation && !(alpha > 0.0 && alpha <= 1.0))
        throw ConfigError("truncation alpha must lie in (0, 1]");
    if (kind == SchemeKind::Ranking && !(eta_plus >= 1.0 && eta_plus <= 2.0))
        throw ConfigError("ranking eta_plus must lie in [1, 2]");
    if (kind == SchemeKind::Tournament &&
        !(tournament_l >= 1 && tournament_l <= tournament_k))
        throw ConfigError("tournament requires 1 <= l <= k");
}

const Individual& fuss_select(const Population& pop, double u, double epsilon,
                              RandomSource& rng, TieRule tie) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    const double lo = pop.min_fitness() - epsilon / 2.0;
    const double len = pop.max_fitness() - pop.min_fitness() + epsilon;
    return pop.nearest(lo + u * len, rng, tie);
}

const Individual& fuss_select(const Population& pop, double epsilon, RandomSource& rng) {
    const double u = rng.uniform();
    return fuss_select(pop, u, epsilon, rng);
}

std::map<double, double> fuss_selection_probabilities(const Population& pop, double epsilon) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    std::map<double, double> probs;
    const auto& levels = pop.levels();
    if (levels.size() == 1) {
        probs[levels.begin()->first] = 1.0;
        return probs;
    }

    std::vector<double> values;
    values.reserve(levels.size());
    for (const auto& [f, bucket] : levels) values.push_back(f);

    const double lo = values.front() - epsilon / 2.0;
    const double hi = values.back() + epsilon / 2.0;
    const double total = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double left = i == 0 ? lo : 0.5 * (values[i - 1] + values[i]);
        const double right = i + 1 == values.size() ? hi : 0.5 * (values[i] + values[i + 1]);
        probs[values[i]] = (right - left) / total;
    }
    return probs;
}

const Individual& select_proportionate(const Population& pop, double delta, RandomSource& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    const double f_min = pop.min_fitness();
    double total = 0.0;
    for (const auto& [f, bucket] : pop.levels())
        total += static_cast<double>(bucket.size()) * (f - f_min + delta);
    if (!(total > 0.0)) return pop.uniform_member(rng);  // flat fitness, delta 0

    double x = rng.uniform() * total;
    for (const auto& [f, bucket] : pop.levels()) {
        const double w = static_cast<double>(bucket.size()) * (f - f_min + delta);
        if (x < w) {
            const double per = w / static_cast<double>(bucket.size());
            auto idx = static_cast<std::size_t>(x / per);
            if (idx >= bucket.size()) idx = bucket.size() - 1;
            return bucket[idx];
        }
        x -= w;
    }
    return pop.levels().rbegin()->second.back();  // guard against rounding spill
}

const Individual& select_truncation(const Population& pop, double alpha, RandomSource& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("truncation alpha must lie in (0, 1]");
    const auto want = static_cast<std::size_t>(
        std::ceil(alpha * static_cast<double>(pop.size()) - 1e-12));
    const std::size_t cutoff = std::max<std::size_t>(want, 1);

    // walk levels from the top; a level straddling the cutoff joins whole
    std::size_t included = 0;
    const auto& levels = pop.levels();
    auto it = levels.rbegin();
    for (; it != levels.rend(); ++it) {
        included += it->second.size();
        if (included >= cutoff) break;
    }

    std::size_t pick = rng.index(included);
    for (auto jt = levels.rbegin();; ++jt) {
        if (pick < jt->second.size()) return jt->second[pick];
        pick -= jt->second.size();
    }
}

const Individual& select_ranking(const Population& pop, double eta_plus, RandomSource& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    if (!(eta_plus >= 1.0 && eta_plus <= 2.0))
        throw ConfigError("ranking eta_plus must lie in [1, 2]");
    const std::size_t n = pop.size();
    if (n == 1) return pop.member_at_rank(0);

    // closed-form CDF of the linear rank law; binary-search the smallest
    // rank r in {1..n} with CDF(r) >= u
    const double eta_minus = 2.0 - eta_plus;
    const double slope = (eta_plus - eta_minus) / static_cast<double>(n - 1);
    const auto cdf = [&](std::size_t r) {
        const double rd = static_cast<double>(r);
        return (eta_minus * rd + slope * rd * (rd - 1.0) / 2.0) / static_cast<double>(n);
    };
    const double u = rng.uniform();
    std::size_t lo = 1, hi = n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (cdf(mid) >= u) hi = mid;
        else lo = mid + 1;
    }
    return pop.member_at_rank(lo - 1);
}

std::vector<const Individual*> select_tournament(const Population& pop, int k, int l,
                                                 RandomSource& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    if (!(l >= 1 && l <= k)) throw ConfigError("tournament requires 1 <= l <= k");
    std::vector<const Individual*> drawn;
    drawn.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) drawn.push_back(&pop.uniform_member(rng));
    std::stable_sort(drawn.begin(), drawn.end(),
                     [](const Individual* a, const Individual* b) {
                         return a->fitness > b->fitness;
                     });
    drawn.resize(static_cast<std::size_t>(l));
    return drawn;
}

const Individual& select_uniform(const Population& pop, RandomSource& rng) {
    if (pop.empty()) throw std::invalid_argument("empty population");
    return pop.uniform_member(rng);
}

const Individual& select_one(const Population& pop, const SelectionScheme& scheme,
                             double epsilon, RandomSource& rng) {
    switch (scheme.kind) {
        case SchemeKind::Fuss:
            return fuss_select(pop, epsilon, rng);
        case SchemeKind::Proportionate:
            return select_proportionate(pop, epsilon, rng);
        case SchemeKind::Truncation:
            return select_truncation(pop, scheme.alpha, rng);
        case SchemeKind::Ranking:
            return select_ranking(pop, scheme.eta_plus, rng);
        case SchemeKind::Tournament:
            return *select_tournament(pop, scheme.tournament_k, scheme.tournament_l, rng)[0];
        case SchemeKind::Uniform:
            return select_uniform(pop, rng);
        case SchemeKind::RandomSearch:
            break;
    }
    throw std::logic_error("random search has no selection operator");
}

} // namespace fuss
