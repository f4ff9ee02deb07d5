#pragma once

#include <vector>

#include "auctionlab/distribution.hpp"
#include "auctionlab/mechanism.hpp"
#include "auctionlab/prng.hpp"
#include "auctionlab/search.hpp"

namespace auctionlab {

// Seeded instance generators for property checks and the verification suite.

// Full-support distribution on `points` grid points: integer weights in
// [1, weight_cap or less], normalized exactly.
inline DiscreteDistribution random_distribution(Prng& rng, std::size_t points,
                                                std::uint64_t weight_cap = 20) {
    DiscreteDistribution d;
    d.eps = Rational(1, static_cast<long long>(points - 1));
    std::vector<long long> raw(points);
    long long total = 0;
    for (auto& w : raw) {
        w = 1 + static_cast<long long>(rng.below(weight_cap));
        total += w;
    }
    d.mass.reserve(points);
    for (auto w : raw) d.mass.push_back(Rational(w, total));
    return d;
}

// Distribution whose pdf satisfies f(v) >= f(v') / (1 + f(v')) for all
// v >= v' in the support; rejection-sampled.
inline DiscreteDistribution random_slow_decay_distribution(Prng& rng, std::size_t points,
                                                           std::uint64_t weight_cap = 12) {
    while (true) {
        DiscreteDistribution d = random_distribution(rng, points, weight_cap);
        bool ok = true;
        for (std::size_t hi = 0; hi < points && ok; ++hi)
            for (std::size_t lo = 0; lo < hi && ok; ++lo) {
                const Rational& fv = d.mass[hi];
                const Rational& fv_prime = d.mass[lo];
                if (fv < fv_prime / (Rational(1) + fv_prime)) ok = false;
            }
        if (ok) return d;
    }
}

// Regular distribution with strictly increasing virtual values.
inline DiscreteDistribution random_strict_regular_distribution(Prng& rng, std::size_t points,
                                                               std::uint64_t weight_cap = 12) {
    while (true) {
        DiscreteDistribution d = random_distribution(rng, points, weight_cap);
        auto sup = d.support();
        bool strict = true;
        for (std::size_t k = 0; k + 1 < sup.size() && strict; ++k)
            if (!(virtual_value(d, sup[k]) < virtual_value(d, sup[k + 1]))) strict = false;
        if (strict) return d;
    }
}

// Uniformly random grid over the given candidate lists.
inline PaymentGrid random_grid(Prng& rng, const std::vector<std::vector<Rational>>& value_sets,
                               const std::vector<std::vector<ExtendedPrice>>& candidates) {
    PaymentGrid grid = PaymentGrid::empty(value_sets);
    for (int i = 0; i < grid.players(); ++i)
        for (auto& p : grid.prices[static_cast<std::size_t>(i)])
            p = candidates[static_cast<std::size_t>(i)][rng.index(
                candidates[static_cast<std::size_t>(i)].size())];
    return grid;
}

inline ProfitMaximizer random_mechanism(Prng& rng,
                                        const std::vector<std::vector<Rational>>& value_sets,
                                        const Rational& eps) {
    std::vector<std::vector<ExtendedPrice>> candidates;
    for (const auto& vs : value_sets) candidates.push_back(default_candidates(vs, eps));
    ProfitMaximizer m;
    m.grid = random_grid(rng, value_sets, candidates);
    return m;
}

// Random total allocation table over the cross product (winners in
// {no sale, player 1, ..., player n}).
inline AllocationTable random_allocation_table(Prng& rng,
                                               const std::vector<std::vector<Rational>>& sets) {
    AllocationTable table;
    table.value_sets = sets;
    InstanceSpace space(sets);
    table.winner.resize(space.count());
    for (auto& w : table.winner)
        w = static_cast<int>(rng.index(sets.size() + 1)) - 1;
    return table;
}

}  // namespace auctionlab
