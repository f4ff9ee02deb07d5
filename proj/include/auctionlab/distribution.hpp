#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "auctionlab/rational.hpp"

namespace auctionlab {

// Probability mass function on the grid {0, eps, 2*eps, ..., 1}. 1/eps must
// be a positive integer; weights are exact rationals summing to exactly 1.
// Zero-weight points are permitted, but anything that divides by f(v) throws
// zero_density rather than skipping.
struct DiscreteDistribution {
    Rational eps;
    std::vector<Rational> mass;  // index k holds the weight of k*eps

    std::size_t points() const { return mass.size(); }
    Rational value_at(std::size_t k) const { return eps * Rational(static_cast<long long>(k)); }

    // Index of v on the grid, or nullopt when v is off-grid.
    std::optional<std::size_t> index_of(const Rational& v) const;

    Rational pdf(const Rational& v) const;
    Rational cdf(const Rational& v) const;  // mass up to and including v

    // Grid points with strictly positive mass, ascending.
    std::vector<Rational> support() const;
    // All grid points, ascending.
    std::vector<Rational> grid_values() const;

    void validate() const;  // throws on malformed eps / weights

    static DiscreteDistribution uniform_grid(std::size_t num_points);
    // Geometric weights e^{-k}, with e replaced by the given rational
    // convergent and the vector renormalized to sum exactly 1.
    static DiscreteDistribution exponential_grid(const Rational& eps,
                                                 const Rational& e_approx = Rational(2721, 1001));
};

// phi(v) = v - eps * (1 - F(v)) / f(v). Throws zero_density / off_grid.
Rational virtual_value(const DiscreteDistribution& d, const Rational& v);

struct PairwiseCheck {
    bool ok = true;
    // On failure, the first violating pair (v, v') in scan order.
    std::optional<std::pair<Rational, Rational>> witness;
};

// phi non-decreasing over consecutive positive-mass points.
PairwiseCheck is_regular(const DiscreteDistribution& d);
// For every support pair v > v': v - eps(1-F(v))/f(v) >= v' - eps(1-F(v))/f(v').
PairwiseCheck is_standard(const DiscreteDistribution& d);

// Maximal grid value with phi(v) <= 0 (phi(0) <= 0 always, so it exists).
// Requires regularity. This is the definition-level monopolist price; see
// monopolist_price_report for how it relates to the posted-price revenue curve.
Rational monopolist_price(const DiscreteDistribution& d);

// Smallest grid value with phi(v) >= 0. Provably maximizes p*(1-F(p-eps))
// for regular inputs; this is what reserve-price constructions consume.
Rational reserve_price(const DiscreteDistribution& d);

struct MonopolistReport {
    Rational phi_price;          // max{v : phi(v) <= 0}
    Rational revenue_price;      // smallest argmax of p*(1-F(p-eps))
    Rational best_revenue;       // value of the curve at its max
    bool tie = false;            // phi_price also attains the max
};

// Cross-check between the phi-based price and the posted-price revenue curve.
// The two can genuinely disagree when phi jumps over zero; callers that need
// the revenue-optimal price should use reserve_price / revenue_price.
MonopolistReport monopolist_price_report(const DiscreteDistribution& d);

// Finite weighted value list; support of a conditional marginal. Values are
// ascending and distinct, weights positive and summing to 1 unless stated.
struct Marginal {
    std::vector<std::pair<Rational, Rational>> atoms;  // (value, weight)
};

struct JointDistribution {
    int n = 0;
    std::vector<std::pair<std::vector<Rational>, Rational>> atoms;  // (profile, weight)

    void validate() const;
    // Merge duplicate profiles, drop zero weights, sort profiles lexicographically.
    void normalize();

    // Distinct values per player, ascending.
    std::vector<std::vector<Rational>> player_values() const;
    // Invariant under every permutation of the players.
    bool exchangeable() const;
};

// Cross product of independent marginals; weight = product of masses.
// Throws atom_cap if the product support exceeds the cap.
JointDistribution product_joint(const std::vector<DiscreteDistribution>& ds,
                                std::uint64_t atom_cap = 10'000'000ULL);

// Marginal of player i's value conditioned on v_i >= v_k for all k.
// Throws empty_condition when the event has zero mass.
Marginal conditional_top(const JointDistribution& j, int player);

// argmax over the marginal's support values of p * Pr[v >= p]; ties go to the
// lowest price. Returns (price, revenue).
std::pair<Rational, Rational> best_take_it_or_leave_it(const Marginal& marginal);

// Smallest positive difference between any two values appearing in the joint;
// the natural candidate lattice step when none is configured. 1 when every
// player's value is constant.
Rational infer_step(const JointDistribution& joint);

}  // namespace auctionlab
