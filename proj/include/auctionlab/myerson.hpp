#pragma once

#include <optional>
#include <span>
#include <vector>

#include "auctionlab/distribution.hpp"
#include "auctionlab/mechanism.hpp"

namespace auctionlab {

// Generalized inverse: smallest grid value v with phi(v) >= target.
// Throws no_preimage when target exceeds phi at the top of the support.
Rational phi_inverse(const DiscreteDistribution& d, const Rational& target);

// Critical-price skeleton q_{-i}(v_{-i}): the reserve price when every
// opponent has negative virtual value, else the smallest own value whose
// virtual value matches the best opponent's. nullopt when player i's support
// cannot reach the required virtual value.
std::optional<Rational> q_value(const std::vector<DiscreteDistribution>& ds, int player,
                                std::span<const Rational> opponent_values);

// Closed-form optimal truthful grid for independent regular distributions on
// a common grid with full support. Exactly one player per instance faces the
// bare critical price; every other competitor faces it plus eps. The induced
// mechanism is verified to realize the virtual-value-maximizing allocation
// and to be truthful; any mismatch throws myerson_inconsistency.
PaymentGrid myerson_grid(const std::vector<DiscreteDistribution>& ds);

enum class LiftRule { SmallerPrice, HigherPriceSwap, BelowMonopolist };

struct LiftStep {
    int player = 0;
    std::vector<Rational> tuple;  // opponent values, in opponent order
    LiftRule rule;
    PaymentGrid before;
    PaymentGrid after;
    Rational revenue_before;
    Rational revenue_after;
};

struct LiftTrace {
    std::vector<LiftStep> steps;
    Rational initial_revenue;
    Rational final_revenue;
};

// Iterative price-raising transform: any payment grid over the iid product of
// a standard distribution becomes a truthful grid without losing revenue.
// Processes the most significant violating opponent tuple first (sorted
// lexicographic order), raising its price by eps per step; when no opponent
// can match the price the step simultaneously lowers the highest opponent's
// price to his value. Afterwards every tuple below the reserve price region
// is posted at the reserve price. Every step is revenue-verified exactly;
// a decrease or running past the step cap throws lift_defect.
std::pair<ProfitMaximizer, LiftTrace> lift(const ProfitMaximizer& m,
                                           const DiscreteDistribution& d);

// Validator for the price-lowering argument: when only `player` can profit
// against `tuple` at or above threshold t (>= reserve price), a price above t
// can be lowered by eps without losing revenue. Verifies the hypothesis by
// enumeration (hypothesis_fails otherwise) and returns the exact comparison.
bool rev_max_price_check(const ProfitMaximizer& m, const DiscreteDistribution& d, int player,
                         std::span<const Rational> tuple, const Rational& t);

}  // namespace auctionlab
