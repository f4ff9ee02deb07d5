#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "auctionlab/distribution.hpp"
#include "auctionlab/rational.hpp"

namespace auctionlab {

// A price that may be the "no report of yours ever wins" sentinel. Never
// compares greater than every finite price; there is deliberately no
// arithmetic on this type, callers must branch.
struct ExtendedPrice {
    bool never = false;
    Rational price;  // meaningful only when !never

    static ExtendedPrice never_price() { return ExtendedPrice{true, Rational(0)}; }
    static ExtendedPrice of(Rational p) { return ExtendedPrice{false, std::move(p)}; }

    bool is_never() const { return never; }
    const Rational& finite() const { return price; }

    friend bool operator==(const ExtendedPrice& a, const ExtendedPrice& b) {
        if (a.never || b.never) return a.never == b.never;
        return a.price == b.price;
    }
    friend bool operator<(const ExtendedPrice& a, const ExtendedPrice& b) {
        if (a.never) return false;
        if (b.never) return true;
        return a.price < b.price;
    }

    std::string str() const { return never ? "never" : price.str(); }
};

inline ExtendedPrice min(const ExtendedPrice& a, const ExtendedPrice& b) { return a < b ? a : b; }
inline ExtendedPrice max(const ExtendedPrice& a, const ExtendedPrice& b) { return a < b ? b : a; }

// Per player i, a total map from opponent value tuples v_{-i} to the price
// presented to i. Tuples are indexed mixed-radix over the opponents' value
// sets (opponent order = player order with i removed, last opponent fastest).
struct PaymentGrid {
    std::vector<std::vector<Rational>> value_sets;       // per player, ascending distinct
    std::vector<std::vector<ExtendedPrice>> prices;      // [player][tuple_index]

    int players() const { return static_cast<int>(value_sets.size()); }
    std::size_t tuple_count(int player) const;
    // Index of v_{-i} given the full profile (player i's coordinate ignored).
    std::size_t tuple_index(int player, std::span<const Rational> profile) const;
    // Opponent values for a tuple index, in opponent order.
    std::vector<Rational> tuple_values(int player, std::size_t index) const;

    const ExtendedPrice& price_at(int player, std::span<const Rational> profile) const {
        return prices[static_cast<std::size_t>(player)][tuple_index(player, profile)];
    }

    static PaymentGrid empty(std::vector<std::vector<Rational>> value_sets);
    void validate() const;  // totality, prices >= 0

    // Slot-by-slot order: player-major, tuple-minor; finite prices by value,
    // never greatest. Used for deterministic tie-breaks among search optima.
    friend bool operator<(const PaymentGrid& a, const PaymentGrid& b);
    friend bool operator==(const PaymentGrid& a, const PaymentGrid& b);
};

enum class TieBreakPolicy {
    HighestPaymentThenLowestIndex,  // default; matches the tie device in the proofs
    LowestIndex,
    HighestValueThenLowestIndex,
};

// The executable mechanism: allocate to a maximal non-negative potential
// profit, losers pay nothing. Selling at exactly zero profit is allowed by
// the definition and is on by default (it can only raise revenue); switch it
// off for counterexample studies.
struct ProfitMaximizer {
    PaymentGrid grid;
    Rational alpha = Rational(1);
    TieBreakPolicy tiebreak = TieBreakPolicy::HighestPaymentThenLowestIndex;
    bool sell_at_zero_profit = true;
    // Optional per-instance winner override among profit-tied candidates,
    // keyed by instance index over the value-set cross product. Used by the
    // free-region catalog family; empty otherwise.
    std::vector<int> tie_override;

    int players() const { return grid.players(); }
};

constexpr int kNoSale = -1;

struct Outcome {
    int winner = kNoSale;
    Rational payment;  // 0 on NoSale

    bool sold() const { return winner != kNoSale; }
};

// Enumeration order over the instance cross product: lexicographic in the
// profile, last player fastest.
struct InstanceSpace {
    explicit InstanceSpace(const std::vector<std::vector<Rational>>& sets);
    std::size_t count() const { return total_; }
    std::vector<Rational> profile(std::size_t index) const;
    std::size_t index_of(std::span<const Rational> profile) const;  // off_grid on miss

private:
    const std::vector<std::vector<Rational>>* sets_;
    std::vector<std::size_t> stride_;
    std::size_t total_;
};

Outcome allocate(const ProfitMaximizer& m, std::span<const Rational> profile);

struct MoralityViolation {
    std::vector<Rational> instance;
    int deviator = 0;
    Rational lie;
    Rational gain;
    Rational others_loss;
};

struct MoralityReport {
    bool moral = true;
    Rational alpha;
    std::vector<MoralityViolation> violations;
};

// Full enumeration of instances x deviators x lies; a violation is a lie with
// strictly positive gain exceeding alpha times the aggregate loss it inflicts.
// Violations come out lexicographic by instance, then deviator, then lie.
MoralityReport check_alpha_moral(const ProfitMaximizer& m, const Rational& alpha_test);

struct TruthfulnessCheck {
    bool truthful = true;
    std::optional<std::vector<Rational>> witness;  // first instance with two positive profits
};

// At most one strictly positive potential profit in every instance.
TruthfulnessCheck is_truthful(const ProfitMaximizer& m);

struct MonotonicityCheck {
    bool monotone = true;
    struct Witness {
        int player;
        std::vector<Rational> opponents;
        Rational winning_value;
        Rational losing_value;  // higher value that loses
    };
    std::optional<Witness> witness;
};

MonotonicityCheck is_monotone_allocation(const ProfitMaximizer& m);

// Pointwise min and max of two payment grids that implement the same
// allocation as profit maximizers (checked; allocation_mismatch otherwise).
// Never is the top element. The returned mechanisms are re-checked to agree
// with the input allocation wherever the maximal-profit winner is unique.
std::pair<ProfitMaximizer, ProfitMaximizer> lattice_meet_join(const ProfitMaximizer& a,
                                                              const ProfitMaximizer& b);

// Total allocation table over a finite instance grid.
struct AllocationTable {
    std::vector<std::vector<Rational>> value_sets;
    std::vector<int> winner;  // per instance index; kNoSale for no allocation

    static AllocationTable from_mechanism(const ProfitMaximizer& m);
};

struct RuleOutWitness {
    int player_i, player_j;
    std::vector<Rational> rest;  // values of the other players, in player order
    Rational vi, vi_prime, vj, vj_prime;
};

struct RuleOutResult {
    bool found = false;
    std::optional<RuleOutWitness> witness;
};

// Searches for the 2x2 swap pattern f(vi,vj)=i, f(vi',vj')=i, f(vi',vj)=j,
// f(vi,vj')=j over all player pairs and fixings. A hit rules out
// implementability as an alpha-moral mechanism for every alpha < 1.
RuleOutResult rule_out_pattern(const AllocationTable& table);

// Exact expected revenue over a finite joint; atoms must lie on value sets.
Rational expected_revenue(const ProfitMaximizer& m, const JointDistribution& joint);

struct DominanceCheck {
    bool dominated = true;  // moral payment <= truthful payment everywhere
    std::optional<std::vector<Rational>> witness;
};

// Validation harness for "a dominant-strategy implementation charges the
// most": requires same value sets and same allocation; the first mechanism
// must pass is_truthful and is_monotone_allocation.
DominanceCheck dominance_check(const ProfitMaximizer& truthful, const ProfitMaximizer& moral);

// The profit-maximizer side condition at alpha: in every allocated instance,
// each loser's effective potential profit is at most alpha times the
// winner's. Effective follows the potential-payment convention: a finite grid
// price counts only if some report of that player actually wins; otherwise
// the potential payment is infinite. Equivalent to alpha-morality (tested).
bool alpha_side_condition(const ProfitMaximizer& m, const Rational& alpha);

// Raw variant used as the brute-force feasibility filter: losers' grid-price
// profits bounded by alpha times the winner's, ignoring reachability.
bool alpha_side_condition_raw(const ProfitMaximizer& m, const Rational& alpha);

}  // namespace auctionlab
