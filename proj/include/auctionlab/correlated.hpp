#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "auctionlab/distribution.hpp"
#include "auctionlab/mechanism.hpp"
#include "auctionlab/search.hpp"

namespace auctionlab {

struct LookaheadResult {
    ProfitMaximizer mechanism;
    Rational revenue;
};

// Lookahead auction: per opponent tuple, the top player (ties to the lowest
// index) faces the revenue-maximizing take-it-or-leave-it price for his value
// conditioned on those exact opponent values and on being top; everyone who
// cannot be top is excluded. Truthful by construction (verified).
LookaheadResult lookahead(const JointDistribution& joint);

// Two-player transform trading truthfulness for revenue: player 1's prices
// drop by eps_shift (floored at 0), player 2 always faces base_price.
// Requires a truthful input (not_truthful_input otherwise). Morality at a
// given alpha must be re-verified by check_alpha_moral.
ProfitMaximizer moralize_transform(const ProfitMaximizer& m, const Rational& eps_shift,
                                   const ExtendedPrice& base_price);

struct TwoApproxResult {
    bool pass = false;
    Rational ratio;  // lookahead / optimal moral; 1 when the optimum is 0
    Rational lookahead_revenue;
    Rational optimal_moral_revenue;
};

// Exact check that the lookahead auction collects at least half the optimal
// alpha-moral revenue. A false return is an implementation defect.
TwoApproxResult two_approx_check(const JointDistribution& joint, const Rational& alpha,
                                 const Rational& candidate_eps,
                                 const SearchOptions& options = {});

struct GapSearchParams {
    int support_cap = 3;          // per-player distinct values
    int denominator_cap = 12;     // atom-weight lattice
    std::uint64_t samples = 10'000;
    std::uint64_t seed = 1;
    Rational eps = Rational(1, 4);  // value grid step
};

struct GapInstance {
    JointDistribution joint;
    SearchResult moral;
    SearchResult truthful;
    Rational gap;             // moral - truthful, >= 0
    std::uint64_t sample_index = 0;
    std::uint64_t samples_run = 0;
    std::uint64_t samples_skipped = 0;  // over-cap spaces resampled
};

// Seeded exhaustive-per-sample search over small correlated two-player joints
// for the largest optimal-moral minus optimal-truthful revenue gap. Fully
// deterministic for a fixed seed and parameters, any thread count.
GapInstance gap_search(const GapSearchParams& params, const SearchOptions& options = {});

enum class PropertyStatus { True, False, Unverifiable };

struct HProperty {
    std::string name;
    PropertyStatus status = PropertyStatus::Unverifiable;
    std::string witness;
};

struct HPropertyReport {
    std::vector<HProperty> properties;  // the six checks, fixed order
    Rational e_approx;                  // rational stand-in for e
    bool all_true() const;
};

// Validates the six properties a revenue-gap instance file must satisfy:
// finite support, values >= 1, player-1 value separation > eps, player-2
// values within [1, 1 + eps*alpha], truthful optimum at most e/(e-1) + delta,
// and an optimal truthful mechanism that never allocates player 2 and leaves
// the item unallocated with probability at least 1/(e-1). The last two run
// the brute-force search and report Unverifiable when over the cap.
HPropertyReport validate_h_properties(const JointDistribution& joint, const Rational& alpha,
                                      const Rational& eps, const Rational& delta,
                                      const Rational& e_approx = Rational(2721, 1001),
                                      const SearchOptions& options = {});

}  // namespace auctionlab
