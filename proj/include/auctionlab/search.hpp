#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "auctionlab/mechanism.hpp"

namespace auctionlab {

enum class SearchMode { Truthful, Moral };

enum class SymmetryPruning {
    Off,                // always enumerate the full cross product
    Auto,               // dedup / restrict only when the full space exceeds the cap
    OrbitDedup,         // lossless: canonical representatives under player exchange (n = 2)
    SymmetricRestrict,  // lossy: one shared price function applied to every player
};

struct SearchOptions {
    std::uint64_t cap = 50'000'000ULL;  // enumerated-grid budget
    int threads = 0;                    // 0 = hardware concurrency
    SymmetryPruning pruning = SymmetryPruning::Auto;
};

struct SearchSpace {
    int n = 0;
    std::vector<std::vector<Rational>> value_sets;
    std::vector<std::vector<ExtendedPrice>> candidates;  // per player, sorted, Never last
    Rational alpha = Rational(1);
    SearchMode mode = SearchMode::Moral;

    //

    std::uint64_t size() const;  // product over slots, saturating at UINT64_MAX
};

// grid values, grid values + eps, and Never; sorted with Never greatest.
std::vector<ExtendedPrice> default_candidates(const std::vector<Rational>& values,
                                              const Rational& eps);
// Audit lattice: all multiples of eps/2 in [0, max+eps], plus Never.
std::vector<ExtendedPrice> dense_candidates(const std::vector<Rational>& values,
                                            const Rational& eps);

SearchSpace make_search_space(const std::vector<std::vector<Rational>>& value_sets,
                              const Rational& eps, SearchMode mode, const Rational& alpha);

struct SearchResult {
    Rational best_revenue;
    PaymentGrid best_grid;
    std::uint64_t optima_count = 0;
    bool is_truthful_flag = false;
    std::uint64_t space_size = 0;   // full cross-product size (pre-pruning)
    std::uint64_t enumerated = 0;   // representatives actually enumerated
    bool pruned_symmetric = false;  // result restricted to symmetric grids
    bool found = false;
};

// Enumerates every candidate grid, filters by the mode's feasibility
// (Truthful: at most one strictly positive potential profit per instance;
// Moral: the alpha side condition at every allocated instance, vacuous at
// alpha = 1), and maximizes exact expected revenue over the joint. Ties go to
// the lexicographically smallest grid. Deterministic for any thread count.
SearchResult brute_force_optimal(const SearchSpace& space, const JointDistribution& joint,
                                 const SearchOptions& options = {});

// One enumeration pass tracking several moral alpha levels plus the truthful
// optimum; much cheaper than independent runs.
struct MultiSearchRequest {
    std::vector<std::vector<Rational>> value_sets;
    std::vector<std::vector<ExtendedPrice>> candidates;
    std::vector<Rational> moral_alphas;
    bool want_truthful = false;
};

struct MultiSearchResult {
    std::vector<SearchResult> moral;  // parallel to moral_alphas
    SearchResult truthful;
};

MultiSearchResult brute_force_multi(const MultiSearchRequest& request,
                                    const JointDistribution& joint,
                                    const SearchOptions& options = {});

// Sweep over alpha values; asserts the optimum is non-decreasing in alpha.
std::vector<std::pair<Rational, SearchResult>> optimal_alpha_sweep(
    const JointDistribution& joint, const std::vector<std::vector<Rational>>& value_sets,
    const Rational& eps, const std::vector<Rational>& alphas, const SearchOptions& options = {});

}  // namespace auctionlab
