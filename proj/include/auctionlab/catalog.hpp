#pragma once

#include <functional>
#include <string>
#include <vector>

#include "auctionlab/mechanism.hpp"

namespace auctionlab {

// Fixture constructors used by the checkers and the verification suite.

// Two-player mechanism with a deliberately non-monotone allocation: player 1
// buys at price 1 whenever v1 >= 1 except at the single spike value
// 1 + alpha/10, where player 2 receives the item for free. alpha-moral at its
// own alpha, and the morality margin is tight at (1 + alpha/10, 1/10).
// Value sets must contain 1 and 1 + alpha/10 (player 1) and 1/10 (player 2).
ProfitMaximizer claim31_mechanism(const Rational& alpha,
                                  std::vector<Rational> player1_values,
                                  std::vector<Rational> player2_values);
ProfitMaximizer claim31_mechanism(const Rational& alpha);  // default grids

// Highest value wins and pays c times the second-highest value: realized as
// p_{-i}(v_{-i}) = c * max(v_{-i}). 1-moral for every c in [0,1]; truthful
// exactly at c = 1.
ProfitMaximizer scaled_second_price(const Rational& c,
                                    std::vector<Rational> grid_values,
                                    int players = 2);

// Family with arbitrary allocation on the free region {v1 + v2 >= 1, both <= 1}:
// each player presents 1 - v to the other below 1 and excludes above 1. The
// selector picks the winner (0 or 1) on the free region, where both profits
// are identical; it is realized exactly via the tie override.
ProfitMaximizer nochar_family(const std::function<int(const Rational&, const Rational&)>& selector,
                              std::vector<Rational> player1_values,
                              std::vector<Rational> player2_values);

// Textbook second-price auction with a reserve: p_{-i} = max(reserve, max(v_{-i})).
ProfitMaximizer reserve_second_price(const Rational& reserve,
                                     std::vector<Rational> grid_values,
                                     int players = 2);

struct CatalogEntry {
    std::string name;
    std::string description;
    std::string parameters;  // human-readable parameter summary
};

std::vector<CatalogEntry> catalog_entries();

}  // namespace auctionlab
