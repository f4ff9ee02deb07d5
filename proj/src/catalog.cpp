#include "auctionlab/catalog.hpp"

#include <algorithm>

namespace auctionlab {

namespace {

std::vector<Rational> sorted_unique(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    return values;
}

void require_value(const std::vector<Rational>& values, const Rational& v, const char* who) {
    if (!std::binary_search(values.begin(), values.end(), v))
        throw AuctionError("grid_missing_values",
                           std::string(who) + " value set must contain " + v.str());
}

}  // namespace

ProfitMaximizer claim31_mechanism(const Rational& alpha, std::vector<Rational> player1_values,
                                  std::vector<Rational> player2_values) {
    auto v1 = sorted_unique(std::move(player1_values));
    auto v2 = sorted_unique(std::move(player2_values));
    const Rational spike = Rational(1) + alpha / Rational(10);
    const Rational threshold(1, 10);
    require_value(v1, Rational(1), "player 1");
    require_value(v1, spike, "player 1");
    require_value(v2, threshold, "player 2");

    PaymentGrid grid = PaymentGrid::empty({v1, v2});
    // Player 1 faces price 1 whenever player 2 clears the 1/10 threshold.
    for (std::size_t t = 0; t < grid.tuple_count(0); ++t) {
        const Rational opp = grid.tuple_values(0, t)[0];
        if (opp >= threshold) grid.prices[0][t] = ExtendedPrice::of(Rational(1));
    }
    // Player 2 gets the item for free exactly at the spike report of player 1.
    for (std::size_t t = 0; t < grid.tuple_count(1); ++t) {
        const Rational opp = grid.tuple_values(1, t)[0];
        if (opp == spike) grid.prices[1][t] = ExtendedPrice::of(Rational(0));
    }
    grid.validate();

    ProfitMaximizer m;
    m.grid = std::move(grid);
    m.alpha = alpha;
    return m;
}

ProfitMaximizer claim31_mechanism(const Rational& alpha) {
    const Rational spike = Rational(1) + alpha / Rational(10);
    return claim31_mechanism(
        alpha, {Rational(0), Rational(1, 2), Rational(1), spike, Rational(3, 2)},
        {Rational(0), Rational(1, 10), Rational(1, 5), Rational(1)});
}

ProfitMaximizer scaled_second_price(const Rational& c, std::vector<Rational> grid_values,
                                    int players) {
    if (c.is_negative() || c > Rational(1))
        throw AuctionError("bad_parameter", "c must lie in [0,1]: " + c.str());
    auto values = sorted_unique(std::move(grid_values));
    PaymentGrid grid = PaymentGrid::empty(
        std::vector<std::vector<Rational>>(static_cast<std::size_t>(players), values));
    for (int i = 0; i < players; ++i) {
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            auto opp = grid.tuple_values(i, t);
            Rational top = opp[0];
            for (const auto& v : opp) top = max(top, v);
            grid.prices[static_cast<std::size_t>(i)][t] = ExtendedPrice::of(c * top);
        }
    }
    grid.validate();

    ProfitMaximizer m;
    m.grid = std::move(grid);
    m.alpha = Rational(1);
    return m;
}

ProfitMaximizer nochar_family(const std::function<int(const Rational&, const Rational&)>& selector,
                              std::vector<Rational> player1_values,
                              std::vector<Rational> player2_values) {
    auto v1 = sorted_unique(std::move(player1_values));
    auto v2 = sorted_unique(std::move(player2_values));
    PaymentGrid grid = PaymentGrid::empty({v1, v2});
    for (int i = 0; i < 2; ++i) {
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            const Rational opp = grid.tuple_values(i, t)[0];
            if (opp <= Rational(1))
                grid.prices[static_cast<std::size_t>(i)][t] =
                    ExtendedPrice::of(Rational(1) - opp);
        }
    }
    grid.validate();

    ProfitMaximizer m;
    m.grid = std::move(grid);
    m.alpha = Rational(1);

    // Free region: both profits equal v1 + v2 - 1 >= 0; the selector decides.
    InstanceSpace space(m.grid.value_sets);
    m.tie_override.assign(space.count(), kNoSale);
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        const Rational& a = profile[0];
        const Rational& b = profile[1];
        if (a <= Rational(1) && b <= Rational(1) && a + b >= Rational(1)) {
            int winner = selector(a, b);
            if (winner != 0 && winner != 1)
                throw AuctionError("selector_out_of_region",
                                   "selector must return player 0 or 1, got " +
                                       std::to_string(winner));
            m.tie_override[idx] = winner;
        }
    }
    return m;
}

ProfitMaximizer reserve_second_price(const Rational& reserve, std::vector<Rational> grid_values,
                                     int players) {
    auto values = sorted_unique(std::move(grid_values));
    if (!std::binary_search(values.begin(), values.end(), reserve))
        throw off_grid_error("reserve " + reserve.str());
    PaymentGrid grid = PaymentGrid::empty(
        std::vector<std::vector<Rational>>(static_cast<std::size_t>(players), values));
    for (int i = 0; i < players; ++i) {
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            auto opp = grid.tuple_values(i, t);
            Rational top = reserve;
            for (const auto& v : opp) top = max(top, v);
            grid.prices[static_cast<std::size_t>(i)][t] = ExtendedPrice::of(top);
        }
    }
    grid.validate();

    ProfitMaximizer m;
    m.grid = std::move(grid);
    m.alpha = Rational(0);
    return m;
}

std::vector<CatalogEntry> catalog_entries() {
    return {
        {"claim31", "non-monotone allocation implementable morally but not in dominant strategies",
         "--alpha a/b [--eps]"},
        {"scaled-second-price", "highest value wins at c times the second-highest value",
         "--c a/b --eps e [--players n]"},
        {"nochar", "free-region family: below 1 each player presents 1 - v to the other",
         "--selector {player1|player2|alternate} --eps e"},
        {"reserve-second-price", "second-price auction with a reserve price",
         "--reserve a/b --eps e [--players n]"},
    };
}

}  // namespace auctionlab
