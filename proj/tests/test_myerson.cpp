#include <doctest.h>

#include "auctionlab/generators.hpp"
#include "auctionlab/myerson.hpp"
#include "auctionlab/search.hpp"

using namespace auctionlab;

namespace {

DiscreteDistribution uniform3() { return DiscreteDistribution::uniform_grid(3); }

JointDistribution iid(const DiscreteDistribution& d, int players) {
    std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(players), d);
    return product_joint(copies);
}

}  // namespace

TEST_CASE("phi inverse on the uniform grid") {
    auto d = uniform3();
    CHECK(phi_inverse(d, Rational(0)) == Rational(1, 2));
    CHECK(phi_inverse(d, Rational(1, 4)) == Rational(1));
    // Exact preimages return themselves.
    for (const auto& v : d.support()) CHECK(phi_inverse(d, virtual_value(d, v)) == v);
    CHECK_THROWS_WITH_AS(phi_inverse(d, Rational(2)), doctest::Contains("preimage"),
                         AuctionError);
}

TEST_CASE("q values against opponents") {
    auto d = uniform3();
    std::vector<DiscreteDistribution> ds = {d, d};
    // Opponent below the reserve: posted price region.
    CHECK(q_value(ds, 0, std::vector<Rational>{Rational(0)}) == Rational(1, 2));
    CHECK(q_value(ds, 0, std::vector<Rational>{Rational(1, 2)}) == Rational(1, 2));
    CHECK(q_value(ds, 0, std::vector<Rational>{Rational(1)}) == Rational(1));

    // Monotone in each opponent coordinate.
    Prng rng(21);
    for (int k = 0; k < 20; ++k) {
        auto r = random_strict_regular_distribution(rng, 4);
        std::vector<DiscreteDistribution> pair = {r, r};
        std::optional<Rational> prev;
        for (const auto& v : r.support()) {
            auto q = q_value(pair, 0, std::vector<Rational>{v});
            REQUIRE(q.has_value());
            if (prev) CHECK(!(*q < *prev));
            prev = q;
        }
    }
}

TEST_CASE("two-player closed form on the uniform grid") {
    auto d = uniform3();
    auto grid = myerson_grid({d, d});

    // Player 1 faces the bare critical price, player 2 the +eps version.
    auto p1 = [&](const Rational& v2) {
        return grid.price_at(0, std::vector<Rational>{Rational(0), v2}).finite();
    };
    auto p2 = [&](const Rational& v1) {
        return grid.price_at(1, std::vector<Rational>{v1, Rational(0)}).finite();
    };
    CHECK(p1(Rational(0)) == Rational(1, 2));
    CHECK(p1(Rational(1, 2)) == Rational(1, 2));
    CHECK(p1(Rational(1)) == Rational(1));
    CHECK(p2(Rational(0)) == Rational(1, 2));
    CHECK(p2(Rational(1, 2)) == Rational(1));
    CHECK(p2(Rational(1)) == Rational(3, 2));

    ProfitMaximizer m;
    m.grid = grid;
    CHECK(is_truthful(m).truthful);
    CHECK(expected_revenue(m, iid(d, 2)) == Rational(5, 9));
}

TEST_CASE("single player gets the posted reserve price") {
    auto grid = myerson_grid({uniform3()});
    CHECK(grid.prices[0][0] == ExtendedPrice::of(Rational(1, 2)));
}

TEST_CASE("closed form matches brute force on small instances") {
    Prng rng(23);
    for (int k = 0; k < 4; ++k) {
        std::vector<DiscreteDistribution> ds = {random_strict_regular_distribution(rng, 3),
                                                random_strict_regular_distribution(rng, 3)};
        auto joint = product_joint(ds);
        auto space = make_search_space(joint.player_values(), ds[0].eps, SearchMode::Truthful,
                                       Rational(0));
        auto best = brute_force_optimal(space, joint);
        ProfitMaximizer m;
        m.grid = myerson_grid(ds);
        CHECK(expected_revenue(m, joint) == best.best_revenue);
    }
}

TEST_CASE("closed form requires regularity") {
    DiscreteDistribution irregular;
    irregular.eps = Rational(1, 2);
    irregular.mass = {Rational(9, 10), Rational(1, 100), Rational(9, 100)};
    CHECK_THROWS_WITH_AS(myerson_grid({irregular, irregular}), doctest::Contains("regular"),
                         AuctionError);
}

TEST_CASE("lift leaves an already-clean grid untouched") {
    auto d = uniform3();
    auto ds = std::vector<DiscreteDistribution>{d, d};
    ProfitMaximizer m;
    m.grid = myerson_grid(ds);
    auto [lifted, trace] = lift(m, d);
    CHECK(trace.steps.empty());
    CHECK(trace.initial_revenue == trace.final_revenue);
    CHECK(lifted.grid == m.grid);
}

TEST_CASE("lift raises the half-scale second price into a truthful grid") {
    auto d = uniform3();
    std::vector<Rational> grid_values = d.support();
    ProfitMaximizer m;
    m.grid = PaymentGrid::empty({grid_values, grid_values});
    for (int i = 0; i < 2; ++i)
        for (std::size_t t = 0; t < m.grid.tuple_count(i); ++t)
            m.grid.prices[static_cast<std::size_t>(i)][t] =
                ExtendedPrice::of(Rational(1, 2) * m.grid.tuple_values(i, t)[0]);

    auto joint = iid(d, 2);
    Rational before = expected_revenue(m, joint);
    auto [lifted, trace] = lift(m, d);
    CHECK(is_truthful(lifted).truthful);
    CHECK(!(trace.final_revenue < before));
    for (const auto& step : trace.steps)
        CHECK(!(step.revenue_after < step.revenue_before));
    CHECK(trace.final_revenue == expected_revenue(lifted, joint));
}

TEST_CASE("lift preserves the optimal moral revenue exactly") {
    for (std::size_t points : {3u, 4u}) {
        auto d = DiscreteDistribution::uniform_grid(points);
        auto joint = iid(d, 2);
        auto space =
            make_search_space(joint.player_values(), d.eps, SearchMode::Moral, Rational(1));
        auto best = brute_force_optimal(space, joint);
        ProfitMaximizer m;
        m.grid = best.best_grid;
        auto [lifted, trace] = lift(m, d);
        CHECK(trace.final_revenue == best.best_revenue);
        CHECK(is_truthful(lifted).truthful);
    }
}

TEST_CASE("lift rejects non-standard inputs") {
    DiscreteDistribution irregular;
    irregular.eps = Rational(1, 2);
    irregular.mass = {Rational(9, 10), Rational(1, 100), Rational(9, 100)};
    ProfitMaximizer m;
    auto values = irregular.support();
    m.grid = PaymentGrid::empty({values, values});
    CHECK_THROWS_WITH_AS(lift(m, irregular), doctest::Contains("standard"), AuctionError);
}

TEST_CASE("lift randomized battery stays monotone and truthful") {
    Prng rng(29);
    auto d = uniform3();
    auto values = d.support();
    std::vector<std::vector<Rational>> sets = {values, values};
    std::vector<std::vector<ExtendedPrice>> candidates = {default_candidates(values, d.eps),
                                                          default_candidates(values, d.eps)};
    const Rational x = reserve_price(d);
    for (int k = 0; k < 40; ++k) {
        ProfitMaximizer m;
        m.grid = random_grid(rng, sets, candidates);
        auto [lifted, trace] = lift(m, d);
        CHECK(is_truthful(lifted).truthful);
        CHECK(!(trace.final_revenue < trace.initial_revenue));
        // Final shape: at least the tuple's top in the reserve region,
        // exactly the reserve below it.
        for (int i = 0; i < 2; ++i) {
            for (std::size_t t = 0; t < lifted.grid.tuple_count(i); ++t) {
                auto opp = lifted.grid.tuple_values(i, t);
                const auto& p = lifted.grid.prices[static_cast<std::size_t>(i)][t];
                if (opp[0] < x)
                    CHECK(p == ExtendedPrice::of(x));
                else
                    CHECK(!(p < ExtendedPrice::of(opp[0])));
            }
        }
    }
}

TEST_CASE("price-lowering validator") {
    auto d = uniform3();
    auto ds = std::vector<DiscreteDistribution>{d, d};
    ProfitMaximizer m;
    m.grid = myerson_grid(ds);

    // Raise player 2's price at tuple (1/2) one notch above its clean value;
    // the hypothesis holds there and lowering must not hurt.
    m.grid.prices[1][1] = ExtendedPrice::of(Rational(3, 2));
    CHECK(rev_max_price_check(m, d, 1, std::vector<Rational>{Rational(1, 2)}, Rational(1)));

    // Vacuous when the price is already at or below the threshold.
    ProfitMaximizer clean;
    clean.grid = myerson_grid(ds);
    CHECK(rev_max_price_check(clean, d, 1, std::vector<Rational>{Rational(1, 2)}, Rational(1)));

    // Below the reserve the hypothesis is rejected.
    CHECK_THROWS_WITH_AS(
        rev_max_price_check(clean, d, 1, std::vector<Rational>{Rational(1, 2)}, Rational(0)),
        doctest::Contains("reserve"), AuctionError);
}
