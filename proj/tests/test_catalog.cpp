#include <doctest.h>

#include "auctionlab/catalog.hpp"

using namespace auctionlab;

TEST_CASE("claim31 mechanism reproduces the three-case rule") {
    const Rational alpha(1, 2);
    auto m = claim31_mechanism(alpha);

    auto case1 = allocate(m, std::vector<Rational>{Rational(1), Rational(1, 5)});
    CHECK(case1.winner == 0);
    CHECK(case1.payment == Rational(1));

    auto case2 = allocate(m, std::vector<Rational>{Rational(21, 20), Rational(1, 5)});
    CHECK(case2.winner == 1);
    CHECK(case2.payment == Rational(0));

    auto case3 = allocate(m, std::vector<Rational>{Rational(1, 2), Rational(1, 5)});
    CHECK_FALSE(case3.sold());

    // Below the opponent threshold player 1 never wins.
    CHECK_FALSE(allocate(m, std::vector<Rational>{Rational(1), Rational(0)}).sold());
}

TEST_CASE("claim31 morality is tight at its own alpha") {
    const Rational alpha(1, 2);
    auto m = claim31_mechanism(alpha);
    CHECK(check_alpha_moral(m, alpha).moral);
    auto report = check_alpha_moral(m, alpha / Rational(2));
    CHECK_FALSE(report.moral);
    REQUIRE(!report.violations.empty());
    CHECK(report.violations.front().instance ==
          std::vector<Rational>{Rational(21, 20), Rational(1, 10)});
    CHECK(report.violations.front().deviator == 0);
}

TEST_CASE("claim31 requires the structural values") {
    CHECK_THROWS_WITH_AS(
        claim31_mechanism(Rational(1, 2), {Rational(1)}, {Rational(1, 10)}),
        doctest::Contains("must contain"), AuctionError);
}

TEST_CASE("scaled second price endpoints") {
    std::vector<Rational> grid = {Rational(0), Rational(1, 2), Rational(1)};
    CHECK(is_truthful(scaled_second_price(Rational(1), grid)).truthful);

    auto free = scaled_second_price(Rational(0), grid);
    auto out = allocate(free, std::vector<Rational>{Rational(1), Rational(1, 2)});
    CHECK(out.winner == 0);
    CHECK(out.payment == Rational(0));

    CHECK_THROWS_AS(scaled_second_price(Rational(3, 2), grid), AuctionError);
}

TEST_CASE("scaled second price for three players charges c times the second value") {
    std::vector<Rational> grid = {Rational(0), Rational(1, 2), Rational(1)};
    auto m = scaled_second_price(Rational(1, 2), grid, 3);
    auto out = allocate(m, std::vector<Rational>{Rational(1, 2), Rational(1), Rational(0)});
    CHECK(out.winner == 1);
    CHECK(out.payment == Rational(1, 4));
}

TEST_CASE("free-region family realizes the selector") {
    std::vector<Rational> values = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                    Rational(1), Rational(5, 4)};
    auto prefer_two = [](const Rational&, const Rational&) { return 1; };
    auto m = nochar_family(prefer_two, values, values);

    // Equal profits on the free region; the selector hands it to player 2.
    auto tie = allocate(m, std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    CHECK(tie.winner == 1);
    CHECK(tie.payment == Rational(1, 2));

    auto interior = allocate(m, std::vector<Rational>{Rational(3, 4), Rational(1, 2)});
    CHECK(interior.winner == 1);  // both profits 1/4, selector overrides

    // Above 1 the high player wins against the 1 - v price.
    auto high = allocate(m, std::vector<Rational>{Rational(5, 4), Rational(1, 2)});
    CHECK(high.winner == 0);
    CHECK(high.payment == Rational(1, 2));

    // Both above 1: excluded on both sides.
    CHECK_FALSE(allocate(m, std::vector<Rational>{Rational(5, 4), Rational(5, 4)}).sold());

    CHECK(check_alpha_moral(m, Rational(1)).moral);

    // Strictly inside the free region two players profit at once, so the
    // family is moral without being truthful.
    auto truthful = is_truthful(m);
    CHECK_FALSE(truthful.truthful);
    REQUIRE(truthful.witness.has_value());
    const auto& w = *truthful.witness;
    CHECK(w[0] + w[1] > Rational(1));

    auto bad_selector = [](const Rational&, const Rational&) { return 7; };
    CHECK_THROWS_AS(nochar_family(bad_selector, values, values), AuctionError);
}

TEST_CASE("reserve second price") {
    std::vector<Rational> grid = {Rational(0), Rational(1, 2), Rational(1)};
    auto m = reserve_second_price(Rational(1, 2), grid);

    auto clears = allocate(m, std::vector<Rational>{Rational(1), Rational(0)});
    CHECK(clears.winner == 0);
    CHECK(clears.payment == Rational(1, 2));

    CHECK_FALSE(allocate(m, std::vector<Rational>{Rational(0), Rational(0)}).sold());

    auto at_reserve = allocate(m, std::vector<Rational>{Rational(1), Rational(1, 2)});
    CHECK(at_reserve.winner == 0);
    CHECK(at_reserve.payment == Rational(1, 2));

    CHECK(is_truthful(m).truthful);
    CHECK_THROWS_AS(reserve_second_price(Rational(1, 3), grid), AuctionError);
}

TEST_CASE("catalog listing is complete") {
    auto entries = catalog_entries();
    CHECK(entries.size() == 4);
}
