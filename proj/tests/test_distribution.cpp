#include <doctest.h>

#include "auctionlab/distribution.hpp"
#include "auctionlab/generators.hpp"
#include "auctionlab/prng.hpp"

using namespace auctionlab;

namespace {

DiscreteDistribution three_point(const Rational& w0, const Rational& w1, const Rational& w2) {
    DiscreteDistribution d;
    d.eps = Rational(1, 2);
    d.mass = {w0, w1, w2};
    d.validate();
    return d;
}

DiscreteDistribution uniform3() {
    return three_point(Rational(1, 3), Rational(1, 3), Rational(1, 3));
}

}  // namespace

TEST_CASE("virtual values on the uniform three-point grid") {
    auto d = uniform3();
    CHECK(virtual_value(d, Rational(1)) == Rational(1));      // empty tail
    CHECK(virtual_value(d, Rational(0)) == Rational(-1));     // 0 - (1/2)(2/3)/(1/3)
    CHECK(virtual_value(d, Rational(1, 2)) == Rational(0));   // 1/2 - (1/2)(1/3)/(1/3)
}

TEST_CASE("virtual value error paths") {
    auto d = three_point(Rational(1, 2), Rational(0), Rational(1, 2));
    CHECK_THROWS_WITH_AS(virtual_value(d, Rational(1, 2)), doctest::Contains("zero"),
                         AuctionError);
    CHECK_THROWS_AS(virtual_value(uniform3(), Rational(1, 3)), AuctionError);  // off grid
}

TEST_CASE("regularity of small fixtures") {
    CHECK(is_regular(uniform3()).ok);

    // phi here evaluates to (-1/98, 0, 1): non-decreasing, hence regular.
    auto heavy_bottom = three_point(Rational(49, 50), Rational(1, 100), Rational(1, 100));
    CHECK(is_regular(heavy_bottom).ok);

    // Sharp density drop with a heavy tail breaks regularity at (0, 1/2):
    // phi(0) = -1/18, phi(1/2) = -4.
    auto irregular = three_point(Rational(9, 10), Rational(1, 100), Rational(9, 100));
    auto check = is_regular(irregular);
    CHECK_FALSE(check.ok);
    REQUIRE(check.witness.has_value());
    CHECK(check.witness->first == Rational(0));
    CHECK(check.witness->second == Rational(1, 2));

    // Two-point supports are always regular: phi(top) = top.
    DiscreteDistribution two;
    two.eps = Rational(1);
    two.mass = {Rational(1, 2), Rational(1, 2)};
    CHECK(is_regular(two).ok);
}

TEST_CASE("standard distributions") {
    for (std::size_t points : {3u, 5u, 6u})
        CHECK(is_standard(DiscreteDistribution::uniform_grid(points)).ok);
    CHECK(is_standard(DiscreteDistribution::exponential_grid(Rational(1, 4))).ok);
    CHECK(is_standard(DiscreteDistribution::exponential_grid(Rational(1, 2))).ok);

    // Distributions obeying the slow-decay density condition are standard.
    Prng rng(7);
    for (int k = 0; k < 20; ++k)
        CHECK(is_standard(random_slow_decay_distribution(rng, 3 + rng.index(3))).ok);
}

TEST_CASE("standard implies regular on random distributions") {
    Prng rng(11);
    int standard_count = 0;
    for (int k = 0; k < 100; ++k) {
        auto d = random_distribution(rng, 3 + rng.index(3));
        if (is_standard(d).ok) {
            ++standard_count;
            CHECK(is_regular(d).ok);
        }
    }
    CHECK(standard_count > 0);
}

TEST_CASE("phi endpoint properties on random full-support distributions") {
    Prng rng(13);
    for (int k = 0; k < 50; ++k) {
        auto d = random_distribution(rng, 2 + rng.index(4));
        auto sup = d.support();
        CHECK(virtual_value(d, Rational(0)) <= Rational(0));
        CHECK(virtual_value(d, sup.back()) == sup.back());
    }
}

TEST_CASE("monopolist price follows the phi rule") {
    CHECK(monopolist_price(uniform3()) == Rational(1, 2));

    DiscreteDistribution two;
    two.eps = Rational(1);
    two.mass = {Rational(1, 2), Rational(1, 2)};
    CHECK(monopolist_price(two) == Rational(0));

    // The revenue curve can genuinely prefer a higher price; the report
    // surfaces the disagreement instead of hiding it.
    auto report = monopolist_price_report(two);
    CHECK(report.phi_price == Rational(0));
    CHECK(report.revenue_price == Rational(1));
    CHECK(report.best_revenue == Rational(1, 2));
    CHECK_FALSE(report.tie);

    // On the uniform grid the curve ties at {1/2, 1} and the phi value wins.
    auto uniform_report = monopolist_price_report(uniform3());
    CHECK(uniform_report.tie);
    CHECK(uniform_report.best_revenue == Rational(1, 3));
}

TEST_CASE("reserve price maximizes the posted-price revenue curve") {
    Prng rng(17);
    for (int k = 0; k < 60; ++k) {
        auto d = random_distribution(rng, 2 + rng.index(4));
        if (!is_regular(d).ok) continue;
        Rational x = reserve_price(d);
        Rational best;
        for (const auto& v : d.support()) {
            Rational tail;
            for (const auto& u : d.support())
                if (u >= v) tail += d.pdf(u);
            best = max(best, v * tail);
        }
        Rational tail_x;
        for (const auto& u : d.support())
            if (u >= x) tail_x += d.pdf(u);
        CHECK(x * tail_x == best);
    }
}

TEST_CASE("product joint of uniforms") {
    auto d = uniform3();
    auto joint = product_joint({d, d});
    CHECK(joint.atoms.size() == 9);
    Rational total;
    for (const auto& [profile, w] : joint.atoms) {
        CHECK(profile.size() == 2);
        CHECK(w == Rational(1, 9));
        total += w;
    }
    CHECK(total == Rational(1));
    CHECK(joint.exchangeable());

    auto single = product_joint({d});
    CHECK(single.atoms.size() == 3);

    DiscreteDistribution two;
    two.eps = Rational(1);
    two.mass = {Rational(1, 2), Rational(1, 2)};
    CHECK(product_joint({two, two, two}).atoms.size() == 8);
}

TEST_CASE("product joint atom cap") {
    auto d = DiscreteDistribution::uniform_grid(11);
    CHECK_THROWS_WITH_AS(product_joint({d, d, d}, 100), doctest::Contains("cap"), AuctionError);
}

TEST_CASE("conditional top marginal") {
    JointDistribution j;
    j.n = 2;
    j.atoms = {{{Rational(1), Rational(0)}, Rational(1, 2)},
               {{Rational(2), Rational(0)}, Rational(1, 2)}};
    auto m = conditional_top(j, 0);
    REQUIRE(m.atoms.size() == 2);
    CHECK(m.atoms[0] == std::pair{Rational(1), Rational(1, 2)});
    CHECK(m.atoms[1] == std::pair{Rational(2), Rational(1, 2)});

    auto joint = product_joint({uniform3(), uniform3()});
    auto top = conditional_top(joint, 0);
    REQUIRE(top.atoms.size() == 3);  // 6 qualifying atoms renormalized
    CHECK(top.atoms[0] == std::pair{Rational(0), Rational(1, 6)});
    CHECK(top.atoms[1] == std::pair{Rational(1, 2), Rational(1, 3)});
    CHECK(top.atoms[2] == std::pair{Rational(1), Rational(1, 2)});

    JointDistribution impossible;
    impossible.n = 2;
    impossible.atoms = {{{Rational(0), Rational(1)}, Rational(1)}};
    CHECK_THROWS_WITH_AS(conditional_top(impossible, 0), doctest::Contains("zero mass"),
                         AuctionError);
}

TEST_CASE("take-it-or-leave-it offers") {
    Marginal m;
    m.atoms = {{Rational(1), Rational(1, 2)}, {Rational(2), Rational(1, 2)}};
    CHECK(best_take_it_or_leave_it(m) == std::pair{Rational(1), Rational(1)});

    Marginal point;
    point.atoms = {{Rational(3, 4), Rational(1)}};
    CHECK(best_take_it_or_leave_it(point) == std::pair{Rational(3, 4), Rational(3, 4)});

    Marginal two;
    two.atoms = {{Rational(1, 2), Rational(2, 3)}, {Rational(1), Rational(1, 3)}};
    CHECK(best_take_it_or_leave_it(two) == std::pair{Rational(1, 2), Rational(1, 2)});
}

TEST_CASE("exponential grid weights are geometric and sum to one") {
    auto d = DiscreteDistribution::exponential_grid(Rational(1, 2), Rational(3));
    // weights proportional to 1, 1/3, 1/9 -> 9/13, 3/13, 1/13
    CHECK(d.mass[0] == Rational(9, 13));
    CHECK(d.mass[1] == Rational(3, 13));
    CHECK(d.mass[2] == Rational(1, 13));
}

TEST_CASE("joint step inference") {
    JointDistribution j;
    j.n = 2;
    j.atoms = {{{Rational(0), Rational(3, 4)}, Rational(1, 2)},
               {{Rational(1, 2), Rational(3, 4)}, Rational(1, 2)}};
    CHECK(infer_step(j) == Rational(1, 4));
}
