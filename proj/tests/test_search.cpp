#include <doctest.h>

#include "auctionlab/generators.hpp"
#include "auctionlab/search.hpp"

using namespace auctionlab;

namespace {

JointDistribution iid_uniform(std::size_t points, int players) {
    auto d = DiscreteDistribution::uniform_grid(points);
    std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(players), d);
    return product_joint(copies);
}

}  // namespace

TEST_CASE("default candidates") {
    std::vector<Rational> grid = {Rational(0), Rational(1, 2), Rational(1)};
    auto c = default_candidates(grid, Rational(1, 2));
    REQUIRE(c.size() == 5);
    CHECK(c[0] == ExtendedPrice::of(Rational(0)));
    CHECK(c[1] == ExtendedPrice::of(Rational(1, 2)));
    CHECK(c[2] == ExtendedPrice::of(Rational(1)));
    CHECK(c[3] == ExtendedPrice::of(Rational(3, 2)));
    CHECK(c[4].is_never());

    auto single = default_candidates({Rational(0)}, Rational(1, 4));
    REQUIRE(single.size() == 3);
    CHECK(single[0] == ExtendedPrice::of(Rational(0)));
    CHECK(single[1] == ExtendedPrice::of(Rational(1, 4)));
    CHECK(single[2].is_never());
}

TEST_CASE("single-player search finds the posted-price optimum") {
    auto joint = iid_uniform(3, 1);
    auto space = make_search_space(joint.player_values(), Rational(1, 2), SearchMode::Moral,
                                   Rational(1));
    auto result = brute_force_optimal(space, joint);
    CHECK(result.best_revenue == Rational(1, 3));
    CHECK(result.best_grid.prices[0][0] == ExtendedPrice::of(Rational(1, 2)));
    CHECK(result.is_truthful_flag);

    auto truthful_space = make_search_space(joint.player_values(), Rational(1, 2),
                                            SearchMode::Truthful, Rational(0));
    CHECK(brute_force_optimal(truthful_space, joint).best_revenue == Rational(1, 3));
}

TEST_CASE("single-atom joint extracts the full value") {
    JointDistribution joint;
    joint.n = 2;
    joint.atoms = {{{Rational(1), Rational(1)}, Rational(1)}};
    std::vector<std::vector<Rational>> sets = {{Rational(1)}, {Rational(1)}};
    auto space = make_search_space(sets, Rational(1), SearchMode::Moral, Rational(1));
    auto result = brute_force_optimal(space, joint);
    CHECK(result.best_revenue == Rational(1));
}

TEST_CASE("moral optimum matches truthful optimum on the iid uniform grid") {
    auto joint = iid_uniform(3, 2);
    MultiSearchRequest request;
    request.value_sets = joint.player_values();
    for (const auto& vs : request.value_sets)
        request.candidates.push_back(default_candidates(vs, Rational(1, 2)));
    request.moral_alphas = {Rational(1)};
    request.want_truthful = true;
    auto multi = brute_force_multi(request, joint);
    CHECK(multi.moral[0].best_revenue == Rational(5, 9));
    CHECK(multi.truthful.best_revenue == Rational(5, 9));
    CHECK(multi.moral[0].is_truthful_flag);
    CHECK(multi.moral[0].best_revenue == multi.truthful.best_revenue);

    // Truthful grids are a subset of the 1-moral ones.
    CHECK(!(multi.moral[0].best_revenue < multi.truthful.best_revenue));
}

TEST_CASE("search is deterministic across thread counts and dedup") {
    auto joint = iid_uniform(3, 2);
    auto space =
        make_search_space(joint.player_values(), Rational(1, 2), SearchMode::Moral, Rational(1));

    SearchOptions serial;
    serial.threads = 1;
    serial.pruning = SymmetryPruning::Off;
    auto a = brute_force_optimal(space, joint, serial);

    SearchOptions threaded;
    threaded.threads = 4;
    threaded.pruning = SymmetryPruning::Off;
    auto b = brute_force_optimal(space, joint, threaded);

    SearchOptions dedup;
    dedup.threads = 2;
    dedup.pruning = SymmetryPruning::OrbitDedup;
    auto c = brute_force_optimal(space, joint, dedup);

    CHECK(a.best_revenue == b.best_revenue);
    CHECK(a.best_grid == b.best_grid);
    CHECK(a.optima_count == b.optima_count);
    CHECK(a.best_revenue == c.best_revenue);
    CHECK(a.best_grid == c.best_grid);
    CHECK(a.optima_count == c.optima_count);
}

TEST_CASE("orbit dedup handles correlated exchangeable joints and skips others") {
    // Exchangeable but correlated: perfectly anti-aligned values.
    JointDistribution mirror;
    mirror.n = 2;
    mirror.atoms = {{{Rational(0), Rational(1)}, Rational(1, 2)},
                    {{Rational(1), Rational(0)}, Rational(1, 2)}};
    REQUIRE(mirror.exchangeable());
    auto space =
        make_search_space(mirror.player_values(), Rational(1, 2), SearchMode::Moral, Rational(1));
    SearchOptions off;
    off.pruning = SymmetryPruning::Off;
    SearchOptions dedup;
    dedup.pruning = SymmetryPruning::OrbitDedup;
    auto a = brute_force_optimal(space, mirror, off);
    auto b = brute_force_optimal(space, mirror, dedup);
    CHECK(a.best_revenue == b.best_revenue);
    CHECK(a.best_grid == b.best_grid);
    CHECK(a.optima_count == b.optima_count);

    // Not exchangeable: dedup must be refused, and Auto must match Off.
    JointDistribution skew = mirror;
    skew.atoms[0].second = Rational(1, 3);
    skew.atoms[1].second = Rational(2, 3);
    REQUIRE_FALSE(skew.exchangeable());
    CHECK_THROWS_AS(brute_force_optimal(space, skew, dedup), AuctionError);
    SearchOptions auto_mode;
    auto c = brute_force_optimal(space, skew, off);
    auto d = brute_force_optimal(space, skew, auto_mode);
    CHECK(c.best_revenue == d.best_revenue);
    CHECK(c.best_grid == d.best_grid);
    CHECK(c.optima_count == d.optima_count);
}

TEST_CASE("orbit dedup is lossless on an asymmetric-optimum instance") {
    // iid uniform |V|=4: the optimum needs asymmetric +eps prices, so a
    // symmetric-function restriction would miss it; dedup must not.
    auto joint = iid_uniform(4, 2);
    auto space =
        make_search_space(joint.player_values(), Rational(1, 3), SearchMode::Truthful, Rational(0));
    SearchOptions off;
    off.pruning = SymmetryPruning::Off;
    SearchOptions dedup;
    dedup.pruning = SymmetryPruning::OrbitDedup;
    auto full = brute_force_optimal(space, joint, off);
    auto reduced = brute_force_optimal(space, joint, dedup);
    CHECK(full.best_revenue == reduced.best_revenue);
    CHECK(full.best_grid == reduced.best_grid);
    CHECK(full.optima_count == reduced.optima_count);
    CHECK(reduced.enumerated < full.enumerated);
}

TEST_CASE("space too large raises") {
    auto joint = iid_uniform(5, 2);
    auto space =
        make_search_space(joint.player_values(), Rational(1, 4), SearchMode::Moral, Rational(1));
    SearchOptions tiny;
    tiny.cap = 1000;
    tiny.pruning = SymmetryPruning::Off;
    CHECK_THROWS_WITH_AS(brute_force_optimal(space, joint, tiny), doctest::Contains("cap"),
                         AuctionError);
}

TEST_CASE("alpha sweep is constant for the iid uniform grid") {
    auto joint = iid_uniform(3, 2);
    std::vector<Rational> alphas = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4),
                                    Rational(1)};
    auto table = optimal_alpha_sweep(joint, joint.player_values(), Rational(1, 2), alphas);
    REQUIRE(table.size() == 5);
    for (const auto& [alpha, result] : table) CHECK(result.best_revenue == Rational(5, 9));

    // The alpha = 0 entry must agree with the truthful mode.
    auto space = make_search_space(joint.player_values(), Rational(1, 2), SearchMode::Truthful,
                                   Rational(0));
    CHECK(table[0].second.best_revenue == brute_force_optimal(space, joint).best_revenue);
}

TEST_CASE("candidate restriction loses nothing against a denser lattice") {
    // Audit on small instances: eps/2 price lattice cannot beat the default
    // grid + grid+eps + never candidates.
    for (std::size_t points : {2u, 3u}) {
        auto joint = iid_uniform(points, 2);
        auto values = joint.player_values();
        Rational eps(1, static_cast<long long>(points - 1));
        for (auto mode : {SearchMode::Moral, SearchMode::Truthful}) {
            auto space = make_search_space(values, eps, mode, Rational(1));
            SearchSpace dense = space;
            for (auto& c : dense.candidates) c = dense_candidates(values[0], eps);
            SearchOptions options;
            options.pruning = SymmetryPruning::Off;
            auto base = brute_force_optimal(space, joint, options);
            auto audit = brute_force_optimal(dense, joint, options);
            CHECK(base.best_revenue == audit.best_revenue);
        }
    }
}

TEST_CASE("infeasible space is reported") {
    // A mechanism that must be truthful cannot exist when the only candidate
    // prices force two positive profits; easiest to trigger with a candidate
    // list of just zero.
    JointDistribution joint;
    joint.n = 2;
    joint.atoms = {{{Rational(1), Rational(1)}, Rational(1)}};
    SearchSpace space;
    space.n = 2;
    space.value_sets = {{Rational(1)}, {Rational(1)}};
    space.candidates = {{ExtendedPrice::of(Rational(0))}, {ExtendedPrice::of(Rational(0))}};
    space.mode = SearchMode::Truthful;
    CHECK_THROWS_WITH_AS(brute_force_optimal(space, joint), doctest::Contains("feasibility"),
                         AuctionError);
}
