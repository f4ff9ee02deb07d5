#include "auctionlab/myerson.hpp"

#include <algorithm>

namespace auctionlab {

Rational phi_inverse(const DiscreteDistribution& d, const Rational& target) {
    for (const auto& v : d.support()) {
        if (virtual_value(d, v) >= target) return v;
    }
    throw AuctionError("no_preimage",
                       "no preimage: no support value reaches virtual value " + target.str());
}

namespace {

// (virtual value, value, -index): the designation order. Higher wins.
struct DesignationKey {
    Rational phi;
    Rational value;
    int index;

    friend bool operator<(const DesignationKey& a, const DesignationKey& b) {
        if (a.phi != b.phi) return a.phi < b.phi;
        if (a.value != b.value) return a.value < b.value;
        return a.index > b.index;
    }
};

void require_common_full_grid(const std::vector<DiscreteDistribution>& ds) {
    if (ds.empty()) throw AuctionError("bad_parameter", "no distributions given");
    for (const auto& d : ds) {
        d.validate();
        if (d.eps != ds[0].eps)
            throw AuctionError("bad_parameter", "distributions must share the grid step");
        for (const auto& w : d.mass)
            if (w.is_zero())
                throw zero_density_error("full support required on the common grid");
        auto reg = is_regular(d);
        if (!reg.ok)
            throw not_regular_error("witness pair (" + reg.witness->first.str() + ", " +
                                    reg.witness->second.str() + ")");
    }
}

}  // namespace

std::optional<Rational> q_value(const std::vector<DiscreteDistribution>& ds, int player,
                                std::span<const Rational> opponent_values) {
    const auto& own = ds[static_cast<std::size_t>(player)];
    // Best opponent virtual value, taken over the opponents in player order.
    std::optional<Rational> top;
    std::size_t pos = 0;
    for (int j = 0; j < static_cast<int>(ds.size()); ++j) {
        if (j == player) continue;
        Rational phi = virtual_value(ds[static_cast<std::size_t>(j)], opponent_values[pos]);
        if (!top || phi > *top) top = phi;
        ++pos;
    }
    Rational want = max(Rational(0), top.value_or(Rational(0)));
    try {
        return phi_inverse(own, want);
    } catch (const AuctionError& e) {
        if (e.code() == "no_preimage") return std::nullopt;
        throw;
    }
}

PaymentGrid myerson_grid(const std::vector<DiscreteDistribution>& ds) {
    require_common_full_grid(ds);
    const int n = static_cast<int>(ds.size());
    const Rational eps = ds[0].eps;

    std::vector<std::vector<Rational>> value_sets;
    for (const auto& d : ds) value_sets.push_back(d.support());
    PaymentGrid grid = PaymentGrid::empty(value_sets);

    for (int i = 0; i < n; ++i) {
        const auto& own = ds[static_cast<std::size_t>(i)];
        const Rational x_i = reserve_price(own);
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            auto opp = grid.tuple_values(i, t);
            // Best opponent under the designation order.
            std::optional<DesignationKey> rival;
            std::size_t pos = 0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                DesignationKey key{virtual_value(ds[static_cast<std::size_t>(j)], opp[pos]),
                                   opp[pos], j};
                if (!rival || *rival < key) rival = key;
                ++pos;
            }
            ExtendedPrice price;
            if (!rival || rival->phi.is_negative()) {
                // Posted-price regime: nobody competitive, extract the
                // single-buyer optimum.
                price = ExtendedPrice::of(x_i);
            } else {
                Rational q;
                try {
                    q = phi_inverse(own, rival->phi);
                } catch (const AuctionError& e) {
                    if (e.code() != "no_preimage") throw;
                    grid.prices[static_cast<std::size_t>(i)][t] = ExtendedPrice::never_price();
                    continue;
                }
                q = max(q, x_i);
                DesignationKey mine{virtual_value(own, q), q, i};
                bool designated = !(mine < *rival);
                price = ExtendedPrice::of(designated ? q : q + eps);
            }
            grid.prices[static_cast<std::size_t>(i)][t] = price;
        }
    }
    grid.validate();

    // Verify the grid realizes the intended allocation: the designated
    // maximal-virtual-value player wins whenever some virtual value is
    // non-negative, at exactly his grid price.
    ProfitMaximizer m;
    m.grid = grid;
    InstanceSpace space(value_sets);
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        std::optional<DesignationKey> best;
        for (int i = 0; i < n; ++i) {
            DesignationKey key{
                virtual_value(ds[static_cast<std::size_t>(i)], profile[static_cast<std::size_t>(i)]),
                profile[static_cast<std::size_t>(i)], i};
            if (!best || *best < key) best = key;
        }
        int intended = best->phi.is_negative() ? kNoSale : best->index;
        Outcome got = allocate(m, profile);
        if (got.winner != intended)
            throw AuctionError("myerson_inconsistency",
                               "grid does not realize the intended allocation at instance " +
                                   profile[0].str());
    }
    auto t = is_truthful(m);
    if (!t.truthful)
        throw AuctionError("myerson_inconsistency", "constructed grid is not truthful");
    return grid;
}

namespace {

// Sorted-descending view of a tuple, for the processing order.
std::vector<Rational> sorted_desc(std::vector<Rational> values) {
    std::sort(values.begin(), values.end(), [](const Rational& a, const Rational& b) {
        return b < a;
    });
    return values;
}

// Lexicographic comparison of sorted-descending tuples.
bool tuple_precedes(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
        if (a[k] != b[k]) return a[k] < b[k];
    }
    return a.size() < b.size();
}

struct SlotRef {
    int player;
    std::size_t tuple;
    std::vector<Rational> values;
    std::vector<Rational> sorted;
    Rational top;
};

std::vector<SlotRef> all_slots(const PaymentGrid& grid) {
    std::vector<SlotRef> out;
    for (int i = 0; i < grid.players(); ++i) {
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            SlotRef ref;
            ref.player = i;
            ref.tuple = t;
            ref.values = grid.tuple_values(i, t);
            ref.sorted = sorted_desc(ref.values);
            ref.top = ref.sorted.front();
            out.push_back(std::move(ref));
        }
    }
    return out;
}

std::vector<Rational> instance_of(const PaymentGrid& grid, int player,
                                  const std::vector<Rational>& opp, const Rational& own) {
    std::vector<Rational> profile(static_cast<std::size_t>(grid.players()));
    std::size_t pos = 0;
    for (int k = 0; k < grid.players(); ++k) {
        if (k == player) {
            profile[static_cast<std::size_t>(k)] = own;
        } else {
            profile[static_cast<std::size_t>(k)] = opp[pos];
            ++pos;
        }
    }
    return profile;
}

}  // namespace

std::pair<ProfitMaximizer, LiftTrace> lift(const ProfitMaximizer& m,
                                           const DiscreteDistribution& d) {
    auto std_check = is_standard(d);
    if (!std_check.ok)
        throw not_standard_error("witness pair (" + std_check.witness->first.str() + ", " +
                                 std_check.witness->second.str() + ")");
    for (const auto& w : d.mass)
        if (w.is_zero()) throw zero_density_error("lift requires full support");

    const int n = m.players();
    auto grid_points = d.support();
    for (const auto& vs : m.grid.value_sets)
        if (vs != grid_points)
            throw AuctionError("bad_parameter",
                               "lift input value sets must equal the distribution support");

    std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(n), d);
    JointDistribution joint = product_joint(copies);
    const Rational eps = d.eps;
    const Rational x = reserve_price(d);

    ProfitMaximizer current = m;
    LiftTrace trace;
    trace.initial_revenue = expected_revenue(current, joint);
    Rational revenue = trace.initial_revenue;

    auto slots = all_slots(current.grid);
    const std::size_t step_cap = grid_points.size() * slots.size() * 2;

    auto price_of = [&](const SlotRef& s) -> ExtendedPrice& {
        return current.grid.prices[static_cast<std::size_t>(s.player)][s.tuple];
    };
    // On a pure raise of one slot the revenue must hold instance by instance,
    // not just in expectation.
    auto verify_raise = [&](const SlotRef& s, const PaymentGrid& before) {
        ProfitMaximizer old_m = current;
        old_m.grid = before;
        for (const Rational& z : grid_points) {
            auto probe = instance_of(current.grid, s.player, s.values, z);
            if (allocate(current, probe).payment < allocate(old_m, probe).payment)
                throw AuctionError("lift_defect", "a raise lost revenue at a single instance");
        }
    };
    auto record = [&](const SlotRef& s, LiftRule rule, PaymentGrid before,
                      const Rational& rev_before) {
        Rational rev_after = expected_revenue(current, joint);
        if (rev_after < rev_before)
            throw AuctionError("lift_defect", "revenue decreased on a lift step");
        LiftStep step;
        step.player = s.player;
        step.tuple = s.values;
        step.rule = rule;
        step.before = std::move(before);
        step.after = current.grid;
        step.revenue_before = rev_before;
        step.revenue_after = rev_after;
        trace.steps.push_back(std::move(step));
        revenue = rev_after;
        if (trace.steps.size() > step_cap)
            throw AuctionError("lift_defect", "step cap exceeded, lift failed to terminate");
    };

    // Phase 1: tuples whose top is at least the reserve price must present at
    // least that top. Fix the most significant violator first.
    while (true) {
        const SlotRef* violator = nullptr;
        for (const auto& s : slots) {
            if (s.top < x) continue;
            const ExtendedPrice& p = price_of(s);
            if (p.is_never() || p.finite() >= s.top) continue;
            if (!violator || tuple_precedes(violator->sorted, s.sorted)) violator = &s;
        }
        if (!violator) break;

        const SlotRef& s = *violator;
        const Rational p = price_of(s).finite();

        // Invariant carried by the processing order: against this tuple, any
        // player with non-negative profit at a report of at least the current
        // price must himself be worth at least that price.
        for (const Rational& z : grid_points) {
            if (z < p) continue;
            auto probe = instance_of(current.grid, s.player, s.values, z);
            for (int k = 0; k < n; ++k) {
                if (k == s.player) continue;
                const ExtendedPrice& pk = current.grid.price_at(k, probe);
                if (pk.is_never() || probe[static_cast<std::size_t>(k)] < pk.finite()) continue;
                if (probe[static_cast<std::size_t>(k)] < p)
                    throw AuctionError("lift_defect",
                                       "a low-value player turned profitable mid-lift");
            }
        }

        if (!std::binary_search(grid_points.begin(), grid_points.end(), p)) {
            // Off-lattice price: snap it up to the next grid value. The owner
            // keeps winning exactly where he won before and pays more; anyone
            // who overtakes him on a former tie pays at least the old price.
            auto it = std::upper_bound(grid_points.begin(), grid_points.end(), p);
            PaymentGrid before = current.grid;
            Rational rev_before = revenue;
            price_of(s) = ExtendedPrice::of(*it);
            verify_raise(s, before);
            record(s, LiftRule::SmallerPrice, std::move(before), rev_before);
            continue;
        }
        auto instance = instance_of(current.grid, s.player, s.values, p);

        // Someone other than the owner can already afford his price here?
        bool smaller_price_case = false;
        for (int j = 0; j < n && !smaller_price_case; ++j) {
            if (j == s.player) continue;
            const ExtendedPrice& pj = current.grid.price_at(j, instance);
            if (!pj.is_never() && instance[static_cast<std::size_t>(j)] >= pj.finite())
                smaller_price_case = true;
        }

        PaymentGrid before = current.grid;
        Rational rev_before = revenue;
        if (smaller_price_case) {
            price_of(s) = ExtendedPrice::of(p + eps);
            verify_raise(s, before);
            record(s, LiftRule::SmallerPrice, std::move(before), rev_before);
        } else {
            // Highest-value opponent (ties to the lowest player index).
            int j_star = -1;
            Rational vj;
            std::size_t pos = 0;
            for (int j = 0; j < n; ++j) {
                if (j == s.player) continue;
                const Rational& vjj = s.values[pos];
                if (j_star < 0 || vjj > vj) {
                    j_star = j;
                    vj = vjj;
                }
                ++pos;
            }
            auto opp_of_j = instance;  // instance with player j_star removed
            std::vector<Rational> tuple_j;
            for (int k = 0; k < n; ++k)
                if (k != j_star) tuple_j.push_back(instance[static_cast<std::size_t>(k)]);
            std::size_t tj = current.grid.tuple_index(j_star, instance);
            // Lower the opponent to his value (top-normalizing from Never or
            // any higher price) and raise the violator by eps, in one step.
            current.grid.prices[static_cast<std::size_t>(j_star)][tj] = ExtendedPrice::of(vj);
            price_of(s) = ExtendedPrice::of(p + eps);
            record(s, LiftRule::HigherPriceSwap, std::move(before), rev_before);
        }
    }

    // Phase 2: below the reserve region, post the reserve price. Processed in
    // the same significance order so that earlier fixes shield later ones.
    std::vector<const SlotRef*> below;
    for (const auto& s : slots)
        if (s.top < x) below.push_back(&s);
    std::sort(below.begin(), below.end(), [](const SlotRef* a, const SlotRef* b) {
        if (a->sorted != b->sorted) return tuple_precedes(b->sorted, a->sorted);
        if (a->player != b->player) return a->player < b->player;
        return a->tuple < b->tuple;
    });
    for (const SlotRef* s : below) {
        ExtendedPrice& p = price_of(*s);
        if (!p.is_never() && p.finite() == x) continue;
        PaymentGrid before = current.grid;
        Rational rev_before = revenue;
        p = ExtendedPrice::of(x);
        record(*s, LiftRule::BelowMonopolist, std::move(before), rev_before);
    }

    trace.final_revenue = revenue;
    auto t = is_truthful(current);
    if (!t.truthful)
        throw AuctionError("lift_defect", "lift output failed the truthfulness check");
    return {current, trace};
}

bool rev_max_price_check(const ProfitMaximizer& m, const DiscreteDistribution& d, int player,
                         std::span<const Rational> tuple, const Rational& t) {
    const Rational x = reserve_price(d);
    if (t < x)
        throw AuctionError("hypothesis_fails",
                           "threshold " + t.str() + " is below the reserve price " + x.str());
    const int n = m.players();
    std::vector<Rational> opp(tuple.begin(), tuple.end());

    // Hypothesis: everyone else has strictly negative potential profit in
    // every instance (z, tuple) with z >= t.
    for (const Rational& z : m.grid.value_sets[static_cast<std::size_t>(player)]) {
        if (z < t) continue;
        auto instance = instance_of(m.grid, player, opp, z);
        for (int j = 0; j < n; ++j) {
            if (j == player) continue;
            const ExtendedPrice& pj = m.grid.price_at(j, instance);
            if (!pj.is_never() && !(instance[static_cast<std::size_t>(j)] < pj.finite()))
                throw AuctionError("hypothesis_fails",
                                   "player " + std::to_string(j + 1) +
                                       " is not strictly unprofitable at z=" + z.str());
        }
    }

    PaymentGrid shape = PaymentGrid::empty(m.grid.value_sets);
    std::size_t slot = shape.tuple_index(player, instance_of(m.grid, player, opp, opp[0]));
    const ExtendedPrice& p = m.grid.prices[static_cast<std::size_t>(player)][slot];
    if (p.is_never() || p.finite() <= t) return true;  // vacuous

    std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(n), d);
    JointDistribution joint = product_joint(copies);
    ProfitMaximizer lowered = m;
    lowered.grid.prices[static_cast<std::size_t>(player)][slot] =
        ExtendedPrice::of(p.finite() - d.eps);
    return expected_revenue(lowered, joint) >= expected_revenue(m, joint);
}

}  // namespace auctionlab
