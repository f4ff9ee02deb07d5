#include "auctionlab/mechanism.hpp"

#include <algorithm>

namespace auctionlab {

namespace {

std::size_t value_index(const std::vector<Rational>& values, const Rational& v) {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || !(*it == v)) throw off_grid_error(v.str());
    return static_cast<std::size_t>(it - values.begin());
}

}  // namespace

std::size_t PaymentGrid::tuple_count(int player) const {
    std::size_t count = 1;
    for (int k = 0; k < players(); ++k)
        if (k != player) count *= value_sets[static_cast<std::size_t>(k)].size();
    return count;
}

std::size_t PaymentGrid::tuple_index(int player, std::span<const Rational> profile) const {
    std::size_t index = 0;
    for (int k = 0; k < players(); ++k) {
        if (k == player) continue;
        const auto& vs = value_sets[static_cast<std::size_t>(k)];
        index = index * vs.size() + value_index(vs, profile[static_cast<std::size_t>(k)]);
    }
    return index;
}

std::vector<Rational> PaymentGrid::tuple_values(int player, std::size_t index) const {
    std::vector<Rational> out;
    out.resize(static_cast<std::size_t>(players()) - 1);
    for (int k = players() - 1, pos = players() - 2; k >= 0; --k) {
        if (k == player) continue;
        const auto& vs = value_sets[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(pos)] = vs[index % vs.size()];
        index /= vs.size();
        --pos;
    }
    return out;
}

PaymentGrid PaymentGrid::empty(std::vector<std::vector<Rational>> sets) {
    PaymentGrid g;
    g.value_sets = std::move(sets);
    g.prices.resize(g.value_sets.size());
    for (int i = 0; i < g.players(); ++i)
        g.prices[static_cast<std::size_t>(i)].assign(g.tuple_count(i), ExtendedPrice::never_price());
    return g;
}

void PaymentGrid::validate() const {
    if (value_sets.empty()) throw AuctionError("bad_grid", "payment grid with zero players");
    for (const auto& vs : value_sets) {
        if (vs.empty()) throw AuctionError("bad_grid", "empty value set");
        if (!std::is_sorted(vs.begin(), vs.end()))
            throw AuctionError("bad_grid", "value set not ascending");
        if (std::adjacent_find(vs.begin(), vs.end()) != vs.end())
            throw AuctionError("bad_grid", "duplicate value in value set");
    }
    if (prices.size() != value_sets.size())
        throw AuctionError("bad_grid", "price table player count mismatch");
    for (int i = 0; i < players(); ++i) {
        if (prices[static_cast<std::size_t>(i)].size() != tuple_count(i))
            throw AuctionError("bad_grid", "price table is not total for player " +
                                               std::to_string(i + 1));
        for (const auto& p : prices[static_cast<std::size_t>(i)])
            if (!p.is_never() && p.finite().is_negative())
                throw AuctionError("bad_grid", "negative potential payment " + p.str());
    }
}

bool operator<(const PaymentGrid& a, const PaymentGrid& b) {
    for (std::size_t i = 0; i < a.prices.size() && i < b.prices.size(); ++i) {
        const auto& pa = a.prices[i];
        const auto& pb = b.prices[i];
        for (std::size_t t = 0; t < pa.size() && t < pb.size(); ++t) {
            if (pa[t] < pb[t]) return true;
            if (pb[t] < pa[t]) return false;
        }
        if (pa.size() != pb.size()) return pa.size() < pb.size();
    }
    return a.prices.size() < b.prices.size();
}

bool operator==(const PaymentGrid& a, const PaymentGrid& b) {
    return a.value_sets == b.value_sets && a.prices == b.prices;
}

InstanceSpace::InstanceSpace(const std::vector<std::vector<Rational>>& sets) : sets_(&sets) {
    stride_.resize(sets.size());
    total_ = 1;
    for (std::size_t i = sets.size(); i-- > 0;) {
        stride_[i] = total_;
        total_ *= sets[i].size();
    }
}

std::vector<Rational> InstanceSpace::profile(std::size_t index) const {
    std::vector<Rational> out(sets_->size());
    for (std::size_t i = 0; i < sets_->size(); ++i) {
        const auto& vs = (*sets_)[i];
        out[i] = vs[(index / stride_[i]) % vs.size()];
    }
    return out;
}

std::size_t InstanceSpace::index_of(std::span<const Rational> profile) const {
    std::size_t index = 0;
    for (std::size_t i = 0; i < sets_->size(); ++i)
        index += stride_[i] * value_index((*sets_)[i], profile[i]);
    return index;
}

Outcome allocate(const ProfitMaximizer& m, std::span<const Rational> profile) {
    const PaymentGrid& g = m.grid;
    const int n = g.players();
    int best = kNoSale;
    Rational best_profit;
    Rational best_payment;
    for (int i = 0; i < n; ++i) {
        const ExtendedPrice& p = g.price_at(i, profile);
        if (p.is_never()) continue;
        Rational profit = profile[static_cast<std::size_t>(i)] - p.finite();
        if (profit.is_negative()) continue;
        if (best == kNoSale || profit > best_profit) {
            best = i;
            best_profit = profit;
            best_payment = p.finite();
            continue;
        }
        if (profit == best_profit) {
            bool take = false;
            switch (m.tiebreak) {
                case TieBreakPolicy::HighestPaymentThenLowestIndex:
                    take = p.finite() > best_payment;
                    break;
                case TieBreakPolicy::LowestIndex:
                    take = false;  // earlier index already held
                    break;
                case TieBreakPolicy::HighestValueThenLowestIndex:
                    take = profile[static_cast<std::size_t>(i)] >
                           profile[static_cast<std::size_t>(best)];
                    break;
            }
            if (take) {
                best = i;
                best_payment = p.finite();
            }
        }
    }
    if (best == kNoSale) return Outcome{};
    if (best_profit.is_zero() && !m.sell_at_zero_profit) return Outcome{};
    if (!m.tie_override.empty()) {
        InstanceSpace space(g.value_sets);
        int forced = m.tie_override[space.index_of(profile)];
        if (forced >= 0 && forced != best) {
            const ExtendedPrice& p = g.price_at(forced, profile);
            if (!p.is_never()) {
                Rational profit = profile[static_cast<std::size_t>(forced)] - p.finite();
                if (profit == best_profit) return Outcome{forced, p.finite()};
            }
        }
    }
    return Outcome{best, best_payment};
}

MoralityReport check_alpha_moral(const ProfitMaximizer& m, const Rational& alpha_test) {
    const PaymentGrid& g = m.grid;
    const int n = g.players();
    InstanceSpace space(g.value_sets);
    // Every lie lands on another instance of the same cross product, so all
    // needed outcomes come from one table.
    std::vector<Outcome> outcome(space.count());
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        outcome[idx] = allocate(m, profile);
    }

    MoralityReport report;
    report.alpha = alpha_test;
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        const auto truth_profile = space.profile(idx);
        const Outcome& truth = outcome[idx];
        for (int dev = 0; dev < n; ++dev) {
            const Rational true_value = truth_profile[static_cast<std::size_t>(dev)];
            Rational truth_profit =
                truth.winner == dev ? true_value - truth.payment : Rational(0);
            for (const Rational& lie : g.value_sets[static_cast<std::size_t>(dev)]) {
                auto lied_profile = truth_profile;
                lied_profile[static_cast<std::size_t>(dev)] = lie;
                const Outcome& lied = outcome[space.index_of(lied_profile)];
                Rational lie_profit =
                    lied.winner == dev ? true_value - lied.payment : Rational(0);
                Rational gain = lie_profit - truth_profit;
                if (!(gain > Rational(0))) continue;
                // Aggregate loss of everyone else, measured at their true values.
                Rational loss;
                for (int j = 0; j < n; ++j) {
                    if (j == dev) continue;
                    const Rational vj = truth_profile[static_cast<std::size_t>(j)];
                    Rational before = truth.winner == j ? vj - truth.payment : Rational(0);
                    Rational after = lied.winner == j ? vj - lied.payment : Rational(0);
                    loss += before - after;
                }
                if (gain > alpha_test * loss) {
                    report.moral = false;
                    report.violations.push_back(
                        MoralityViolation{truth_profile, dev, lie, gain, loss});
                }
            }
        }
    }
    return report;
}

TruthfulnessCheck is_truthful(const ProfitMaximizer& m) {
    const PaymentGrid& g = m.grid;
    InstanceSpace space(g.value_sets);
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        int positive = 0;
        for (int i = 0; i < g.players(); ++i) {
            const ExtendedPrice& p = g.price_at(i, profile);
            if (p.is_never()) continue;
            if (profile[static_cast<std::size_t>(i)] > p.finite()) ++positive;
        }
        if (positive >= 2) return TruthfulnessCheck{false, profile};
    }
    return TruthfulnessCheck{};
}

MonotonicityCheck is_monotone_allocation(const ProfitMaximizer& m) {
    const PaymentGrid& g = m.grid;
    const int n = g.players();
    for (int i = 0; i < n; ++i) {
        const auto& own = g.value_sets[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < g.tuple_count(i); ++t) {
            auto opp = g.tuple_values(i, t);
            // Reassemble a full profile with player i's slot varying.
            std::vector<Rational> profile(static_cast<std::size_t>(n));
            for (int k = 0, pos = 0; k < n; ++k) {
                if (k == i) continue;
                profile[static_cast<std::size_t>(k)] = opp[static_cast<std::size_t>(pos)];
                ++pos;
            }
            std::optional<Rational> winning;
            for (const auto& v : own) {
                profile[static_cast<std::size_t>(i)] = v;
                bool wins = allocate(m, profile).winner == i;
                if (wins) {
                    if (!winning) winning = v;
                } else if (winning) {
                    MonotonicityCheck out;
                    out.monotone = false;
                    out.witness = MonotonicityCheck::Witness{i, opp, *winning, v};
                    return out;
                }
            }
        }
    }
    return MonotonicityCheck{};
}

AllocationTable AllocationTable::from_mechanism(const ProfitMaximizer& m) {
    AllocationTable table;
    table.value_sets = m.grid.value_sets;
    InstanceSpace space(table.value_sets);
    table.winner.resize(space.count());
    for (std::size_t idx = 0; idx < space.count(); ++idx)
        table.winner[idx] = allocate(m, space.profile(idx)).winner;
    return table;
}

std::pair<ProfitMaximizer, ProfitMaximizer> lattice_meet_join(const ProfitMaximizer& a,
                                                              const ProfitMaximizer& b) {
    if (a.grid.value_sets != b.grid.value_sets)
        throw AuctionError("allocation_mismatch", "lattice inputs have different value sets");
    auto fa = AllocationTable::from_mechanism(a);
    auto fb = AllocationTable::from_mechanism(b);
    if (fa.winner != fb.winner)
        throw AuctionError("allocation_mismatch",
                           "lattice inputs do not implement the same allocation");

    ProfitMaximizer meet = a;
    ProfitMaximizer join = a;
    for (std::size_t i = 0; i < a.grid.prices.size(); ++i) {
        for (std::size_t t = 0; t < a.grid.prices[i].size(); ++t) {
            const auto& pa = a.grid.prices[i][t];
            const auto& pb = b.grid.prices[i][t];
            meet.grid.prices[i][t] = min(pa, pb);
            join.grid.prices[i][t] = max(pa, pb);
        }
    }

    // The combined grids must keep the allocation wherever the maximal-profit
    // winner is unique; at fresh profit ties the fixed tie-break may pick any
    // maximal player, which the lattice statement permits.
    InstanceSpace space(a.grid.value_sets);
    for (const ProfitMaximizer* m : {&meet, &join}) {
        for (std::size_t idx = 0; idx < space.count(); ++idx) {
            auto profile = space.profile(idx);
            Outcome got = allocate(*m, profile);
            int expected = fa.winner[idx];
            if (got.winner == expected) continue;
            // Tolerated only if both are maximal-profit candidates.
            auto profit_of = [&](int player) -> std::optional<Rational> {
                if (player == kNoSale) return std::nullopt;
                const auto& p = m->grid.price_at(player, profile);
                if (p.is_never()) return std::nullopt;
                return profile[static_cast<std::size_t>(player)] - p.finite();
            };
            auto pg = profit_of(got.winner);
            auto pe = profit_of(expected);
            if (!pg || !pe || !(*pg == *pe))
                throw AuctionError("lattice_defect",
                                   "meet/join changed the allocation outside a profit tie");
        }
    }
    return {meet, join};
}

RuleOutResult rule_out_pattern(const AllocationTable& table) {
    const int n = static_cast<int>(table.value_sets.size());
    InstanceSpace space(table.value_sets);
    std::vector<std::size_t> rest_index;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            // Enumerate fixings of everyone but i and j.
            std::vector<int> others;
            for (int k = 0; k < n; ++k)
                if (k != i && k != j) others.push_back(k);
            std::vector<std::size_t> fix(others.size(), 0);
            while (true) {
                std::vector<Rational> profile(static_cast<std::size_t>(n), Rational(0));
                for (std::size_t o = 0; o < others.size(); ++o)
                    profile[static_cast<std::size_t>(others[o])] =
                        table.value_sets[static_cast<std::size_t>(others[o])][fix[o]];
                const auto& vis = table.value_sets[static_cast<std::size_t>(i)];
                const auto& vjs = table.value_sets[static_cast<std::size_t>(j)];
                auto at = [&](const Rational& vi, const Rational& vj) {
                    profile[static_cast<std::size_t>(i)] = vi;
                    profile[static_cast<std::size_t>(j)] = vj;
                    return table.winner[space.index_of(profile)];
                };
                for (std::size_t a = 0; a < vis.size(); ++a)
                    for (std::size_t a2 = 0; a2 < vis.size(); ++a2) {
                        if (a == a2) continue;
                        for (std::size_t c = 0; c < vjs.size(); ++c)
                            for (std::size_t c2 = 0; c2 < vjs.size(); ++c2) {
                                if (c == c2) continue;
                                if (at(vis[a], vjs[c]) == i && at(vis[a2], vjs[c2]) == i &&
                                    at(vis[a2], vjs[c]) == j && at(vis[a], vjs[c2]) == j) {
                                    RuleOutResult out;
                                    out.found = true;
                                    std::vector<Rational> rest;
                                    for (std::size_t o = 0; o < others.size(); ++o)
                                        rest.push_back(
                                            table.value_sets[static_cast<std::size_t>(others[o])]
                                                            [fix[o]]);
                                    out.witness = RuleOutWitness{
                                        i, j, rest, vis[a], vis[a2], vjs[c], vjs[c2]};
                                    return out;
                                }
                            }
                    }
                // Advance the fixing.
                std::size_t pos = others.size();
                bool done = others.empty();
                while (pos > 0) {
                    --pos;
                    if (++fix[pos] <
                        table.value_sets[static_cast<std::size_t>(others[pos])].size())
                        break;
                    fix[pos] = 0;
                    if (pos == 0) done = true;
                }
                if (done) break;
            }
        }
    }
    return RuleOutResult{};
}

Rational expected_revenue(const ProfitMaximizer& m, const JointDistribution& joint) {
    if (joint.n != m.players())
        throw AuctionError("bad_joint", "joint player count differs from mechanism");
    Rational total;
    for (const auto& [profile, w] : joint.atoms) {
        if (w.is_zero()) continue;
        total += w * allocate(m, profile).payment;
    }
    return total;
}

DominanceCheck dominance_check(const ProfitMaximizer& truthful, const ProfitMaximizer& moral) {
    if (truthful.grid.value_sets != moral.grid.value_sets)
        throw AuctionError("allocation_mismatch", "dominance inputs have different value sets");
    auto t = is_truthful(truthful);
    if (!t.truthful)
        throw AuctionError("not_truthful", "dominance baseline is not truthful");
    auto mono = is_monotone_allocation(truthful);
    if (!mono.monotone)
        throw AuctionError("not_truthful", "dominance baseline is not monotone");
    auto ft = AllocationTable::from_mechanism(truthful);
    auto fm = AllocationTable::from_mechanism(moral);
    if (ft.winner != fm.winner)
        throw AuctionError("allocation_mismatch",
                           "dominance inputs do not implement the same allocation");
    InstanceSpace space(truthful.grid.value_sets);
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        Outcome ot = allocate(truthful, profile);
        if (!ot.sold()) continue;
        Outcome om = allocate(moral, profile);
        if (om.payment > ot.payment) return DominanceCheck{false, profile};
    }
    return DominanceCheck{};
}

namespace {

// Potential payment per the definition: the grid price when some report of
// the player wins against that opponent tuple, infinite otherwise.
bool player_can_win(const ProfitMaximizer& m, int player, std::vector<Rational> profile) {
    for (const Rational& z : m.grid.value_sets[static_cast<std::size_t>(player)]) {
        profile[static_cast<std::size_t>(player)] = z;
        if (allocate(m, profile).winner == player) return true;
    }
    return false;
}

bool side_condition_impl(const ProfitMaximizer& m, const Rational& alpha, bool effective) {
    InstanceSpace space(m.grid.value_sets);
    for (std::size_t idx = 0; idx < space.count(); ++idx) {
        auto profile = space.profile(idx);
        Outcome o = allocate(m, profile);
        if (!o.sold()) continue;
        Rational winner_profit =
            profile[static_cast<std::size_t>(o.winner)] - o.payment;
        for (int j = 0; j < m.players(); ++j) {
            if (j == o.winner) continue;
            const ExtendedPrice& p = m.grid.price_at(j, profile);
            if (p.is_never()) continue;
            Rational loser_profit = profile[static_cast<std::size_t>(j)] - p.finite();
            if (!(loser_profit > alpha * winner_profit)) continue;
            if (effective && !player_can_win(m, j, profile)) continue;
            return false;
        }
    }
    return true;
}

}  // namespace

bool alpha_side_condition(const ProfitMaximizer& m, const Rational& alpha) {
    return side_condition_impl(m, alpha, true);
}

bool alpha_side_condition_raw(const ProfitMaximizer& m, const Rational& alpha) {
    return side_condition_impl(m, alpha, false);
}

}  // namespace auctionlab
