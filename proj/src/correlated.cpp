#include "auctionlab/correlated.hpp"

#include <algorithm>
#include <map>

#include "auctionlab/prng.hpp"

namespace auctionlab {

namespace {

// Smallest value in `own` that makes `player` the top bidder against `opp`
// (strictly above everyone, or tied while holding the lowest player index).
std::optional<Rational> min_top_value(const std::vector<Rational>& own, int player,
                                      const std::vector<Rational>& opp,
                                      const std::vector<int>& opp_players) {
    Rational top = opp.empty() ? Rational(0) : opp[0];
    for (const auto& v : opp) top = max(top, v);
    bool wins_tie = true;
    for (std::size_t k = 0; k < opp.size(); ++k)
        if (opp[k] == top && opp_players[k] < player) wins_tie = false;
    if (opp.empty()) return own.empty() ? std::nullopt : std::optional<Rational>(own.front());
    for (const auto& v : own) {
        if (v > top || (v == top && wins_tie)) return v;
    }
    return std::nullopt;
}

}  // namespace

LookaheadResult lookahead(const JointDistribution& joint) {
    joint.validate();
    auto value_sets = joint.player_values();
    PaymentGrid grid = PaymentGrid::empty(value_sets);
    const int n = joint.n;

    for (int i = 0; i < n; ++i) {
        std::vector<int> opp_players;
        for (int k = 0; k < n; ++k)
            if (k != i) opp_players.push_back(k);
        const auto& own = value_sets[static_cast<std::size_t>(i)];
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
            auto opp = grid.tuple_values(i, t);
            auto threshold = min_top_value(own, i, opp, opp_players);
            if (!threshold) continue;  // cannot be top: stays Never

            // Conditional of v_i given these exact opponent values and being top.
            std::map<Rational, Rational> conditional;
            Rational total;
            for (const auto& [profile, w] : joint.atoms) {
                if (w.is_zero()) continue;
                bool match = true;
                std::size_t pos = 0;
                for (int k = 0; k < n && match; ++k) {
                    if (k == i) continue;
                    match = profile[static_cast<std::size_t>(k)] == opp[pos];
                    ++pos;
                }
                if (!match) continue;
                const Rational& vi = profile[static_cast<std::size_t>(i)];
                if (vi < *threshold) continue;
                conditional[vi] += w;
                total += w;
            }
            if (total.is_zero()) continue;  // top event unreachable: Never

            Marginal marginal;
            for (const auto& [v, w] : conditional) marginal.atoms.emplace_back(v, w / total);
            auto [price, offered_revenue] = best_take_it_or_leave_it(marginal);
            (void)offered_revenue;
            grid.prices[static_cast<std::size_t>(i)][t] = ExtendedPrice::of(price);
        }
    }
    grid.validate();

    LookaheadResult out;
    out.mechanism.grid = std::move(grid);
    out.mechanism.alpha = Rational(0);
    auto check = is_truthful(out.mechanism);
    if (!check.truthful)
        throw AuctionError("lookahead_defect", "lookahead grid failed the truthfulness check");
    out.revenue = expected_revenue(out.mechanism, joint);
    return out;
}

ProfitMaximizer moralize_transform(const ProfitMaximizer& m, const Rational& eps_shift,
                                   const ExtendedPrice& base_price) {
    if (m.players() != 2)
        throw AuctionError("bad_parameter", "transform is defined for two players");
    if (eps_shift.is_negative())
        throw AuctionError("bad_parameter", "shift must be non-negative");
    auto check = is_truthful(m);
    if (!check.truthful)
        throw AuctionError("not_truthful_input", "transform requires a truthful mechanism");

    ProfitMaximizer out = m;
    out.alpha = Rational(1);
    for (auto& p : out.grid.prices[0]) {
        if (p.is_never()) continue;
        Rational lowered = p.finite() - eps_shift;
        p = ExtendedPrice::of(lowered.is_negative() ? Rational(0) : lowered);
    }
    for (auto& p : out.grid.prices[1]) p = base_price;
    out.grid.validate();
    return out;
}

TwoApproxResult two_approx_check(const JointDistribution& joint, const Rational& alpha,
                                 const Rational& candidate_eps, const SearchOptions& options) {
    auto la = lookahead(joint);
    auto space = make_search_space(joint.player_values(), candidate_eps, SearchMode::Moral, alpha);
    auto opt = brute_force_optimal(space, joint, options);

    TwoApproxResult result;
    result.lookahead_revenue = la.revenue;
    result.optimal_moral_revenue = opt.best_revenue;
    if (opt.best_revenue.is_zero()) {
        result.ratio = Rational(1);
        result.pass = true;
        return result;
    }
    result.ratio = la.revenue / opt.best_revenue;
    result.pass = !(result.ratio < Rational(1, 2));
    return result;
}

namespace {

JointDistribution sample_joint(Prng& rng, const GapSearchParams& params) {
    Rational inv = Rational(1) / params.eps;
    auto grid_points = static_cast<std::size_t>(inv.num()) + 1;

    auto sample_support = [&](std::size_t cap) {
        std::size_t size = 2 + rng.index(cap - 1);  // 2..cap values
        auto picks = rng.distinct_indices(grid_points, std::min(size, grid_points));
        std::vector<Rational> values;
        for (auto k : picks)
            values.push_back(params.eps * Rational(static_cast<long long>(k)));
        return values;
    };
    auto v1 = sample_support(static_cast<std::size_t>(params.support_cap));
    auto v2 = sample_support(static_cast<std::size_t>(params.support_cap));

    // Random subset of the profile cross product, weighted on a common
    // denominator lattice; zero cells drop out in normalize().
    std::size_t cells = v1.size() * v2.size();
    std::size_t atom_count = 2 + rng.index(cells - 1);
    auto chosen = rng.distinct_indices(cells, std::min(atom_count, cells));
    long long denom = 2 + static_cast<long long>(rng.index(
                              static_cast<std::size_t>(params.denominator_cap) - 1));

    // Stars and bars: split `denom` units across the chosen cells.
    std::vector<long long> cuts;
    for (std::size_t k = 0; k + 1 < chosen.size(); ++k)
        cuts.push_back(static_cast<long long>(rng.below(static_cast<std::uint64_t>(denom) + 1)));
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(denom);

    JointDistribution joint;
    joint.n = 2;
    long long prev = 0;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
        long long units = cuts[k] - prev;
        prev = cuts[k];
        if (units == 0) continue;
        std::size_t cell = chosen[k];
        joint.atoms.push_back(
            {{v1[cell / v2.size()], v2[cell % v2.size()]}, Rational(units, denom)});
    }
    joint.normalize();
    return joint;
}

}  // namespace

GapInstance gap_search(const GapSearchParams& params, const SearchOptions& options) {
    GapInstance best;
    best.gap = Rational(-1);
    std::uint64_t skipped = 0;

    Prng rng(params.seed);
    for (std::uint64_t sample = 0; sample < params.samples; ++sample) {
        JointDistribution joint = sample_joint(rng, params);
        if (joint.atoms.empty()) {
            ++skipped;
            continue;
        }
        joint.validate();

        MultiSearchRequest request;
        request.value_sets = joint.player_values();
        for (const auto& vs : request.value_sets)
            request.candidates.push_back(default_candidates(vs, params.eps));
        request.moral_alphas = {Rational(1)};
        request.want_truthful = true;

        MultiSearchResult result;
        try {
            result = brute_force_multi(request, joint, options);
        } catch (const AuctionError& e) {
            if (e.code() == "space_too_large") {
                ++skipped;
                continue;
            }
            throw;
        }
        if (!result.moral[0].found || !result.truthful.found) {
            ++skipped;
            continue;
        }
        Rational gap = result.moral[0].best_revenue - result.truthful.best_revenue;
        if (gap.is_negative())
            throw AuctionError("gap_defect", "optimal moral fell below optimal truthful");
        if (gap > best.gap) {
            best.joint = std::move(joint);
            best.moral = std::move(result.moral[0]);
            best.truthful = std::move(result.truthful);
            best.gap = gap;
            best.sample_index = sample;
        }
    }
    best.samples_run = params.samples;
    best.samples_skipped = skipped;
    if (best.gap.is_negative())
        throw AuctionError("gap_defect", "no sample produced a searchable joint");
    return best;
}

bool HPropertyReport::all_true() const {
    for (const auto& p : properties)
        if (p.status != PropertyStatus::True) return false;
    return true;
}

HPropertyReport validate_h_properties(const JointDistribution& joint, const Rational& alpha,
                                      const Rational& eps, const Rational& delta,
                                      const Rational& e_approx, const SearchOptions& options) {
    joint.validate();
    if (joint.n != 2)
        throw AuctionError("bad_parameter", "the gap-instance validator expects two players");
    HPropertyReport report;
    report.e_approx = e_approx;

    auto add = [&](const std::string& name, PropertyStatus status, const std::string& witness) {
        report.properties.push_back(HProperty{name, status, witness});
    };

    // 1. Finite support: structural for this atom representation.
    add("finite_support", PropertyStatus::True,
        std::to_string(joint.atoms.size()) + " atoms");

    // 2. Every value at least 1.
    {
        PropertyStatus status = PropertyStatus::True;
        std::string witness;
        for (const auto& [profile, w] : joint.atoms) {
            (void)w;
            for (const auto& v : profile)
                if (v < Rational(1)) {
                    status = PropertyStatus::False;
                    witness = "value " + v.str();
                    break;
                }
            if (status == PropertyStatus::False) break;
        }
        add("values_at_least_one", status, witness);
    }

    auto values = joint.player_values();

    // 3. Player-1 values pairwise separated by more than eps.
    {
        PropertyStatus status = PropertyStatus::True;
        std::string witness;
        const auto& v1 = values[0];
        for (std::size_t a = 0; a + 1 < v1.size() && status == PropertyStatus::True; ++a)
            if (!(v1[a + 1] - v1[a] > eps)) {
                status = PropertyStatus::False;
                witness = "|" + v1[a + 1].str() + " - " + v1[a].str() + "| <= " + eps.str();
            }
        add("player1_separation", status, witness);
    }

    // 4. Player-2 values within [1, 1 + eps*alpha].
    {
        PropertyStatus status = PropertyStatus::True;
        std::string witness;
        Rational hi = Rational(1) + eps * alpha;
        for (const auto& v : values[1])
            if (v < Rational(1) || v > hi) {
                status = PropertyStatus::False;
                witness = "value " + v.str() + " outside [1, " + hi.str() + "]";
                break;
            }
        add("player2_band", status, witness);
    }

    // 5 and 6 need the optimal truthful mechanism.
    std::optional<SearchResult> truthful;
    std::string search_failure;
    try {
        auto space = make_search_space(values, eps, SearchMode::Truthful, Rational(0));
        truthful = brute_force_optimal(space, joint, options);
    } catch (const AuctionError& e) {
        search_failure = e.what();
    }

    Rational bound = e_approx / (e_approx - Rational(1)) + delta;
    if (!truthful) {
        add("truthful_revenue_bound", PropertyStatus::Unverifiable, search_failure);
        add("no_allocation_optimum", PropertyStatus::Unverifiable, search_failure);
        return report;
    }
    {
        bool ok = !(truthful->best_revenue > bound);
        add("truthful_revenue_bound", ok ? PropertyStatus::True : PropertyStatus::False,
            "optimal truthful " + truthful->best_revenue.str() + " vs bound " + bound.str());
    }

    // 6. Some optimal truthful grid never allocates player 2 and leaves the
    // item unsold with probability at least 1/(e-1). Scan all optima.
    {
        Rational no_sale_floor = Rational(1) / (e_approx - Rational(1));
        auto space = make_search_space(values, eps, SearchMode::Truthful, Rational(0));
        std::uint64_t total = space.size();
        PropertyStatus status = PropertyStatus::False;
        std::string witness = "no optimal truthful mechanism qualifies";
        if (total > options.cap) {
            status = PropertyStatus::Unverifiable;
            witness = "optimum scan over the cap";
        } else {
            // Plain mixed-radix enumeration; tiny for the intended files.
            std::vector<std::size_t> radices;
            std::vector<std::pair<int, std::size_t>> slots;
            PaymentGrid shape_grid = PaymentGrid::empty(values);
            for (int i = 0; i < 2; ++i)
                for (std::size_t t = 0; t < shape_grid.tuple_count(i); ++t) {
                    slots.emplace_back(i, t);
                    radices.push_back(space.candidates[static_cast<std::size_t>(i)].size());
                }
            std::vector<std::size_t> digit(slots.size(), 0);
            bool done = false;
            while (!done) {
                ProfitMaximizer m;
                m.grid = shape_grid;
                for (std::size_t s = 0; s < slots.size(); ++s)
                    m.grid.prices[static_cast<std::size_t>(slots[s].first)][slots[s].second] =
                        space.candidates[static_cast<std::size_t>(slots[s].first)][digit[s]];
                if (is_truthful(m).truthful &&
                    expected_revenue(m, joint) == truthful->best_revenue) {
                    bool player2_free = true;
                    Rational no_sale;
                    for (const auto& [profile, w] : joint.atoms) {
                        Outcome o = allocate(m, profile);
                        if (o.winner == 1) player2_free = false;
                        if (!o.sold()) no_sale += w;
                    }
                    if (player2_free && !(no_sale < no_sale_floor)) {
                        status = PropertyStatus::True;
                        witness = "no-sale probability " + no_sale.str();
                        done = true;
                        break;
                    }
                }
                std::size_t pos = slots.size();
                while (pos > 0) {
                    --pos;
                    if (++digit[pos] < radices[pos]) break;
                    digit[pos] = 0;
                    if (pos == 0) done = true;
                }
                if (slots.empty()) done = true;
            }
        }
        add("no_allocation_optimum", status, witness);
    }
    return report;
}

}  // namespace auctionlab
