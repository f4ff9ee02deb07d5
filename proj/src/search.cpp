#include "auctionlab/search.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace auctionlab {

namespace {

constexpr std::uint64_t kSaturated = UINT64_MAX;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a == 0 || b == 0) return 0;
    if (a > kSaturated / b) return kSaturated;
    return a * b;
}

}  // namespace

std::uint64_t SearchSpace::size() const {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        std::size_t tuples = 1;
        for (int k = 0; k < n; ++k)
            if (k != i) tuples *= value_sets[static_cast<std::size_t>(k)].size();
        for (std::size_t t = 0; t < tuples; ++t)
            total = saturating_mul(total, candidates[static_cast<std::size_t>(i)].size());
    }
    return total;
}

std::vector<ExtendedPrice> default_candidates(const std::vector<Rational>& values,
                                              const Rational& eps) {
    std::vector<Rational> finite;
    for (const auto& v : values) {
        finite.push_back(v);
        finite.push_back(v + eps);
    }
    std::sort(finite.begin(), finite.end());
    finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
    std::vector<ExtendedPrice> out;
    out.reserve(finite.size() + 1);
    for (auto& v : finite) out.push_back(ExtendedPrice::of(std::move(v)));
    out.push_back(ExtendedPrice::never_price());
    return out;
}

std::vector<ExtendedPrice> dense_candidates(const std::vector<Rational>& values,
                                            const Rational& eps) {
    Rational top = values.front();
    for (const auto& v : values) top = max(top, v);
    Rational step = eps / Rational(2);
    std::vector<ExtendedPrice> out;
    for (Rational p(0); p <= top + eps; p += step) out.push_back(ExtendedPrice::of(p));
    out.push_back(ExtendedPrice::never_price());
    return out;
}

SearchSpace make_search_space(const std::vector<std::vector<Rational>>& value_sets,
                              const Rational& eps, SearchMode mode, const Rational& alpha) {
    SearchSpace space;
    space.n = static_cast<int>(value_sets.size());
    space.value_sets = value_sets;
    for (const auto& vs : value_sets) space.candidates.push_back(default_candidates(vs, eps));
    space.mode = mode;
    space.alpha = alpha;
    return space;
}

namespace {

// One tracked optimum: either the truthful one or a moral one at some alpha.
struct Target {
    bool truthful = false;
    Rational alpha;  // used when !truthful
};

struct Best {
    bool any = false;
    Rational revenue;
    std::vector<std::uint16_t> encoding;  // candidate index per slot
    std::uint64_t count = 0;

    void offer(const Rational& rev, const std::vector<std::uint16_t>& enc, std::uint64_t mult) {
        if (!any || rev > revenue) {
            any = true;
            revenue = rev;
            encoding = enc;
            count = mult;
        } else if (rev == revenue) {
            count += mult;
        }
    }

    // Fold `other` into this, preferring higher revenue; on ties the earlier
    // operand (this) keeps the grid, counts add.
    void merge(const Best& other) {
        if (!other.any) return;
        if (!any || other.revenue > revenue) {
            *this = other;
        } else if (other.revenue == revenue) {
            count += other.count;
        }
    }
};

// Per-instance static data for the enumeration.
struct InstanceData {
    std::vector<std::uint32_t> slot;   // per player, global slot id
    std::vector<Rational> value;       // per player
    Rational weight;                   // joint weight (zero when not an atom)
    Rational surplus;                  // max value: upper bound on any payment
};

struct Fiber {
    std::vector<std::uint32_t> instances;
};

// Evaluation of one instance under the current price assignment:
// max-profit winner under the fixed tie-break, strict-positive count, and the
// minimal alpha making the side condition hold here.
struct InstanceEval {
    Rational revenue;       // weight * payment
    Rational alpha_min;     // 0 when no positive loser
    bool truthful_ok;       // at most one strictly positive profit
};

class Engine {
public:
    Engine(const MultiSearchRequest& request, const JointDistribution& joint,
           const SearchOptions& options)
        : request_(request), options_(options) {
        n_ = static_cast<int>(request.value_sets.size());
        build_targets();
        full_size_ = compute_full_size();
        choose_layout(joint);
        build_instances(joint);
        build_suffix_bounds();
    }

    MultiSearchResult run() {
        enumerate();
        return assemble();
    }

    std::uint64_t full_size() const { return full_size_; }

private:
    const MultiSearchRequest& request_;
    SearchOptions options_;
    int n_ = 0;

    std::vector<Target> targets_;
    std::uint64_t full_size_ = 0;
    bool symmetric_ = false;  // shared price function across players
    bool dedup_ = false;      // canonical representatives under player swap (n = 2)
    std::uint64_t enumerated_estimate_ = 0;

    // Slot layout. Plain mode: player-major, slot = offset[i] + tuple index.
    // Symmetric mode: one slot per sorted opponent multiset of the shared
    // value set, shared by all players.
    std::vector<std::uint32_t> slot_offset_;          // per player (plain mode)
    std::size_t slot_count_ = 0;
    std::vector<const std::vector<ExtendedPrice>*> slot_candidates_;
    std::vector<std::vector<Rational>> symmetric_tuples_;  // sorted tuples (symmetric mode)

    std::vector<InstanceData> instances_;
    std::vector<Fiber> fibers_;               // per slot
    std::vector<Rational> suffix_surplus_;    // per depth: max revenue still open

    // For dedup: slots of player 0 and player 1 correspond by tuple index.
    std::size_t player_slot_count_ = 0;  // plain mode, per player (n = 2 dedup)

    std::vector<std::vector<Best>> task_results_;  // [task][target]
    std::mutex floor_mutex_;
    std::optional<Rational> prune_floor_;  // min over targets of best-so-far

    void build_targets() {
        for (const auto& a : request_.moral_alphas) targets_.push_back(Target{false, a});
        if (request_.want_truthful) targets_.push_back(Target{true, Rational(0)});
        if (targets_.empty())
            throw AuctionError("bad_search", "no search target (no alphas, no truthful)");
    }

    std::uint64_t compute_full_size() const {
        std::uint64_t total = 1;
        for (int i = 0; i < n_; ++i) {
            std::size_t tuples = 1;
            for (int k = 0; k < n_; ++k)
                if (k != i) tuples *= request_.value_sets[static_cast<std::size_t>(k)].size();
            for (std::size_t t = 0; t < tuples; ++t)
                total = saturating_mul(total,
                                       request_.candidates[static_cast<std::size_t>(i)].size());
        }
        return total;
    }

    bool players_identical() const {
        for (int i = 1; i < n_; ++i) {
            if (request_.value_sets[static_cast<std::size_t>(i)] != request_.value_sets[0])
                return false;
            if (request_.candidates[static_cast<std::size_t>(i)] != request_.candidates[0])
                return false;
        }
        return true;
    }

    void choose_layout(const JointDistribution& joint) {
        bool identical = players_identical();
        bool exch = identical && joint.exchangeable();
        auto mode = options_.pruning;
        if (mode == SymmetryPruning::Auto) {
            if (full_size_ <= options_.cap) {
                mode = (n_ == 2 && exch) ? SymmetryPruning::OrbitDedup : SymmetryPruning::Off;
            } else if (n_ == 2 && exch) {
                mode = SymmetryPruning::OrbitDedup;
            } else if (exch) {
                mode = SymmetryPruning::SymmetricRestrict;
            } else {
                mode = SymmetryPruning::Off;
            }
        }
        if (mode == SymmetryPruning::OrbitDedup) {
            if (n_ != 2 || !exch)
                throw AuctionError("bad_search",
                                   "orbit dedup requires two exchangeable identical players");
            dedup_ = true;
        } else if (mode == SymmetryPruning::SymmetricRestrict) {
            if (!exch)
                throw AuctionError("bad_search",
                                   "symmetric restriction requires an exchangeable joint");
            symmetric_ = true;
        }

        if (symmetric_) {
            build_symmetric_slots();
            enumerated_estimate_ = 1;
            for (std::size_t s = 0; s < slot_count_; ++s)
                enumerated_estimate_ =
                    saturating_mul(enumerated_estimate_, slot_candidates_[s]->size());
        } else {
            build_plain_slots();
            enumerated_estimate_ = full_size_;
            if (dedup_) {
                // (N^2 + N) / 2 representatives where N = per-player prefix count.
                std::uint64_t per_player = 1;
                for (std::size_t t = 0; t < player_slot_count_; ++t)
                    per_player = saturating_mul(per_player, request_.candidates[0].size());
                if (per_player != kSaturated)
                    enumerated_estimate_ = per_player % 2 == 0
                                               ? per_player / 2 * (per_player + 1)
                                               : (per_player + 1) / 2 * per_player;
            }
        }
        if (enumerated_estimate_ > options_.cap)
            throw AuctionError("space_too_large",
                               "search space of " + std::to_string(enumerated_estimate_) +
                                   " grids exceeds the cap of " + std::to_string(options_.cap));
    }

    void build_plain_slots() {
        slot_offset_.resize(static_cast<std::size_t>(n_));
        std::uint32_t next = 0;
        for (int i = 0; i < n_; ++i) {
            slot_offset_[static_cast<std::size_t>(i)] = next;
            std::size_t tuples = 1;
            for (int k = 0; k < n_; ++k)
                if (k != i) tuples *= request_.value_sets[static_cast<std::size_t>(k)].size();
            if (i == 0) player_slot_count_ = tuples;
            for (std::size_t t = 0; t < tuples; ++t)
                slot_candidates_.push_back(&request_.candidates[static_cast<std::size_t>(i)]);
            next += static_cast<std::uint32_t>(tuples);
        }
        slot_count_ = next;
    }

    void build_symmetric_slots() {
        // Sorted (ascending) opponent tuples of length n-1 over the shared set.
        const auto& values = request_.value_sets[0];
        std::vector<std::size_t> idx(static_cast<std::size_t>(n_ - 1), 0);
        while (true) {
            std::vector<Rational> tuple;
            for (auto k : idx) tuple.push_back(values[k]);
            symmetric_tuples_.push_back(tuple);
            // next non-decreasing index vector
            std::size_t pos = idx.size();
            bool done = idx.empty();
            while (pos > 0) {
                --pos;
                if (++idx[pos] < values.size()) {
                    for (std::size_t q = pos + 1; q < idx.size(); ++q) idx[q] = idx[pos];
                    break;
                }
                if (pos == 0) done = true;
            }
            if (done || idx[0] >= values.size()) break;
        }
        slot_count_ = symmetric_tuples_.size();
        for (std::size_t s = 0; s < slot_count_; ++s)
            slot_candidates_.push_back(&request_.candidates[0]);
    }

    std::uint32_t symmetric_slot_of(std::vector<Rational> tuple) const {
        std::sort(tuple.begin(), tuple.end());
        auto it = std::lower_bound(symmetric_tuples_.begin(), symmetric_tuples_.end(), tuple);
        return static_cast<std::uint32_t>(it - symmetric_tuples_.begin());
    }

    void build_instances(const JointDistribution& joint) {
        InstanceSpace space(request_.value_sets);
        instances_.resize(space.count());
        PaymentGrid shape = PaymentGrid::empty(request_.value_sets);
        for (std::size_t idx = 0; idx < space.count(); ++idx) {
            auto profile = space.profile(idx);
            InstanceData data;
            data.value = profile;
            data.slot.resize(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) {
                if (symmetric_) {
                    std::vector<Rational> opp;
                    for (int k = 0; k < n_; ++k)
                        if (k != i) opp.push_back(profile[static_cast<std::size_t>(k)]);
                    data.slot[static_cast<std::size_t>(i)] = symmetric_slot_of(std::move(opp));
                } else {
                    data.slot[static_cast<std::size_t>(i)] =
                        slot_offset_[static_cast<std::size_t>(i)] +
                        static_cast<std::uint32_t>(shape.tuple_index(i, profile));
                }
            }
            data.surplus = profile[0];
            for (const auto& v : profile) data.surplus = max(data.surplus, v);
            instances_[idx] = std::move(data);
        }
        for (const auto& [profile, w] : joint.atoms) {
            if (w.is_zero()) continue;
            instances_[space.index_of(profile)].weight += w;
        }
        fibers_.assign(slot_count_, Fiber{});
        for (std::size_t idx = 0; idx < instances_.size(); ++idx) {
            std::uint32_t last = 0;
            for (auto s : instances_[idx].slot) last = std::max(last, s);
            fibers_[last].instances.push_back(static_cast<std::uint32_t>(idx));
        }
    }

    void build_suffix_bounds() {
        suffix_surplus_.assign(slot_count_ + 1, Rational(0));
        for (std::size_t s = slot_count_; s-- > 0;) {
            Rational acc = suffix_surplus_[s + 1];
            for (auto idx : fibers_[s].instances)
                if (!instances_[idx].weight.is_zero())
                    acc += instances_[idx].weight * instances_[idx].surplus;
            suffix_surplus_[s] = acc;
        }
    }

    InstanceEval evaluate_instance(const InstanceData& inst,
                                   const std::vector<std::uint16_t>& choice) const {
        InstanceEval ev;
        ev.alpha_min = Rational(0);
        ev.truthful_ok = true;
        int best = kNoSale;
        Rational best_profit, best_payment;
        int positives = 0;
        for (int i = 0; i < n_; ++i) {
            const auto s = inst.slot[static_cast<std::size_t>(i)];
            const ExtendedPrice& p = (*slot_candidates_[s])[choice[s]];
            if (p.is_never()) continue;
            Rational profit = inst.value[static_cast<std::size_t>(i)] - p.finite();
            if (profit > Rational(0)) ++positives;
            if (profit.is_negative()) continue;
            if (best == kNoSale || profit > best_profit ||
                (profit == best_profit && p.finite() > best_payment)) {
                best = i;
                best_profit = profit;
                best_payment = p.finite();
            }
        }
        if (positives >= 2) ev.truthful_ok = false;
        if (best != kNoSale) {
            if (!inst.weight.is_zero()) ev.revenue = inst.weight * best_payment;
            // Minimal alpha for the raw side condition at this instance:
            // max over losers of profit_j / winner profit, when profit_j > 0.
            if (positives >= 2 || (positives == 1 && best_profit.is_zero())) {
                for (int j = 0; j < n_; ++j) {
                    if (j == best) continue;
                    const auto s = inst.slot[static_cast<std::size_t>(j)];
                    const ExtendedPrice& p = (*slot_candidates_[s])[choice[s]];
                    if (p.is_never()) continue;
                    Rational profit = inst.value[static_cast<std::size_t>(j)] - p.finite();
                    if (!(profit > Rational(0))) continue;
                    // winner profit >= loser profit > 0 here
                    ev.alpha_min = max(ev.alpha_min, profit / best_profit);
                }
            }
        }
        return ev;
    }

    struct DfsFrame {
        Rational revenue;     // partial revenue up to this depth
        Rational alpha_min;   // max over evaluated fibers
        bool truthful_ok;
    };

    void enumerate() {
        // Task split: fix the first slot's candidate (symmetric/plain alike).
        std::size_t split_slot_count = slot_count_ >= 1 ? 1 : 0;
        std::size_t task_count = 1;
        for (std::size_t s = 0; s < split_slot_count; ++s)
            task_count *= slot_candidates_[s]->size();
        task_results_.assign(task_count, std::vector<Best>(targets_.size()));

        int threads = options_.threads > 0
                          ? options_.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
        threads = std::min<int>(threads, static_cast<int>(task_count));

        std::atomic<std::size_t> next_task{0};
        auto worker = [&]() {
            while (true) {
                std::size_t task = next_task.fetch_add(1);
                if (task >= task_count) return;
                run_task(task, split_slot_count);
            }
        };
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
    }

    void run_task(std::size_t task, std::size_t split_slot_count) {
        std::vector<std::uint16_t> choice(slot_count_, 0);
        std::vector<DfsFrame> frames(slot_count_ + 1);
        frames[0] = DfsFrame{Rational(0), Rational(0), true};
        std::vector<Best> local(targets_.size());

        // Decode the task prefix.
        std::size_t rem = task;
        for (std::size_t s = split_slot_count; s-- > 0;) {
            choice[s] = static_cast<std::uint16_t>(rem % slot_candidates_[s]->size());
            rem /= slot_candidates_[s]->size();
        }
        // Evaluate prefix fibers (never prunes: feasibility is per-target).
        for (std::size_t s = 0; s < split_slot_count; ++s) {
            DfsFrame f = frames[s];
            apply_slot(s, choice, f);
            frames[s + 1] = f;
        }
        dfs(split_slot_count, choice, frames, local);
        task_results_[task] = std::move(local);
    }

    // Applies slot s's current choice to the frame by evaluating its fiber.
    void apply_slot(std::size_t s, const std::vector<std::uint16_t>& choice, DfsFrame& f) const {
        for (auto idx : fibers_[s].instances) {
            InstanceEval ev = evaluate_instance(instances_[idx], choice);
            if (!ev.revenue.is_zero()) f.revenue += ev.revenue;
            if (!ev.truthful_ok) f.truthful_ok = false;
            f.alpha_min = max(f.alpha_min, ev.alpha_min);
        }
    }

    std::optional<Rational> current_floor() {
        std::lock_guard<std::mutex> lock(floor_mutex_);
        return prune_floor_;
    }

    void raise_floor(const std::vector<Best>& local) {
        bool all = true;
        Rational lo;
        bool first = true;
        for (const auto& b : local) {
            if (!b.any) {
                all = false;
                break;
            }
            lo = first ? b.revenue : min(lo, b.revenue);
            first = false;
        }
        if (!all) return;
        std::lock_guard<std::mutex> lock(floor_mutex_);
        if (!prune_floor_ || lo > *prune_floor_) prune_floor_ = lo;
    }

    void dfs(std::size_t depth, std::vector<std::uint16_t>& choice, std::vector<DfsFrame>& frames,
             std::vector<Best>& local) {
        if (depth == slot_count_) {
            const DfsFrame& f = frames[depth];
            std::uint64_t mult = 1;
            if (dedup_) {
                bool diagonal = true;
                for (std::size_t t = 0; t < player_slot_count_ && diagonal; ++t)
                    diagonal = choice[t] == choice[player_slot_count_ + t];
                mult = diagonal ? 1 : 2;
            }
            for (std::size_t k = 0; k < targets_.size(); ++k) {
                const Target& target = targets_[k];
                bool feasible = target.truthful ? f.truthful_ok : !(f.alpha_min > target.alpha);
                if (feasible) local[k].offer(f.revenue, choice, mult);
            }
            return;
        }
        // Bound: even collecting full surplus from everything still open
        // cannot beat the floor.
        if (auto floor = current_floor()) {
            if (frames[depth].revenue + suffix_surplus_[depth] < *floor) return;
        }
        const auto& cands = *slot_candidates_[depth];
        std::size_t start = 0;
        if (dedup_ && depth >= player_slot_count_) {
            // Canonical representative: player 0's slot vector <=lex player 1's.
            bool prefix_equal = true;
            for (std::size_t t = 0; t + player_slot_count_ < depth; ++t)
                if (choice[t] != choice[player_slot_count_ + t]) {
                    prefix_equal = false;
                    break;
                }
            if (prefix_equal) start = choice[depth - player_slot_count_];
        }
        for (std::size_t c = start; c < cands.size(); ++c) {
            choice[depth] = static_cast<std::uint16_t>(c);
            DfsFrame f = frames[depth];
            apply_slot(depth, choice, f);
            frames[depth + 1] = f;
            dfs(depth + 1, choice, frames, local);
        }
        if (depth == slot_count_ - 1) raise_floor(local);
    }

    PaymentGrid decode(const std::vector<std::uint16_t>& encoding) const {
        PaymentGrid grid = PaymentGrid::empty(request_.value_sets);
        if (symmetric_) {
            for (int i = 0; i < n_; ++i) {
                for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
                    auto slot = symmetric_slot_of(grid.tuple_values(i, t));
                    grid.prices[static_cast<std::size_t>(i)][t] =
                        (*slot_candidates_[slot])[encoding[slot]];
                }
            }
        } else {
            for (int i = 0; i < n_; ++i) {
                for (std::size_t t = 0; t < grid.tuple_count(i); ++t) {
                    auto slot = slot_offset_[static_cast<std::size_t>(i)] + t;
                    grid.prices[static_cast<std::size_t>(i)][t] =
                        (*slot_candidates_[slot])[encoding[slot]];
                }
            }
        }
        return grid;
    }

    MultiSearchResult assemble() {
        std::vector<Best> merged(targets_.size());
        for (const auto& task : task_results_)
            for (std::size_t k = 0; k < targets_.size(); ++k) merged[k].merge(task[k]);

        MultiSearchResult out;
        std::size_t k = 0;
        for (; k < request_.moral_alphas.size(); ++k)
            out.moral.push_back(to_result(merged[k]));
        if (request_.want_truthful) out.truthful = to_result(merged[k]);
        return out;
    }

    SearchResult to_result(const Best& best) const {
        SearchResult result;
        result.space_size = full_size_;
        result.enumerated = enumerated_estimate_;
        result.pruned_symmetric = symmetric_;
        if (!best.any) return result;  // found = false: infeasible space
        result.found = true;
        result.best_revenue = best.revenue;
        result.best_grid = decode(best.encoding);
        result.optima_count = best.count;
        ProfitMaximizer m;
        m.grid = result.best_grid;
        result.is_truthful_flag = is_truthful(m).truthful;
        return result;
    }
};

}  // namespace

MultiSearchResult brute_force_multi(const MultiSearchRequest& request,
                                    const JointDistribution& joint,
                                    const SearchOptions& options) {
    // Off-grid atoms surface as off_grid from the instance table build.
    Engine engine(request, joint, options);
    return engine.run();
}

SearchResult brute_force_optimal(const SearchSpace& space, const JointDistribution& joint,
                                 const SearchOptions& options) {
    MultiSearchRequest request;
    request.value_sets = space.value_sets;
    request.candidates = space.candidates;
    if (space.mode == SearchMode::Truthful)
        request.want_truthful = true;
    else
        request.moral_alphas = {space.alpha};
    auto multi = brute_force_multi(request, joint, options);
    SearchResult result =
        space.mode == SearchMode::Truthful ? multi.truthful : multi.moral.front();
    if (!result.found)
        throw AuctionError("infeasible_space", "no candidate grid passes the feasibility filter");
    return result;
}

std::vector<std::pair<Rational, SearchResult>> optimal_alpha_sweep(
    const JointDistribution& joint, const std::vector<std::vector<Rational>>& value_sets,
    const Rational& eps, const std::vector<Rational>& alphas, const SearchOptions& options) {
    MultiSearchRequest request;
    request.value_sets = value_sets;
    for (const auto& vs : value_sets) request.candidates.push_back(default_candidates(vs, eps));
    request.moral_alphas = alphas;
    auto multi = brute_force_multi(request, joint, options);

    std::vector<std::pair<Rational, SearchResult>> table;
    for (std::size_t k = 0; k < alphas.size(); ++k)
        table.emplace_back(alphas[k], multi.moral[k]);

    auto sorted = table;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (sorted[k].second.found && sorted[k + 1].second.found &&
            sorted[k].second.best_revenue > sorted[k + 1].second.best_revenue)
            throw AuctionError("sweep_defect",
                               "optimal revenue decreased in alpha: " +
                                   sorted[k].first.str() + " -> " + sorted[k + 1].first.str());
    }
    return table;
}

}  // namespace auctionlab
