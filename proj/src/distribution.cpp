#include "auctionlab/distribution.hpp"

#include <algorithm>
#include <map>

namespace auctionlab {

std::optional<std::size_t> DiscreteDistribution::index_of(const Rational& v) const {
    if (v.is_negative()) return std::nullopt;
    // v = k * eps  <=>  v / eps is an integer in range.
    Rational k = v / eps;
    if (!k.is_integer()) return std::nullopt;
    auto idx = static_cast<std::size_t>(k.num());
    if (k.num() < 0 || idx >= mass.size()) return std::nullopt;
    return idx;
}

Rational DiscreteDistribution::pdf(const Rational& v) const {
    auto idx = index_of(v);
    if (!idx) throw off_grid_error(v.str());
    return mass[*idx];
}

Rational DiscreteDistribution::cdf(const Rational& v) const {
    Rational acc;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        if (value_at(k) <= v) acc += mass[k];
    }
    return acc;
}

std::vector<Rational> DiscreteDistribution::support() const {
    std::vector<Rational> out;
    for (std::size_t k = 0; k < mass.size(); ++k)
        if (!mass[k].is_zero()) out.push_back(value_at(k));
    return out;
}

std::vector<Rational> DiscreteDistribution::grid_values() const {
    std::vector<Rational> out;
    out.reserve(mass.size());
    for (std::size_t k = 0; k < mass.size(); ++k) out.push_back(value_at(k));
    return out;
}

void DiscreteDistribution::validate() const {
    if (!(Rational(0) < eps) || eps > Rational(1))
        throw AuctionError("bad_eps", "eps must lie in (0, 1]: " + eps.str());
    Rational inv = Rational(1) / eps;
    if (!inv.is_integer())
        throw AuctionError("bad_eps", "1/eps must be an integer: " + eps.str());
    if (mass.size() != static_cast<std::size_t>(inv.num()) + 1)
        throw AuctionError("bad_mass",
                           "mass vector must cover {0, eps, ..., 1}: expected " +
                               std::to_string(inv.num() + 1) + " weights, got " +
                               std::to_string(mass.size()));
    Rational total;
    for (const auto& w : mass) {
        if (w.is_negative()) throw AuctionError("bad_mass", "negative weight: " + w.str());
        total += w;
    }
    if (total != Rational(1))
        throw AuctionError("bad_mass", "weights sum to " + total.str() + ", expected 1");
}

DiscreteDistribution DiscreteDistribution::uniform_grid(std::size_t num_points) {
    DiscreteDistribution d;
    d.eps = Rational(1, static_cast<long long>(num_points - 1));
    d.mass.assign(num_points, Rational(1, static_cast<long long>(num_points)));
    d.validate();
    return d;
}

DiscreteDistribution DiscreteDistribution::exponential_grid(const Rational& eps,
                                                            const Rational& e_approx) {
    DiscreteDistribution d;
    d.eps = eps;
    Rational inv = Rational(1) / eps;
    if (!inv.is_integer()) throw AuctionError("bad_eps", "1/eps must be an integer");
    auto m = static_cast<std::size_t>(inv.num());
    // Unnormalized weight at k*eps is e^{-k}; the common (e-1) factor cancels.
    std::vector<Rational> raw(m + 1);
    Rational w(1);
    Rational total;
    for (std::size_t k = 0; k <= m; ++k) {
        raw[k] = w;
        total += w;
        w /= e_approx;
    }
    d.mass.resize(m + 1);
    for (std::size_t k = 0; k <= m; ++k) d.mass[k] = raw[k] / total;
    d.validate();
    return d;
}

Rational virtual_value(const DiscreteDistribution& d, const Rational& v) {
    auto idx = d.index_of(v);
    if (!idx) throw off_grid_error(v.str());
    const Rational f = d.mass[*idx];
    if (f.is_zero()) throw zero_density_error(v.str());
    Rational tail = Rational(1) - d.cdf(v);  // 1 - F(v)
    return v - d.eps * tail / f;
}

PairwiseCheck is_regular(const DiscreteDistribution& d) {
    auto sup = d.support();
    PairwiseCheck result;
    for (std::size_t i = 0; i + 1 < sup.size(); ++i) {
        if (virtual_value(d, sup[i]) > virtual_value(d, sup[i + 1])) {
            result.ok = false;
            result.witness = {sup[i], sup[i + 1]};
            return result;
        }
    }
    return result;
}

PairwiseCheck is_standard(const DiscreteDistribution& d) {
    auto sup = d.support();
    PairwiseCheck result;
    // All ordered pairs v > v'; the RHS reuses 1-F(v) (not 1-F(v')).
    for (std::size_t hi = 0; hi < sup.size(); ++hi) {
        const Rational& v = sup[hi];
        Rational tail_v = Rational(1) - d.cdf(v);
        Rational lhs = v - d.eps * tail_v / d.pdf(v);
        for (std::size_t lo = 0; lo < hi; ++lo) {
            const Rational& vp = sup[lo];
            Rational rhs = vp - d.eps * tail_v / d.pdf(vp);
            if (lhs < rhs) {
                result.ok = false;
                result.witness = {v, vp};
                return result;
            }
        }
    }
    return result;
}

namespace {

// Posted-price revenue p * (1 - F(p - eps)) = p * Pr[v >= p].
Rational posted_revenue(const DiscreteDistribution& d, const Rational& p) {
    Rational sell_prob;
    for (std::size_t k = 0; k < d.mass.size(); ++k)
        if (d.value_at(k) >= p) sell_prob += d.mass[k];
    return p * sell_prob;
}

}  // namespace

Rational monopolist_price(const DiscreteDistribution& d) {
    auto reg = is_regular(d);
    if (!reg.ok)
        throw not_regular_error("witness pair (" + reg.witness->first.str() + ", " +
                                reg.witness->second.str() + ")");
    auto sup = d.support();
    Rational x(0);
    for (const auto& v : sup)
        if (virtual_value(d, v) <= Rational(0)) x = v;
    return x;
}

Rational reserve_price(const DiscreteDistribution& d) {
    auto reg = is_regular(d);
    if (!reg.ok)
        throw not_regular_error("witness pair (" + reg.witness->first.str() + ", " +
                                reg.witness->second.str() + ")");
    auto sup = d.support();
    for (const auto& v : sup)
        if (virtual_value(d, v) >= Rational(0)) return v;
    // phi(v_max) = v_max > 0 whenever v_max > 0; the only way to get here is
    // the degenerate point mass at 0, where phi(0) = 0 and the loop returns.
    return sup.back();
}

MonopolistReport monopolist_price_report(const DiscreteDistribution& d) {
    MonopolistReport report;
    report.phi_price = monopolist_price(d);
    auto sup = d.support();
    report.revenue_price = sup.front();
    report.best_revenue = posted_revenue(d, sup.front());
    for (const auto& v : sup) {
        Rational r = posted_revenue(d, v);
        if (r > report.best_revenue) {
            report.best_revenue = r;
            report.revenue_price = v;
        }
    }
    report.tie = posted_revenue(d, report.phi_price) == report.best_revenue;
    return report;
}

void JointDistribution::validate() const {
    if (n <= 0) throw AuctionError("bad_joint", "player count must be positive");
    Rational total;
    for (const auto& [profile, w] : atoms) {
        if (static_cast<int>(profile.size()) != n)
            throw AuctionError("bad_joint", "atom profile length differs from player count");
        if (w.is_negative()) throw AuctionError("bad_joint", "negative atom weight: " + w.str());
        total += w;
    }
    if (total != Rational(1))
        throw AuctionError("bad_joint", "atom weights sum to " + total.str() + ", expected 1");
}

void JointDistribution::normalize() {
    std::map<std::vector<Rational>, Rational> merged;
    for (auto& [profile, w] : atoms) {
        if (w.is_zero()) continue;
        auto it = merged.find(profile);
        if (it == merged.end())
            merged.emplace(profile, w);
        else
            it->second += w;
    }
    atoms.assign(merged.begin(), merged.end());
}

std::vector<std::vector<Rational>> JointDistribution::player_values() const {
    std::vector<std::vector<Rational>> values(static_cast<std::size_t>(n));
    for (const auto& [profile, w] : atoms) {
        (void)w;
        for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)].push_back(profile[static_cast<std::size_t>(i)]);
    }
    for (auto& vs : values) {
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    }
    return values;
}

bool JointDistribution::exchangeable() const {
    std::map<std::vector<Rational>, Rational> weight;
    for (const auto& [profile, w] : atoms) {
        auto key = profile;
        weight[key] += w;
    }
    // Check invariance under adjacent transpositions (they generate S_n).
    for (int a = 0; a + 1 < n; ++a) {
        for (const auto& [profile, w] : weight) {
            auto swapped = profile;
            std::swap(swapped[static_cast<std::size_t>(a)], swapped[static_cast<std::size_t>(a) + 1]);
            auto it = weight.find(swapped);
            Rational other = it == weight.end() ? Rational(0) : it->second;
            if (other != w) return false;
        }
    }
    return true;
}

JointDistribution product_joint(const std::vector<DiscreteDistribution>& ds,
                                std::uint64_t atom_cap) {
    if (ds.empty()) throw AuctionError("bad_joint", "product of zero distributions");
    std::vector<std::vector<std::pair<Rational, Rational>>> supports;
    std::uint64_t count = 1;
    for (const auto& d : ds) {
        d.validate();
        std::vector<std::pair<Rational, Rational>> s;
        for (std::size_t k = 0; k < d.mass.size(); ++k)
            if (!d.mass[k].is_zero()) s.emplace_back(d.value_at(k), d.mass[k]);
        if (count > atom_cap / std::max<std::uint64_t>(1, s.size()))
            throw AuctionError("atom_cap", "product support exceeds the atom cap");
        count *= s.size();
        supports.push_back(std::move(s));
    }

    JointDistribution joint;
    joint.n = static_cast<int>(ds.size());
    std::vector<std::size_t> idx(ds.size(), 0);
    while (true) {
        std::vector<Rational> profile;
        Rational w(1);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            profile.push_back(supports[i][idx[i]].first);
            w *= supports[i][idx[i]].second;
        }
        joint.atoms.emplace_back(std::move(profile), w);
        std::size_t pos = ds.size();
        while (pos > 0) {
            --pos;
            if (++idx[pos] < supports[pos].size()) break;
            idx[pos] = 0;
            if (pos == 0) {
                joint.normalize();
                joint.validate();
                return joint;
            }
        }
    }
}

Marginal conditional_top(const JointDistribution& j, int player) {
    std::map<Rational, Rational> acc;
    Rational total;
    for (const auto& [profile, w] : j.atoms) {
        const Rational& vi = profile[static_cast<std::size_t>(player)];
        bool top = true;
        for (int k = 0; k < j.n; ++k)
            if (profile[static_cast<std::size_t>(k)] > vi) {
                top = false;
                break;
            }
        if (top && !w.is_zero()) {
            acc[vi] += w;
            total += w;
        }
    }
    if (total.is_zero())
        throw AuctionError("empty_condition", "conditioning event v_i >= v_k has zero mass");
    Marginal m;
    for (const auto& [v, w] : acc) m.atoms.emplace_back(v, w / total);
    return m;
}

Rational infer_step(const JointDistribution& joint) {
    std::vector<Rational> all;
    for (const auto& [profile, w] : joint.atoms) {
        (void)w;
        for (const auto& v : profile) all.push_back(v);
    }
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    std::optional<Rational> step;
    for (std::size_t k = 0; k + 1 < all.size(); ++k) {
        Rational gap = all[k + 1] - all[k];
        if (!step || gap < *step) step = gap;
    }
    return step.value_or(Rational(1));
}

std::pair<Rational, Rational> best_take_it_or_leave_it(const Marginal& marginal) {
    if (marginal.atoms.empty())
        throw AuctionError("empty_condition", "take-it-or-leave-it offer over empty marginal");
    Rational best_price = marginal.atoms.front().first;
    Rational best_revenue(-1);
    for (const auto& [price, w] : marginal.atoms) {
        (void)w;
        Rational sell;
        for (const auto& [v, vw] : marginal.atoms)
            if (v >= price) sell += vw;
        Rational revenue = price * sell;
        if (revenue > best_revenue) {  // strict: ties keep the lowest price
            best_revenue = revenue;
            best_price = price;
        }
    }
    return {best_price, best_revenue};
}

}  // namespace auctionlab
