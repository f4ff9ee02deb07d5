#include "auctionlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace auctionlab {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    return j;
}

void expect_keys(const json& j, std::initializer_list<const char*> keys,
                 const char* what) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known)
            throw ParseError(std::string("unknown field '") + it.key() + "' in " + what);
    }
}

Rational rational_field(const json& j, const char* what) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw ParseError(std::string("expected a rational string for ") + what);
}

ExtendedPrice price_field(const json& j) {
    if (j.is_string() && j.get<std::string>() == "never") return ExtendedPrice::never_price();
    return ExtendedPrice::of(rational_field(j, "price"));
}

json rational_json(const Rational& r) { return r.str(); }
json price_json(const ExtendedPrice& p) { return p.is_never() ? json("never") : json(p.str()); }

}  // namespace

DiscreteDistribution parse_distribution(const std::string& text) {
    json j = parse_json(text);
    expect_keys(j, {"eps", "mass"}, "distribution");
    if (!j.contains("eps") || !j.contains("mass"))
        throw ParseError("distribution needs 'eps' and 'mass'");
    DiscreteDistribution d;
    d.eps = rational_field(j["eps"], "eps");
    for (const auto& w : j["mass"]) d.mass.push_back(rational_field(w, "mass"));
    try {
        d.validate();
    } catch (const AuctionError& e) {
        throw ParseError(e.what());
    }
    return d;
}

std::string serialize_distribution(const DiscreteDistribution& d) {
    json j;
    j["eps"] = rational_json(d.eps);
    j["mass"] = json::array();
    for (const auto& w : d.mass) j["mass"].push_back(rational_json(w));
    return j.dump(2) + "\n";
}

JointDistribution parse_joint(const std::string& text) {
    json j = parse_json(text);
    expect_keys(j, {"n", "atoms"}, "joint distribution");
    if (!j.contains("n") || !j.contains("atoms"))
        throw ParseError("joint distribution needs 'n' and 'atoms'");
    JointDistribution joint;
    joint.n = j["n"].get<int>();
    for (const auto& atom : j["atoms"]) {
        expect_keys(atom, {"profile", "weight"}, "atom");
        if (!atom.contains("profile") || !atom.contains("weight"))
            throw ParseError("atom needs 'profile' and 'weight'");
        std::vector<Rational> profile;
        for (const auto& v : atom["profile"]) profile.push_back(rational_field(v, "profile"));
        joint.atoms.emplace_back(std::move(profile), rational_field(atom["weight"], "weight"));
    }
    joint.normalize();
    try {
        joint.validate();
    } catch (const AuctionError& e) {
        throw ParseError(e.what());
    }
    return joint;
}

std::string serialize_joint(const JointDistribution& j) {
    json out;
    out["n"] = j.n;
    out["atoms"] = json::array();
    for (const auto& [profile, w] : j.atoms) {
        json atom;
        atom["profile"] = json::array();
        for (const auto& v : profile) atom["profile"].push_back(rational_json(v));
        atom["weight"] = rational_json(w);
        out["atoms"].push_back(atom);
    }
    return out.dump(2) + "\n";
}

JointDistribution parse_joint_or_product(const std::string& text, int players) {
    json j = parse_json(text);
    if (j.contains("atoms")) return parse_joint(text);
    DiscreteDistribution d = parse_distribution(text);
    std::vector<DiscreteDistribution> copies(static_cast<std::size_t>(players), d);
    return product_joint(copies);
}

PaymentGrid parse_grid(const std::string& text) {
    json j = parse_json(text);
    expect_keys(j, {"n", "values", "prices"}, "payment grid");
    if (!j.contains("n") || !j.contains("values") || !j.contains("prices"))
        throw ParseError("payment grid needs 'n', 'values' and 'prices'");
    int n = j["n"].get<int>();
    std::vector<std::vector<Rational>> sets;
    for (const auto& vs : j["values"]) {
        std::vector<Rational> values;
        for (const auto& v : vs) values.push_back(rational_field(v, "values"));
        sets.push_back(std::move(values));
    }
    if (static_cast<int>(sets.size()) != n)
        throw ParseError("payment grid 'values' must list one value set per player");
    PaymentGrid grid = PaymentGrid::empty(sets);
    std::vector<std::vector<bool>> seen(sets.size());
    for (int i = 0; i < n; ++i) seen[static_cast<std::size_t>(i)].assign(grid.tuple_count(i), false);
    for (const auto& entry : j["prices"]) {
        expect_keys(entry, {"player", "opponents", "price"}, "price entry");
        if (!entry.contains("player") || !entry.contains("opponents") || !entry.contains("price"))
            throw ParseError("price entry needs 'player', 'opponents' and 'price'");
        int player = entry["player"].get<int>() - 1;
        if (player < 0 || player >= n) throw ParseError("price entry player out of range");
        std::vector<Rational> opp;
        for (const auto& v : entry["opponents"]) opp.push_back(rational_field(v, "opponents"));
        if (opp.size() + 1 != sets.size())
            throw ParseError("price entry opponent tuple has the wrong arity");
        // Rebuild a full profile to reuse tuple_index.
        std::vector<Rational> profile(static_cast<std::size_t>(n));
        std::size_t pos = 0;
        for (int k = 0; k < n; ++k) {
            if (k == player) {
                profile[static_cast<std::size_t>(k)] = sets[static_cast<std::size_t>(k)].front();
            } else {
                profile[static_cast<std::size_t>(k)] = opp[pos];
                ++pos;
            }
        }
        std::size_t t;
        try {
            t = grid.tuple_index(player, profile);
        } catch (const AuctionError& e) {
            throw ParseError(e.what());
        }
        if (seen[static_cast<std::size_t>(player)][t])
            throw ParseError("duplicate price entry for one opponent tuple");
        seen[static_cast<std::size_t>(player)][t] = true;
        grid.prices[static_cast<std::size_t>(player)][t] = price_field(entry["price"]);
    }
    for (int i = 0; i < n; ++i)
        for (std::size_t t = 0; t < grid.tuple_count(i); ++t)
            if (!seen[static_cast<std::size_t>(i)][t])
                throw ParseError("price table is not total: player " + std::to_string(i + 1) +
                                 " misses a tuple");
    try {
        grid.validate();
    } catch (const AuctionError& e) {
        throw ParseError(e.what());
    }
    return grid;
}

std::string serialize_grid(const PaymentGrid& g) {
    json out;
    out["n"] = g.players();
    out["values"] = json::array();
    for (const auto& vs : g.value_sets) {
        json values = json::array();
        for (const auto& v : vs) values.push_back(rational_json(v));
        out["values"].push_back(values);
    }
    out["prices"] = json::array();
    for (int i = 0; i < g.players(); ++i) {
        for (std::size_t t = 0; t < g.tuple_count(i); ++t) {
            json entry;
            entry["player"] = i + 1;
            entry["opponents"] = json::array();
            for (const auto& v : g.tuple_values(i, t))
                entry["opponents"].push_back(rational_json(v));
            entry["price"] = price_json(g.prices[static_cast<std::size_t>(i)][t]);
            out["prices"].push_back(entry);
        }
    }
    return out.dump(2) + "\n";
}

std::string serialize_morality_report(const MoralityReport& report) {
    json out;
    out["moral"] = report.moral;
    out["alpha"] = rational_json(report.alpha);
    out["violations"] = json::array();
    for (const auto& v : report.violations) {
        json item;
        item["instance"] = json::array();
        for (const auto& x : v.instance) item["instance"].push_back(rational_json(x));
        item["deviator"] = v.deviator + 1;
        item["lie"] = rational_json(v.lie);
        item["gain"] = rational_json(v.gain);
        item["others_loss"] = rational_json(v.others_loss);
        out["violations"].push_back(item);
    }
    return out.dump(2) + "\n";
}

std::string morality_report_csv(const MoralityReport& report) {
    std::ostringstream os;
    os << "instance,deviator,lie,gain,loss\n";
    for (const auto& v : report.violations) {
        os << "\"(";
        for (std::size_t i = 0; i < v.instance.size(); ++i) {
            if (i) os << ";";
            os << v.instance[i].str();
        }
        os << ")\"," << v.deviator + 1 << "," << v.lie.str() << "," << v.gain.str() << ","
           << v.others_loss.str() << "\n";
    }
    return os.str();
}

std::string serialize_search_result(const SearchResult& result, const std::string& mode,
                                    const Rational& alpha, std::int64_t wall_ms) {
    json out;
    out["mode"] = mode;
    out["alpha"] = rational_json(alpha);
    out["best_revenue"] = rational_json(result.best_revenue);
    out["best_revenue_float"] = result.best_revenue.to_double();
    out["optima_count"] = result.optima_count;
    out["is_truthful"] = result.is_truthful_flag;
    out["space_size"] = result.space_size;
    out["enumerated"] = result.enumerated;
    out["pruned_symmetric"] = result.pruned_symmetric;
    if (wall_ms >= 0) out["wall_time_ms"] = wall_ms;
    out["grid"] = json::parse(serialize_grid(result.best_grid));
    return out.dump(2) + "\n";
}

namespace {

const char* rule_name(LiftRule rule) {
    switch (rule) {
        case LiftRule::SmallerPrice: return "smaller_price";
        case LiftRule::HigherPriceSwap: return "higher_price_swap";
        case LiftRule::BelowMonopolist: return "below_monopolist";
    }
    return "?";
}

}  // namespace

std::string serialize_lift_trace(const LiftTrace& trace) {
    json out;
    out["initial_revenue"] = rational_json(trace.initial_revenue);
    out["final_revenue"] = rational_json(trace.final_revenue);
    out["steps"] = json::array();
    for (const auto& s : trace.steps) {
        json step;
        step["player"] = s.player + 1;
        step["tuple"] = json::array();
        for (const auto& v : s.tuple) step["tuple"].push_back(rational_json(v));
        step["rule"] = rule_name(s.rule);
        step["revenue_before"] = rational_json(s.revenue_before);
        step["revenue_after"] = rational_json(s.revenue_after);
        step["grid_before"] = json::parse(serialize_grid(s.before));
        step["grid_after"] = json::parse(serialize_grid(s.after));
        out["steps"].push_back(step);
    }
    return out.dump(2) + "\n";
}

std::string serialize_h_report(const HPropertyReport& report) {
    json out;
    out["e_approx"] = rational_json(report.e_approx);
    out["all_true"] = report.all_true();
    out["properties"] = json::array();
    for (const auto& p : report.properties) {
        json item;
        item["name"] = p.name;
        item["status"] = p.status == PropertyStatus::True
                             ? "true"
                             : (p.status == PropertyStatus::False ? "false" : "unverifiable");
        item["witness"] = p.witness;
        out["properties"].push_back(item);
    }
    return out.dump(2) + "\n";
}

std::string serialize_gap_instance(const GapInstance& gap) {
    json out;
    out["gap"] = rational_json(gap.gap);
    out["gap_float"] = gap.gap.to_double();
    out["sample_index"] = gap.sample_index;
    out["samples_run"] = gap.samples_run;
    out["samples_skipped"] = gap.samples_skipped;
    out["joint"] = json::parse(serialize_joint(gap.joint));
    out["optimal_moral_revenue"] = rational_json(gap.moral.best_revenue);
    out["optimal_truthful_revenue"] = rational_json(gap.truthful.best_revenue);
    out["moral_grid"] = json::parse(serialize_grid(gap.moral.best_grid));
    out["truthful_grid"] = json::parse(serialize_grid(gap.truthful.best_grid));
    return out.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw AuctionError("io_error", "cannot write file: " + tmp);
        out << content;
        if (!out) throw AuctionError("io_error", "write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace auctionlab
