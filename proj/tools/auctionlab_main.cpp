// auctionlab: workbench for designing, verifying and optimizing single-item
// auctions for bidders with a bounded willingness to lie.

#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "auctionlab/catalog.hpp"
#include "auctionlab/correlated.hpp"
#include "auctionlab/io.hpp"
#include "auctionlab/myerson.hpp"
#include "auctionlab/reproduce.hpp"
#include "auctionlab/search.hpp"

namespace {

using namespace auctionlab;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

Rational parse_rational_flag(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const ParseError& e) {
        throw ParseError(std::string("flag ") + flag + ": " + e.what());
    }
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

struct CommonFlags {
    int threads = 0;
    std::uint64_t cap = 50'000'000ULL;
    bool timing = false;

    SearchOptions search() const {
        SearchOptions o;
        o.threads = threads;
        o.cap = cap;
        return o;
    }
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    cmd->add_option("--cap", flags.cap, "enumerated-grid budget");
    cmd->add_flag("--timing", flags.timing, "include wall time in outputs");
}

int run(int argc, char** argv) {
    CLI::App app{"single-item auction workbench: morality checking, exact revenue, "
                 "brute-force optima, closed-form grids, lift and lookahead"};
    app.require_subcommand(1);

    // catalog ------------------------------------------------------------
    auto* catalog_cmd = app.add_subcommand("catalog", "list or build the fixture mechanisms");
    auto* catalog_list = catalog_cmd->add_subcommand("list", "list available fixtures");
    auto* catalog_build = catalog_cmd->add_subcommand("build", "emit a fixture grid as JSON");
    std::string catalog_name, catalog_alpha = "1/2", catalog_c = "1/2";
    std::string catalog_eps = "1/2", catalog_reserve = "1/2", catalog_selector = "player1";
    std::string catalog_out;
    int catalog_players = 2;
    catalog_build->add_option("name", catalog_name, "fixture name")->required();
    catalog_build->add_option("--alpha", catalog_alpha, "morality level (claim31)");
    catalog_build->add_option("--c", catalog_c, "price scale (scaled-second-price)");
    catalog_build->add_option("--eps", catalog_eps, "grid step for value sets");
    catalog_build->add_option("--reserve", catalog_reserve, "reserve price");
    catalog_build->add_option("--selector", catalog_selector,
                              "free-region winner: player1|player2|alternate");
    catalog_build->add_option("--players", catalog_players, "player count");
    catalog_build->add_option("--out", catalog_out, "output path (default stdout)");

    // check-moral ----------------------------------------------------------
    auto* check_cmd = app.add_subcommand("check-moral", "verify alpha-morality of a grid");
    std::string check_grid, check_alpha = "1", check_out, check_csv;
    check_cmd->add_option("--grid", check_grid, "payment grid file")->required();
    check_cmd->add_option("--alpha", check_alpha, "alpha to test")->required();
    check_cmd->add_option("--out", check_out, "report JSON path (default stdout)");
    check_cmd->add_option("--csv", check_csv, "also write the violation list as CSV");

    // revenue -------------------------------------------------------------
    auto* revenue_cmd = app.add_subcommand("revenue", "exact expected revenue of a grid");
    std::string revenue_grid, revenue_joint;
    revenue_cmd->add_option("--grid", revenue_grid, "payment grid file")->required();
    revenue_cmd->add_option("--joint", revenue_joint, "joint or marginal distribution file")
        ->required();

    // search ----------------------------------------------------------------
    auto* search_cmd = app.add_subcommand("search", "brute-force optimal grid");
    std::string search_mode = "moral", search_alpha = "1", search_dist, search_out;
    std::string search_eps;
    int search_players = 2;
    CommonFlags search_flags;
    search_cmd->add_option("--mode", search_mode, "truthful|moral")->required();
    search_cmd->add_option("--alpha", search_alpha, "alpha for moral mode");
    search_cmd->add_option("--dist", search_dist, "joint or marginal distribution file")
        ->required();
    search_cmd->add_option("--players", search_players, "players for a marginal input");
    search_cmd->add_option("--eps", search_eps, "candidate lattice step (default: infer)");
    search_cmd->add_option("--out", search_out, "result JSON path (default stdout)");
    add_common(search_cmd, search_flags);

    // sweep -----------------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "optimal revenue per alpha");
    std::string sweep_dist, sweep_alphas = "0,1/4,1/2,3/4,1", sweep_eps;
    int sweep_players = 2;
    CommonFlags sweep_flags;
    sweep_cmd->add_option("--dist", sweep_dist, "joint or marginal distribution file")->required();
    sweep_cmd->add_option("--alphas", sweep_alphas, "comma-separated alpha list");
    sweep_cmd->add_option("--players", sweep_players, "players for a marginal input");
    sweep_cmd->add_option("--eps", sweep_eps, "candidate lattice step (default: infer)");
    add_common(sweep_cmd, sweep_flags);

    // myerson ----------------------------------------------------------------
    auto* myerson_cmd = app.add_subcommand("myerson", "closed-form optimal truthful grid");
    std::vector<std::string> myerson_dists;
    std::string myerson_out;
    myerson_cmd->add_option("--dists", myerson_dists, "marginal files, one per player")
        ->required()
        ->expected(-1);
    myerson_cmd->add_option("--out", myerson_out, "grid JSON path (default stdout)");

    // lift ---------------------------------------------------------------------
    auto* lift_cmd = app.add_subcommand("lift", "raise a grid into a truthful one");
    std::string lift_grid, lift_dist, lift_trace, lift_out;
    lift_cmd->add_option("--grid", lift_grid, "payment grid file")->required();
    lift_cmd->add_option("--dist", lift_dist, "marginal file (iid)")->required();
    lift_cmd->add_option("--trace", lift_trace, "trace JSON path");
    lift_cmd->add_option("--out", lift_out, "lifted grid JSON path (default stdout)");

    // lookahead -----------------------------------------------------------------
    auto* lookahead_cmd = app.add_subcommand("lookahead", "lookahead auction for a joint");
    std::string lookahead_joint, lookahead_out;
    lookahead_cmd->add_option("--joint", lookahead_joint, "joint distribution file")->required();
    lookahead_cmd->add_option("--out", lookahead_out, "grid JSON path (default stdout)");

    // gap-search -----------------------------------------------------------------
    auto* gap_cmd = app.add_subcommand("gap-search", "search correlated joints for a moral-vs-"
                                                     "truthful revenue gap");
    GapSearchParams gap_params;
    std::string gap_eps = "1/4", gap_out;
    CommonFlags gap_flags;
    gap_cmd->add_option("--support", gap_params.support_cap, "per-player support cap");
    gap_cmd->add_option("--denom-cap", gap_params.denominator_cap, "weight denominator cap");
    gap_cmd->add_option("--samples", gap_params.samples, "sample count");
    gap_cmd->add_option("--seed", gap_params.seed, "sampling seed");
    gap_cmd->add_option("--eps", gap_eps, "value grid step");
    gap_cmd->add_option("--out", gap_out, "result JSON path (default stdout)");
    add_common(gap_cmd, gap_flags);

    // validate-h -----------------------------------------------------------------
    auto* vh_cmd = app.add_subcommand("validate-h", "validate a correlated gap-instance file");
    std::string vh_joint, vh_alpha, vh_eps, vh_delta, vh_out;
    CommonFlags vh_flags;
    vh_cmd->add_option("--joint", vh_joint, "joint distribution file")->required();
    vh_cmd->add_option("--alpha", vh_alpha, "alpha")->required();
    vh_cmd->add_option("--eps", vh_eps, "eps")->required();
    vh_cmd->add_option("--delta", vh_delta, "delta")->required();
    vh_cmd->add_option("--out", vh_out, "report JSON path (default stdout)");
    add_common(vh_cmd, vh_flags);

    // reproduce --------------------------------------------------------------
    auto* repro_cmd =
        app.add_subcommand("reproduce", "run the full verification table (exact checks)");
    repro_cmd->alias("reproduce-paper");
    ReproduceOptions repro_options;
    repro_cmd->add_flag("--quick", repro_options.quick, "reduced sample counts");
    repro_cmd->add_option("--threads", repro_options.threads, "worker threads");
    repro_cmd->add_option("--h-file", repro_options.gap_instance_file,
                          "externally supplied gap-instance file for the conditional check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints help or the error message
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (catalog_list->parsed()) {
        for (const auto& entry : catalog_entries())
            std::cout << entry.name << "  " << entry.parameters << "\n    " << entry.description
                      << "\n";
        return kExitOk;
    }
    if (catalog_build->parsed()) {
        Rational eps = parse_rational_flag(catalog_eps, "--eps");
        std::vector<Rational> grid;
        for (Rational v(0); v <= Rational(1); v += eps) grid.push_back(v);
        ProfitMaximizer m;
        if (catalog_name == "claim31") {
            m = claim31_mechanism(parse_rational_flag(catalog_alpha, "--alpha"));
        } else if (catalog_name == "scaled-second-price") {
            m = scaled_second_price(parse_rational_flag(catalog_c, "--c"), grid,
                                    catalog_players);
        } else if (catalog_name == "reserve-second-price") {
            m = reserve_second_price(parse_rational_flag(catalog_reserve, "--reserve"), grid,
                                     catalog_players);
        } else if (catalog_name == "nochar") {
            auto selector = [&](const Rational& a, const Rational& b) -> int {
                if (catalog_selector == "player1") return 0;
                if (catalog_selector == "player2") return 1;
                return (a + b).num() % 2 == 0 ? 0 : 1;  // alternate by parity
            };
            std::vector<Rational> extended = grid;
            extended.push_back(Rational(5, 4));
            m = nochar_family(selector, extended, extended);
        } else {
            throw ParseError("unknown fixture '" + catalog_name + "'");
        }
        emit(catalog_out, serialize_grid(m.grid));
        return kExitOk;
    }
    if (check_cmd->parsed()) {
        ProfitMaximizer m;
        m.grid = parse_grid(read_file(check_grid));
        auto report = check_alpha_moral(m, parse_rational_flag(check_alpha, "--alpha"));
        emit(check_out, serialize_morality_report(report));
        if (!check_csv.empty()) write_file(check_csv, morality_report_csv(report));
        return report.moral ? kExitOk : kExitVerificationFailed;
    }
    if (revenue_cmd->parsed()) {
        ProfitMaximizer m;
        m.grid = parse_grid(read_file(revenue_grid));
        auto joint = parse_joint_or_product(read_file(revenue_joint), m.players());
        Rational r = expected_revenue(m, joint);
        std::cout << r.str() << " (" << r.to_double() << ")\n";
        return kExitOk;
    }
    if (search_cmd->parsed()) {
        auto joint = parse_joint_or_product(read_file(search_dist), search_players);
        SearchMode mode;
        if (search_mode == "truthful")
            mode = SearchMode::Truthful;
        else if (search_mode == "moral")
            mode = SearchMode::Moral;
        else
            throw ParseError("--mode must be truthful or moral");
        Rational alpha = parse_rational_flag(search_alpha, "--alpha");
        Rational eps = search_eps.empty() ? infer_step(joint)
                                          : parse_rational_flag(search_eps, "--eps");
        auto space = make_search_space(joint.player_values(), eps, mode, alpha);
        auto t0 = std::chrono::steady_clock::now();
        auto result = brute_force_optimal(space, joint, search_flags.search());
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        emit(search_out, serialize_search_result(result, search_mode, alpha,
                                                 search_flags.timing ? ms : -1));
        return kExitOk;
    }
    if (sweep_cmd->parsed()) {
        auto joint = parse_joint_or_product(read_file(sweep_dist), sweep_players);
        std::vector<Rational> alphas;
        std::string token;
        std::istringstream is(sweep_alphas);
        while (std::getline(is, token, ',')) alphas.push_back(Rational::parse(token));
        Rational eps =
            sweep_eps.empty() ? infer_step(joint) : parse_rational_flag(sweep_eps, "--eps");
        auto table = optimal_alpha_sweep(joint, joint.player_values(), eps, alphas,
                                         sweep_flags.search());
        for (const auto& [alpha, result] : table)
            std::cout << alpha.str() << "\t" << result.best_revenue.str() << "\t"
                      << (result.is_truthful_flag ? "truthful" : "non-truthful") << "\n";
        return kExitOk;
    }
    if (myerson_cmd->parsed()) {
        std::vector<DiscreteDistribution> ds;
        for (const auto& path : myerson_dists) ds.push_back(parse_distribution(read_file(path)));
        emit(myerson_out, serialize_grid(myerson_grid(ds)));
        return kExitOk;
    }
    if (lift_cmd->parsed()) {
        ProfitMaximizer m;
        m.grid = parse_grid(read_file(lift_grid));
        auto d = parse_distribution(read_file(lift_dist));
        auto [lifted, trace] = lift(m, d);
        if (!lift_trace.empty()) write_file(lift_trace, serialize_lift_trace(trace));
        emit(lift_out, serialize_grid(lifted.grid));
        return kExitOk;
    }
    if (lookahead_cmd->parsed()) {
        auto joint = parse_joint(read_file(lookahead_joint));
        auto result = lookahead(joint);
        std::cout << "revenue " << result.revenue.str() << " (" << result.revenue.to_double()
                  << ")\n";
        emit(lookahead_out, serialize_grid(result.mechanism.grid));
        return kExitOk;
    }
    if (gap_cmd->parsed()) {
        gap_params.eps = parse_rational_flag(gap_eps, "--eps");
        auto gap = gap_search(gap_params, gap_flags.search());
        emit(gap_out, serialize_gap_instance(gap));
        return kExitOk;
    }
    if (vh_cmd->parsed()) {
        auto joint = parse_joint(read_file(vh_joint));
        auto report = validate_h_properties(
            joint, parse_rational_flag(vh_alpha, "--alpha"), parse_rational_flag(vh_eps, "--eps"),
            parse_rational_flag(vh_delta, "--delta"), Rational(2721, 1001), vh_flags.search());
        emit(vh_out, serialize_h_report(report));
        return report.all_true() ? kExitOk : kExitVerificationFailed;
    }
    if (repro_cmd->parsed()) {
        auto results = run_reproduction(repro_options, std::cout);
        for (const auto& r : results)
            if (!r.pass) return kExitVerificationFailed;
        return kExitOk;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const auctionlab::ParseError& e) {
        std::cerr << "error (usage/parse): " << e.what() << "\n";
        return kExitUsage;
    } catch (const auctionlab::AuctionError& e) {
        std::cerr << "error (" << e.code() << "): " << e.what() << "\n";
        return kExitVerificationFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerificationFailed;
    }
}
