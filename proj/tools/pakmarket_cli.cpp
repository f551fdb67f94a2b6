#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pakmarket/auction.hpp"
#include "pakmarket/io.hpp"
#include "pakmarket/welfare.hpp"

namespace {

using namespace pakmarket;
using nlohmann::json;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

MarketInstance load(const std::string& path) { return parse_market(slurp(path)); }

int cmd_solve(const std::string& file) {
    MarketInstance inst = load(file);
    WelfareResult res = solve_welfare(inst);
    std::cout << certificate_to_json(inst, res) << "\n";
    return 0;
}

int cmd_verify(const std::string& file, const std::string& prices_json,
               const std::string& alloc_json) {
    MarketInstance inst = load(file);
    PackagePrices p = parse_prices_json(prices_json, inst.variety_names);
    auto alloc = parse_allocation_json(inst, alloc_json);
    VerifyResult res = verify_equilibrium(inst, p, alloc);
    json out;
    out["ok"] = res.ok;
    out["violations"] = res.violations;
    std::cout << out.dump(2) << "\n";
    return res.ok ? 0 : 1;
}

int cmd_prices(const std::string& file, long long bound) {
    MarketInstance inst = load(file);
    PriceEnumeration e = enumerate_equilibrium_prices(inst, bound);
    json out;
    json pkgs = json::array();
    for (Package s : e.packages) pkgs.push_back(package_name(s, inst.variety_names));
    out["packages"] = std::move(pkgs);
    json vecs = json::array();
    for (const auto& v : e.prices) vecs.push_back(v);
    out["prices"] = std::move(vecs);
    out["count"] = e.prices.size();
    std::cout << out.dump(2) << "\n";
    return e.prices.empty() ? 3 : 0;
}

int cmd_auction(const std::string& file, bool trace) {
    MarketInstance inst = load(file);
    AuctionOutcome res = run_ascending_auction(inst);
    std::cout << auction_to_json(inst, res, trace) << "\n";
    return 0;
}

int cmd_extended(const std::string& file, const std::string& aux_json, bool trace) {
    MarketInstance inst = load(file);
    std::map<Package, long long> c_aux;
    if (!aux_json.empty()) {
        for (const auto& [s, r] : parse_prices_json(aux_json, inst.variety_names)) {
            if (!rat_is_integer(r))
                throw ValidationError("auxiliary costs must be integers");
            c_aux[s] = rat_num_i64(r);
        }
    } else {
        const auto* rm = std::get_if<RevenueMax>(&inst.seller);
        if (!rm) throw ValidationError("extended auction requires a revenue_max seller");
        for (const auto& [s, v] : rm->v0) c_aux[s] = 0;
    }
    AuctionOutcome res = run_extended_ascending_auction(inst, c_aux);
    std::cout << auction_to_json(inst, res, trace) << "\n";
    return 0;
}

int cmd_dual(const std::string& file) {
    MarketInstance inst = load(file);
    SetFunction f;
    f.n = inst.supply.varieties();
    std::string label;
    if (const auto* rm = std::get_if<RevenueMax>(&inst.seller)) {
        f.table = rm->v0;
        label = "cost";
    } else if (const auto* add = std::get_if<AdditiveMarginal>(&inst.seller)) {
        f.table = add->c0;
        label = "value";
    } else if (const auto* su = std::get_if<SetUnion>(&inst.seller)) {
        f.table = su->c0;
        label = "value";
    } else {
        throw ValidationError("dual is defined for table-based seller models only");
    }
    SetFunction g = set_function_dual(f);
    json out;
    out["dual_is"] = label;
    json tbl = json::object();
    for (const auto& [s, v] : g.table) tbl[package_name(s, inst.variety_names)] = v;
    out["table"] = std::move(tbl);
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_check(const std::string& file) {
    MarketInstance inst = load(file);
    const int n = inst.supply.varieties();
    json out;
    if (const auto* rm = std::get_if<RevenueMax>(&inst.seller)) {
        SetFunction f{n, rm->v0};
        out["seller"] = {{"model", "revenue_max"},
                         {"superadditive", check_superadditive(rm->v0, n)},
                         {"set_cover_supermodular", is_set_cover_supermodular(f)}};
    } else if (const auto* add = std::get_if<AdditiveMarginal>(&inst.seller)) {
        SetFunction f{n, add->c0};
        out["seller"] = {{"model", "additive_marginal"},
                         {"subadditive", check_subadditive(add->c0, n)},
                         {"set_cover_submodular", is_set_cover_submodular(f)}};
    } else if (const auto* su = std::get_if<SetUnion>(&inst.seller)) {
        SetFunction f{n, su->c0};
        out["seller"] = {{"model", "set_union"},
                         {"subadditive", check_subadditive(su->c0, n)},
                         {"set_cover_submodular", is_set_cover_submodular(f)}};
    } else {
        out["seller"] = {{"model", "incremental_cfg"}};
    }
    json buyers = json::array();
    for (const auto& b : inst.buyers) {
        bool super = true;
        for (const auto& agent : b.unit_agents)
            super = super && check_superadditive(agent, n);
        buyers.push_back({{"name", b.name}, {"superadditive", super}});
    }
    out["buyers"] = std::move(buyers);
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pakmarket: market clearing with partition preferences"};
    app.require_subcommand(1);

    std::string file, prices_json, alloc_json, aux_json;
    long long bound = 0;
    bool trace = false;

    auto* solve = app.add_subcommand("solve", "solve welfare programs, emit certificate");
    solve->add_option("file", file)->required();

    auto* verify = app.add_subcommand("verify", "verify prices + allocation");
    verify->add_option("file", file)->required();
    verify->add_option("--prices", prices_json, "JSON object of package prices")
        ->required();
    verify->add_option("--alloc", alloc_json, "JSON object buyer -> package list")
        ->required();

    auto* prices = app.add_subcommand("prices", "enumerate integer equilibrium prices");
    prices->add_option("file", file)->required();
    prices->add_option("--bound", bound, "inclusive upper bound per package")
        ->required();

    auto* auction = app.add_subcommand("auction", "run the ascending auction");
    auction->add_option("file", file)->required();
    auction->add_flag("--trace", trace, "include the round-by-round table");

    auto* extended =
        app.add_subcommand("extended-auction", "run the extended ascending auction");
    extended->add_option("file", file)->required();
    extended->add_option("--aux-costs", aux_json,
                         "auctioneer marginal costs (JSON object; default all zero)");
    extended->add_flag("--trace", trace);

    auto* dual = app.add_subcommand("dual", "set-function dual of the seller table");
    dual->add_option("file", file)->required();

    auto* check = app.add_subcommand("check", "super/subadditivity and set-cover reports");
    check->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 64;
    }

    try {
        if (app.got_subcommand(solve)) return cmd_solve(file);
        if (app.got_subcommand(verify)) return cmd_verify(file, prices_json, alloc_json);
        if (app.got_subcommand(prices)) return cmd_prices(file, bound);
        if (app.got_subcommand(auction)) return cmd_auction(file, trace);
        if (app.got_subcommand(extended)) return cmd_extended(file, aux_json, trace);
        if (app.got_subcommand(dual)) return cmd_dual(file);
        if (app.got_subcommand(check)) return cmd_check(file);
    } catch (const pakmarket::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 64;
}
