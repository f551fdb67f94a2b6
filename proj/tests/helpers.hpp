#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pakmarket/auction.hpp"
#include "pakmarket/cfg.hpp"
#include "pakmarket/io.hpp"
#include "pakmarket/lp.hpp"
#include "pakmarket/welfare.hpp"

namespace pakmarket::testing {

inline std::string data_file(const std::string& name) {
    return std::string(PAKMARKET_TEST_DATA) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline MarketInstance load_instance(const std::string& name) {
    return parse_market(slurp(data_file(name)));
}

/// Two units each of A and B; buyer 1 with two unit-demand agents, buyers 3
/// and 4 single-agent; complete CFG with steps A=B=(1,2), AB=(-1,0).
inline MarketInstance running_example(bool with_extra_buyers = true) {
    MarketInstance inst;
    inst.supply.units = {2, 2};
    inst.variety_names = {"A", "B"};
    IncrementalCostSchedule sched;
    sched.steps[Package(0b01)] = {1, 2};
    sched.steps[Package(0b10)] = {1, 2};
    sched.steps[Package(0b11)] = {-1, 0};
    inst.seller = IncrementalCfg{complete_graph(2), std::move(sched)};
    BuyerValuation b1;
    b1.name = "1";
    b1.unit_agents.push_back({{Package(0b01), 3}, {Package(0b10), 5}, {Package(0b11), 9}});
    b1.unit_agents.push_back({{Package(0b01), 1}, {Package(0b10), 2}, {Package(0b11), 9}});
    inst.buyers.push_back(std::move(b1));
    if (with_extra_buyers) {
        BuyerValuation b3;
        b3.name = "3";
        b3.unit_agents.push_back(
            {{Package(0b01), 5}, {Package(0b10), 3}, {Package(0b11), 8}});
        BuyerValuation b4;
        b4.name = "4";
        b4.unit_agents.push_back(
            {{Package(0b01), 6}, {Package(0b10), 2}, {Package(0b11), 11}});
        inst.buyers.push_back(std::move(b3));
        inst.buyers.push_back(std::move(b4));
    }
    inst.packages = all_packages(2);
    return inst;
}

/// Three single-unit goods, zero costs, the classic no-equilibrium valuations.
inline MarketInstance three_buyers_no_equilibrium() {
    MarketInstance inst;
    inst.supply.units = {1, 1, 1};
    inst.variety_names = {"A", "B", "C"};
    std::map<Package, long long> zero;
    for (Package s : all_packages(3)) zero[s] = 0;
    inst.seller = AdditiveMarginal{zero};
    auto buyer = [&](const char* name, std::vector<long long> v) {
        BuyerValuation b;
        b.name = name;
        std::map<Package, long long> tbl;
        auto pkgs = all_packages(3);
        for (std::size_t i = 0; i < pkgs.size(); ++i) tbl[pkgs[i]] = v[i];
        b.unit_agents.push_back(std::move(tbl));
        return b;
    };
    // order: A, B, AB, C, AC, BC, ABC
    inst.buyers = {buyer("1", {10, 8, 13, 2, 11, 9, 14}),
                   buyer("2", {8, 5, 13, 10, 14, 13, 15}),
                   buyer("3", {1, 1, 2, 8, 9, 9, 10})};
    inst.packages = all_packages(3);
    return inst;
}

/// Six unit-demand buyers over two single-unit goods (values 5/5, 7/7, 11/11).
inline std::vector<BuyerValuation> six_buyers() {
    auto buyer = [](const char* name, long long a, long long b, long long ab) {
        BuyerValuation v;
        v.name = name;
        std::map<Package, long long> tbl;
        if (a) tbl[Package(0b01)] = a;
        if (b) tbl[Package(0b10)] = b;
        if (ab) tbl[Package(0b11)] = ab;
        v.unit_agents.push_back(std::move(tbl));
        return v;
    };
    return {buyer("L1", 5, 0, 5),  buyer("L2", 5, 0, 5),  buyer("L3", 0, 7, 7),
            buyer("L4", 0, 7, 7),  buyer("L5", 0, 0, 11), buyer("L6", 0, 0, 11)};
}

inline MarketInstance six_buyers_revenue() {
    MarketInstance inst;
    inst.supply.units = {1, 1};
    inst.variety_names = {"A", "B"};
    inst.seller = RevenueMax{
        {{Package(0b01), 2}, {Package(0b10), 4}, {Package(0b11), 8}}};
    inst.buyers = six_buyers();
    inst.packages = all_packages(2);
    return inst;
}

inline MarketInstance six_buyers_costs() {
    MarketInstance inst;
    inst.supply.units = {1, 1};
    inst.variety_names = {"A", "B"};
    inst.seller = AdditiveMarginal{
        {{Package(0b01), 4}, {Package(0b10), 6}, {Package(0b11), 8}}};
    inst.buyers = six_buyers();
    inst.packages = all_packages(2);
    return inst;
}

/// Superadditive closure: raise each value to the best split of its members.
inline std::map<Package, long long> superadditive_closure(
    std::map<Package, long long> v, int n) {
    for (Package s : all_packages(n)) {
        long long best = v.count(s) ? v[s] : 0;
        for (Mask t = (s.bits - 1) & s.bits; t > 0; t = (t - 1) & s.bits) {
            Package a(t), b(s.bits & ~t);
            if (b.empty()) continue;
            best = std::max(best, v[a] + v[b]);
        }
        v[s] = best;
    }
    return v;
}

/// Subadditive closure: lower each cost to the cheapest split of its members.
inline std::map<Package, long long> subadditive_closure(std::map<Package, long long> c,
                                                        int n) {
    for (Package s : all_packages(n)) {
        long long best = c.count(s) ? c[s] : 0;
        for (Mask t = (s.bits - 1) & s.bits; t > 0; t = (t - 1) & s.bits) {
            Package a(t), b(s.bits & ~t);
            if (b.empty()) continue;
            best = std::min(best, c[a] + c[b]);
        }
        c[s] = best;
    }
    return c;
}

inline std::map<Package, long long> random_superadditive(std::mt19937_64& rng, int n,
                                                         int lo = 0, int hi = 12) {
    std::uniform_int_distribution<long long> dist(lo, hi);
    std::map<Package, long long> v;
    for (Package s : all_packages(n)) v[s] = dist(rng);
    return superadditive_closure(std::move(v), n);
}

inline std::map<Package, long long> random_subadditive(std::mt19937_64& rng, int n,
                                                       int lo = 0, int hi = 12) {
    std::uniform_int_distribution<long long> dist(lo, hi);
    std::map<Package, long long> c;
    for (Package s : all_packages(n)) c[s] = dist(rng);
    return subadditive_closure(std::move(c), n);
}

/// Random valid CFG on n varieties: all singletons plus a random set of larger
/// packages including the ground set; every composite arcs to its member
/// singletons plus optional redundant shortcuts (exercises the normalizer).
inline CostFunctionGraph random_valid_cfg(std::mt19937_64& rng, int n) {
    std::vector<Package> nodes;
    for (int j = 0; j < n; ++j) nodes.push_back(singleton(j));
    nodes.push_back(full_package(n));
    for (Package s : all_packages(n))
        if (s.size() > 1 && s != full_package(n) && (rng() & 1)) nodes.push_back(s);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::vector<Arc> arcs;
    for (Package s : nodes) {
        if (s.size() < 2) continue;
        for (int j : members(s)) arcs.push_back({s, singleton(j)});
        for (Package t : nodes)
            if (t.strict_subset_of(s) && t.size() > 1 && (rng() & 1))
                arcs.push_back({s, t});
    }
    return CostFunctionGraph(std::move(nodes), std::move(arcs));
}

/// Random single-unit instance with superadditive values and subadditive
/// marginal costs (the ascending-auction preconditions).
inline MarketInstance random_auction_instance(std::mt19937_64& rng, int n,
                                              int n_buyers) {
    MarketInstance inst;
    inst.supply.units.assign(n, 1);
    for (int j = 0; j < n; ++j) inst.variety_names.push_back(std::string(1, 'A' + j));
    inst.seller = AdditiveMarginal{random_subadditive(rng, n, 0, 6)};
    for (int l = 0; l < n_buyers; ++l) {
        BuyerValuation b;
        b.name = "B" + std::to_string(l + 1);
        b.unit_agents.push_back(random_superadditive(rng, n, 0, 12));
        inst.buyers.push_back(std::move(b));
    }
    inst.packages = all_packages(n);
    return inst;
}

/// Exhaustive vertex enumeration for  max c.x, A x <= / = b, x >= 0.
/// Requires a bounded feasible region (callers add box rows); returns the
/// optimal value, or nullopt when no vertex is feasible (empty polytope).
inline std::optional<Rat> lp_vertex_oracle(const LinearProgram& lp) {
    const int nv = static_cast<int>(lp.vars());
    const int nr = static_cast<int>(lp.rows());
    const int total = nr + nv; // rows, then the nonnegativity bounds
    std::vector<int> idx(total);
    for (int i = 0; i < total; ++i) idx[i] = i;

    std::optional<Rat> best;
    std::vector<int> pick(nv);
    // iterate over all size-nv subsets of the constraint list
    std::vector<int> comb(nv);
    for (int i = 0; i < nv; ++i) comb[i] = i;
    auto advance = [&]() {
        int i = nv - 1;
        while (i >= 0 && comb[i] == total - nv + i) --i;
        if (i < 0) return false;
        ++comb[i];
        for (int j = i + 1; j < nv; ++j) comb[j] = comb[j - 1] + 1;
        return true;
    };
    do {
        // EQ rows must always be active
        bool covers_eq = true;
        for (int r = 0; r < nr; ++r)
            if (lp.rel[r] == RowRelation::EQ &&
                std::find(comb.begin(), comb.end(), r) == comb.end())
                covers_eq = false;
        if (!covers_eq) continue;

        // assemble and solve the nv x nv system by Gaussian elimination
        std::vector<std::vector<Rat>> m(nv, std::vector<Rat>(nv + 1, Rat(0)));
        for (int i = 0; i < nv; ++i) {
            int cidx = comb[i];
            if (cidx < nr) {
                for (int j = 0; j < nv; ++j) m[i][j] = lp.A[cidx][j];
                m[i][nv] = lp.b[cidx];
            } else {
                m[i][cidx - nr] = Rat(1);
            }
        }
        bool singular = false;
        for (int col = 0; col < nv; ++col) {
            int piv = -1;
            for (int row = col; row < nv; ++row)
                if (m[row][col] != 0) {
                    piv = row;
                    break;
                }
            if (piv < 0) {
                singular = true;
                break;
            }
            std::swap(m[col], m[piv]);
            for (int row = 0; row < nv; ++row) {
                if (row == col || m[row][col] == 0) continue;
                Rat f = m[row][col] / m[col][col];
                for (int j = col; j <= nv; ++j) m[row][j] -= f * m[col][j];
            }
        }
        if (singular) continue;
        std::vector<Rat> x(nv);
        for (int i = 0; i < nv; ++i) x[i] = m[i][nv] / m[i][i];

        bool feasible = true;
        for (int i = 0; i < nv && feasible; ++i)
            if (x[i] < 0) feasible = false;
        for (int r = 0; r < nr && feasible; ++r) {
            Rat lhs(0);
            for (int j = 0; j < nv; ++j) lhs += lp.A[r][j] * x[j];
            if (lp.rel[r] == RowRelation::EQ ? lhs != lp.b[r] : lhs > lp.b[r])
                feasible = false;
        }
        if (!feasible) continue;
        Rat val(0);
        for (int j = 0; j < nv; ++j) val += lp.c[j] * x[j];
        if (!best || val > *best) best = val;
    } while (advance());
    return best;
}

} // namespace pakmarket::testing
