#include "pakmarket/preferences.hpp"

#include <algorithm>
#include <limits>

namespace pakmarket {

int IncrementalCostSchedule::max_steps() const {
    std::size_t m = 0;
    for (const auto& [s, lst] : steps) m = std::max(m, lst.size());
    return static_cast<int>(m);
}

std::optional<long long> IncrementalCostSchedule::step(Package s, int r) const {
    auto it = steps.find(s);
    if (it == steps.end() || r < 1 || r > static_cast<int>(it->second.size()))
        return std::nullopt;
    return it->second[r - 1];
}

long long lookup0(const std::map<Package, long long>& table, Package s) {
    if (s.empty()) return 0;
    auto it = table.find(s);
    if (it == table.end()) throw DomainError("package has no table entry");
    return it->second;
}

long long total_cost(const SellerModel& seller, const PackageMultiset& k,
                     const Supply& supply) {
    if (!is_feasible(k, supply)) throw DomainError("total_cost: infeasible multiset");
    if (const auto* inc = std::get_if<IncrementalCfg>(&seller)) {
        auto y = forward_totals(inc->graph, k);
        long long total = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            Package s = inc->graph.nodes()[i];
            for (int r = 1; r <= y[i]; ++r) {
                auto dc = inc->schedule.step(s, r);
                if (!dc)
                    throw DomainError("total_cost: infeasible partition, no step " +
                                      std::to_string(r) + " for a node");
                total += *dc;
            }
        }
        return total;
    }
    if (const auto* add = std::get_if<AdditiveMarginal>(&seller)) {
        long long total = 0;
        for (const auto& [s, c] : k.counts()) total += lookup0(add->c0, s) * c;
        return total;
    }
    if (const auto* su = std::get_if<SetUnion>(&seller)) {
        Package u;
        for (const auto& [s, c] : k.counts()) {
            if (c > 1 || !s.disjoint_with(u))
                throw DomainError("total_cost: SetUnion requires disjoint packages");
            u = u | s;
        }
        return lookup0(su->c0, u);
    }
    throw UnsupportedError("total_cost: RevenueMax seller has no cost semantics");
}

namespace {

long long agent_value(const BuyerValuation& buyer, int q, Package s) {
    if (s.empty()) return 0;
    const auto& tbl = buyer.unit_agents[q];
    auto it = tbl.find(s);
    return it == tbl.end() ? 0 : it->second;
}

// DFS over agents: each takes an unused copy or nothing. Q small.
void match_exhaustive(const BuyerValuation& buyer, const std::vector<Package>& copies,
                      int q, std::vector<int>& taken, long long acc,
                      std::vector<int>& cur, MatchResult& best) {
    const int Q = static_cast<int>(buyer.unit_agents.size());
    if (q == Q) {
        if (acc > best.value) {
            best.value = acc;
            best.matching.assign(Q, Package());
            for (int i = 0; i < Q; ++i)
                if (cur[i] >= 0) best.matching[i] = copies[cur[i]];
        }
        return;
    }
    cur[q] = -1;
    match_exhaustive(buyer, copies, q + 1, taken, acc, cur, best);
    for (std::size_t i = 0; i < copies.size(); ++i) {
        if (taken[i]) continue;
        taken[i] = 1;
        cur[q] = static_cast<int>(i);
        match_exhaustive(buyer, copies, q + 1, taken,
                         acc + agent_value(buyer, q, copies[i]), cur, best);
        taken[i] = 0;
    }
    cur[q] = -1;
}

// Jonker-Volgenant style min-cost assignment, rows <= cols. Returns per-row
// column index. Costs must fit comfortably in long long.
std::vector<int> assignment_min(const std::vector<std::vector<long long>>& a) {
    const int n = static_cast<int>(a.size());
    const int m = n == 0 ? 0 : static_cast<int>(a[0].size());
    const long long INF = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> u(n + 1, 0), v(m + 1, 0);
    std::vector<int> p(m + 1, 0), way(m + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<long long> minv(m + 1, INF);
        std::vector<char> used(m + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            long long delta = INF;
            for (int j = 1; j <= m; ++j) {
                if (used[j]) continue;
                long long cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= m; ++j)
        if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

MatchResult match_hungarian(const BuyerValuation& buyer,
                            const std::vector<Package>& copies) {
    const int Q = static_cast<int>(buyer.unit_agents.size());
    const int C = static_cast<int>(copies.size());
    // columns: real copies plus one dummy per agent (value 0 = unmatched)
    const int m = C + Q;
    long long maxval = 0;
    for (int q = 0; q < Q; ++q)
        for (int i = 0; i < C; ++i)
            maxval = std::max(maxval, agent_value(buyer, q, copies[i]));
    std::vector<std::vector<long long>> cost(Q, std::vector<long long>(m, maxval));
    for (int q = 0; q < Q; ++q)
        for (int i = 0; i < C; ++i)
            cost[q][i] = maxval - agent_value(buyer, q, copies[i]);
    auto cols = assignment_min(cost);
    MatchResult out;
    out.matching.assign(Q, Package());
    for (int q = 0; q < Q; ++q) {
        if (cols[q] >= 0 && cols[q] < C) {
            long long val = agent_value(buyer, q, copies[cols[q]]);
            if (val > 0) {
                out.matching[q] = copies[cols[q]];
                out.value += val;
            }
        }
    }
    return out;
}

} // namespace

MatchResult aggregate_value(const BuyerValuation& buyer, const PackageMultiset& k) {
    std::vector<Package> copies;
    for (const auto& [s, c] : k.counts())
        for (int i = 0; i < c; ++i) copies.push_back(s);
    const int Q = static_cast<int>(buyer.unit_agents.size());
    if (Q <= 6 && copies.size() <= 12) {
        MatchResult best;
        best.matching.assign(Q, Package());
        std::vector<int> taken(copies.size(), 0), cur(Q, -1);
        match_exhaustive(buyer, copies, 0, taken, 0, cur, best);
        return best;
    }
    return match_hungarian(buyer, copies);
}

namespace {

Rat price_of(const PackagePrices& p, const PackageMultiset& k) {
    Rat total(0);
    for (const auto& [s, c] : k.counts()) {
        auto it = p.find(s);
        if (it == p.end()) throw DomainError("missing price for a package");
        total += it->second * Rat(c);
    }
    return total;
}

} // namespace

DemandResult buyer_demand(const BuyerValuation& buyer, const PackagePrices& p,
                          const Supply& supply, const std::vector<Package>& packages) {
    DemandResult out;
    out.utility = Rat(0);
    bool first = true;
    for (const auto& k : enumerate_feasible(supply, packages)) {
        Rat util = to_rat(aggregate_value(buyer, k).value) - price_of(p, k);
        if (first || util > out.utility) {
            out.utility = util;
            out.argmax.clear();
            first = false;
        }
        if (util == out.utility) out.argmax.push_back(k);
    }
    return out;
}

namespace {

void partitions_rec(const std::vector<Package>& packages, std::size_t idx, Package used,
                    PackageMultiset& cur, std::vector<PackageMultiset>& out) {
    if (idx == packages.size()) {
        out.push_back(cur);
        return;
    }
    partitions_rec(packages, idx + 1, used, cur, out);
    if (packages[idx].disjoint_with(used)) {
        cur.add(packages[idx], 1);
        partitions_rec(packages, idx + 1, used | packages[idx], cur, out);
        cur.add(packages[idx], -1);
    }
}

} // namespace

DemandResult seller_supply(const SellerModel& seller, const PackagePrices& p,
                           const Supply& supply, const std::vector<Package>& packages) {
    DemandResult out;
    out.utility = Rat(0);
    if (const auto* rm = std::get_if<RevenueMax>(&seller)) {
        for (int u : supply.units)
            if (u != 1)
                throw UnsupportedError("RevenueMax supply requires one unit per variety");
        std::vector<PackageMultiset> candidates;
        PackageMultiset cur;
        partitions_rec(packages, 0, Package(), cur, candidates);
        bool first = true;
        for (const auto& k : candidates) {
            Package sold;
            for (const auto& [s, c] : k.counts()) sold = sold | s;
            Package unsold = complement(sold, supply.varieties());
            Rat rev = price_of(p, k) + to_rat(lookup0(rm->v0, unsold));
            if (first || rev > out.utility) {
                out.utility = rev;
                out.argmax.clear();
                first = false;
            }
            if (rev == out.utility) out.argmax.push_back(k);
        }
        return out;
    }
    bool first = true;
    for (const auto& k : enumerate_feasible(supply, packages)) {
        long long c;
        try {
            c = total_cost(seller, k, supply);
        } catch (const DomainError&) {
            continue; // infeasible partition under this model
        }
        Rat util = price_of(p, k) - to_rat(c);
        if (first || util > out.utility) {
            out.utility = util;
            out.argmax.clear();
            first = false;
        }
        if (util == out.utility) out.argmax.push_back(k);
    }
    if (first) throw DomainError("seller_supply: no feasible partition");
    return out;
}

namespace {

bool check_pairs(const std::map<Package, long long>& f, int n, bool super) {
    auto value = [&](Package s) { // absent entries are worth/cost nothing
        auto it = f.find(s);
        return it == f.end() ? 0LL : it->second;
    };
    Mask lim = Mask{1} << n;
    for (Mask a = 1; a < lim; ++a)
        for (Mask b = 1; b < lim; ++b) {
            if (a & b) continue;
            long long lhs = value(Package(a)) + value(Package(b));
            long long rhs = value(Package(a | b));
            if (super ? lhs > rhs : lhs < rhs) return false;
        }
    return true;
}

} // namespace

bool check_superadditive(const std::map<Package, long long>& v, int n) {
    return check_pairs(v, n, true);
}

bool check_subadditive(const std::map<Package, long long>& c, int n) {
    return check_pairs(c, n, false);
}

std::vector<Package> referenced_packages(const MarketInstance& instance) {
    std::set<Package> set;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IncrementalCfg>) {
                for (Package s : m.graph.nodes()) set.insert(s);
            } else if constexpr (std::is_same_v<T, RevenueMax>) {
                for (const auto& [s, x] : m.v0) set.insert(s);
            } else {
                for (const auto& [s, x] : m.c0) set.insert(s);
            }
        },
        instance.seller);
    for (const auto& b : instance.buyers)
        for (const auto& agent : b.unit_agents)
            for (const auto& [s, x] : agent) set.insert(s);
    return {set.begin(), set.end()};
}

void validate_instance(const MarketInstance& instance) {
    const int n = instance.supply.varieties();
    if (n < 1 || n > kMaxVarieties)
        throw ValidationError("instance: variety count out of range");
    for (int u : instance.supply.units)
        if (u < 1) throw ValidationError("instance: supply units must be >= 1");
    Package ground = instance.supply.ground_set();
    for (Package s : referenced_packages(instance))
        if (!s.subset_of(ground))
            throw ValidationError("instance: package outside ground set");
    for (const auto& b : instance.buyers) {
        if (b.unit_agents.empty())
            throw ValidationError("instance: buyer " + b.name + " has no agents");
        for (const auto& agent : b.unit_agents)
            for (const auto& [s, v] : agent) {
                if (s.empty()) throw ValidationError("instance: value on empty package");
                if (v < 0)
                    throw ValidationError("instance: negative buyer value for " + b.name);
            }
    }
    if (const auto* inc = std::get_if<IncrementalCfg>(&instance.seller)) {
        require_valid_cfg(inc->graph);
        for (const auto& [s, lst] : inc->schedule.steps) {
            if (!inc->graph.has_node(s))
                throw ValidationError("instance: schedule package is not a graph node");
            for (std::size_t r = 1; r < lst.size(); ++r)
                if (lst[r - 1] > lst[r])
                    throw ValidationError(
                        "Assumption 1 violated at (node, r=" + std::to_string(r + 1) +
                        "): incremental costs must be nondecreasing");
        }
        // exhaustive nonnegativity of C0 over the feasible universe, desk scale
        if (instance.supply.total() <= unit_guard()) {
            for (const auto& k :
                 enumerate_feasible(instance.supply, inc->graph.nodes())) {
                try {
                    if (total_cost(instance.seller, k, instance.supply) < 0)
                        throw ValidationError("instance: negative aggregate cost C0");
                } catch (const DomainError&) {
                    continue;
                }
            }
        }
    } else if (const auto* add = std::get_if<AdditiveMarginal>(&instance.seller)) {
        for (const auto& [s, c] : add->c0)
            if (c < 0) throw ValidationError("instance: negative marginal cost");
    } else if (const auto* su = std::get_if<SetUnion>(&instance.seller)) {
        for (const auto& [s, c] : su->c0)
            if (c < 0) throw ValidationError("instance: negative set-union cost");
    } else if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
        for (const auto& [s, v] : rm->v0)
            if (v < 0) throw ValidationError("instance: negative reserve value");
    }
}

namespace {

// Remap a package from the old ground set to the new one, placing variety
// `j`'s bit (when present) at the label `label` (0-based).
Package remap(Package s, int j, int n_labels, int label) {
    Mask out = 0;
    for (int v : members(s)) {
        if (v == j)
            out |= Mask{1} << (j + label);
        else if (v < j)
            out |= Mask{1} << v;
        else
            out |= Mask{1} << (v - 1 + n_labels);
    }
    return Package(out);
}

} // namespace

MarketInstance relabel_identical(const MarketInstance& instance, int variety) {
    const int n = instance.supply.varieties();
    if (variety < 0 || variety >= n)
        throw DomainError("relabel_identical: variety absent");
    const int omega = instance.supply.units[variety];
    if (omega < 2) throw DomainError("relabel_identical: variety has a single unit");
    const int nn = n - 1 + omega;
    if (nn > kMaxVarieties)
        throw DomainError("relabel_identical: relabeled ground set too large");

    MarketInstance out;
    out.supply.units.assign(nn, 0);
    for (int v = 0; v < n; ++v) {
        if (v < variety)
            out.supply.units[v] = instance.supply.units[v];
        else if (v > variety)
            out.supply.units[v - 1 + omega] = instance.supply.units[v];
    }
    for (int i = 0; i < omega; ++i) out.supply.units[variety + i] = 1;

    out.variety_names.assign(nn, "");
    const auto& names = instance.variety_names;
    auto old_name = [&](int v) {
        return v < static_cast<int>(names.size()) ? names[v] : std::to_string(v);
    };
    for (int v = 0; v < n; ++v) {
        if (v < variety)
            out.variety_names[v] = old_name(v);
        else if (v > variety)
            out.variety_names[v - 1 + omega] = old_name(v);
    }
    for (int i = 0; i < omega; ++i)
        out.variety_names[variety + i] = old_name(variety) + std::to_string(i + 1);

    auto images = [&](Package s) {
        std::vector<Package> out_pkgs;
        if (!s.contains(variety)) {
            out_pkgs.push_back(remap(s, variety, omega, 0));
        } else {
            for (int i = 0; i < omega; ++i)
                out_pkgs.push_back(remap(s, variety, omega, i));
        }
        return out_pkgs;
    };

    for (const auto& b : instance.buyers) {
        BuyerValuation nb;
        nb.name = b.name;
        for (const auto& agent : b.unit_agents) {
            std::map<Package, long long> na;
            for (const auto& [s, v] : agent)
                for (Package img : images(s)) na[img] = v;
            nb.unit_agents.push_back(std::move(na));
        }
        out.buyers.push_back(std::move(nb));
    }

    for (Package s : instance.packages)
        for (Package img : images(s)) out.packages.push_back(img);
    std::sort(out.packages.begin(), out.packages.end());
    out.packages.erase(std::unique(out.packages.begin(), out.packages.end()),
                       out.packages.end());

    if (const auto* inc = std::get_if<IncrementalCfg>(&instance.seller)) {
        std::vector<Package> nodes;
        std::vector<Arc> arcs;
        for (Package s : inc->graph.nodes())
            for (Package img : images(s)) nodes.push_back(img);
        for (const Arc& a : inc->graph.arcs()) {
            bool from_has = a.from.contains(variety);
            bool to_has = a.to.contains(variety);
            if (!from_has) {
                arcs.push_back({remap(a.from, variety, omega, 0),
                                remap(a.to, variety, omega, 0)});
            } else {
                for (int i = 0; i < omega; ++i)
                    arcs.push_back({remap(a.from, variety, omega, i),
                                    remap(a.to, variety, omega, to_has ? i : 0)});
            }
        }
        IncrementalCostSchedule ns;
        for (const auto& [s, lst] : inc->schedule.steps) {
            if (!s.contains(variety)) {
                ns.steps[remap(s, variety, omega, 0)] = lst;
            } else {
                // label i takes the i-th step of the original schedule
                for (int i = 0; i < omega && i < static_cast<int>(lst.size()); ++i)
                    ns.steps[remap(s, variety, omega, i)] = {lst[i]};
            }
        }
        // a lone singleton node would leave the labels disconnected
        if (inc->graph.nodes().size() == 1 && omega >= 2 &&
            inc->graph.nodes()[0] == singleton(variety)) {
            Package all_labels;
            for (int i = 0; i < omega; ++i)
                all_labels = all_labels | singleton(variety + i);
            nodes.push_back(all_labels);
            for (int i = 0; i < omega; ++i)
                arcs.push_back({all_labels, singleton(variety + i)});
        }
        out.seller = IncrementalCfg{CostFunctionGraph(std::move(nodes), std::move(arcs)),
                                    std::move(ns)};
    } else if (const auto* add = std::get_if<AdditiveMarginal>(&instance.seller)) {
        AdditiveMarginal na;
        for (const auto& [s, c] : add->c0)
            for (Package img : images(s)) na.c0[img] = c;
        out.seller = std::move(na);
    } else if (const auto* su = std::get_if<SetUnion>(&instance.seller)) {
        SetUnion ns;
        for (const auto& [s, c] : su->c0)
            for (Package img : images(s)) ns.c0[img] = c;
        out.seller = std::move(ns);
    } else if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
        RevenueMax nr;
        for (const auto& [s, v] : rm->v0)
            for (Package img : images(s)) nr.v0[img] = v;
        out.seller = std::move(nr);
    }
    return out;
}

} // namespace pakmarket
