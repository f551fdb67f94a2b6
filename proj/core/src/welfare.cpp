#include "pakmarket/welfare.hpp"

#include <algorithm>

namespace pakmarket {

namespace {

/// Packages the seller can put in a partition.
std::vector<Package> sellable_packages(const MarketInstance& instance) {
    if (const auto* inc = std::get_if<IncrementalCfg>(&instance.seller))
        return inc->graph.nodes();
    if (const auto* add = std::get_if<AdditiveMarginal>(&instance.seller)) {
        std::vector<Package> out;
        for (const auto& [s, c] : add->c0) out.push_back(s);
        return out;
    }
    if (const auto* su = std::get_if<SetUnion>(&instance.seller)) {
        std::vector<Package> out;
        for (const auto& [s, c] : su->c0) out.push_back(s);
        return out;
    }
    const auto& rm = std::get<RevenueMax>(instance.seller);
    std::vector<Package> out;
    for (const auto& [s, v] : rm.v0) out.push_back(s);
    return out;
}

std::vector<Package> trade_packages(const MarketInstance& instance) {
    if (!instance.packages.empty()) return instance.packages;
    return sellable_packages(instance);
}

void disjoint_partitions_rec(const std::vector<Package>& packages, std::size_t idx,
                             Package used, PackageMultiset& cur,
                             std::vector<PackageMultiset>& out) {
    if (idx == packages.size()) {
        out.push_back(cur);
        return;
    }
    disjoint_partitions_rec(packages, idx + 1, used, cur, out);
    if (packages[idx].disjoint_with(used)) {
        cur.add(packages[idx], 1);
        disjoint_partitions_rec(packages, idx + 1, used | packages[idx], cur, out);
        cur.add(packages[idx], -1);
    }
}

/// Seller-side candidate partitions with their objective contribution:
/// -C0(k) for cost sellers, +v0(unsold) for the revenue seller.
struct SellerCandidate {
    PackageMultiset k;
    long long offset; // added to p.k in the seller objective
};

std::vector<SellerCandidate> seller_candidates(const MarketInstance& instance) {
    std::vector<SellerCandidate> out;
    auto pkgs = sellable_packages(instance);
    if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
        for (int u : instance.supply.units)
            if (u != 1)
                throw UnsupportedError("RevenueMax requires one unit per variety");
        std::vector<PackageMultiset> parts;
        PackageMultiset cur;
        disjoint_partitions_rec(pkgs, 0, Package(), cur, parts);
        for (auto& k : parts) {
            Package sold;
            for (const auto& [s, c] : k.counts()) sold = sold | s;
            Package unsold = complement(sold, instance.supply.varieties());
            out.push_back({std::move(k), lookup0(rm->v0, unsold)});
        }
        return out;
    }
    for (const auto& k : enumerate_feasible(instance.supply, pkgs)) {
        try {
            long long c = total_cost(instance.seller, k, instance.supply);
            out.push_back({k, -c});
        } catch (const DomainError&) {
            continue; // not a valid partition under this model
        }
    }
    return out;
}

BuyerValuation pooled_buyer(const MarketInstance& instance,
                            std::vector<std::pair<int, int>>& owner) {
    BuyerValuation pooled;
    pooled.name = "(pooled)";
    for (std::size_t l = 0; l < instance.buyers.size(); ++l)
        for (std::size_t q = 0; q < instance.buyers[l].unit_agents.size(); ++q) {
            pooled.unit_agents.push_back(instance.buyers[l].unit_agents[q]);
            owner.emplace_back(static_cast<int>(l), static_cast<int>(q));
        }
    return pooled;
}

} // namespace

MarketInstance as_incremental(const MarketInstance& instance) {
    if (std::holds_alternative<IncrementalCfg>(instance.seller)) return instance;
    if (const auto* add = std::get_if<AdditiveMarginal>(&instance.seller)) {
        MarketInstance out = instance;
        out.seller = additive_to_cfg(*add, instance.supply, trade_packages(instance));
        return out;
    }
    throw UnsupportedError("seller model has no incremental-cost representation");
}

IncrementalCfg additive_to_cfg(const AdditiveMarginal& seller, const Supply& supply,
                               const std::vector<Package>& packages) {
    std::set<Package> node_set;
    for (Package s : packages) {
        node_set.insert(s);
        for (int j : members(s)) node_set.insert(singleton(j));
    }
    std::vector<Package> nodes(node_set.begin(), node_set.end());
    std::vector<Arc> arcs;
    IncrementalCostSchedule schedule;
    for (Package s : nodes) {
        if (s.size() == 1) {
            int j = members(s)[0];
            long long cj = lookup0(seller.c0, s);
            schedule.steps[s].assign(supply.units[j], cj);
            continue;
        }
        long long delta = lookup0(seller.c0, s);
        int cap = supply.total();
        for (int j : members(s)) {
            delta -= lookup0(seller.c0, singleton(j));
            cap = std::min(cap, supply.units[j]);
            arcs.push_back({s, singleton(j)});
        }
        schedule.steps[s].assign(cap, delta);
    }
    IncrementalCfg out{CostFunctionGraph(std::move(nodes), std::move(arcs)),
                       std::move(schedule)};
    require_valid_cfg(out.graph);
    return out;
}

SwlpEncoding build_swlp(const MarketInstance& instance) {
    const auto* inc = std::get_if<IncrementalCfg>(&instance.seller);
    if (!inc) throw UnsupportedError("build_swlp requires an IncrementalCfg seller");
    require_valid_cfg(inc->graph);

    SwlpEncoding enc;
    enc.rbar = inc->schedule.max_steps();
    const auto& nodes = inc->graph.nodes();
    auto phi = characteristic_matrix(inc->graph);

    for (std::size_t l = 0; l < instance.buyers.size(); ++l)
        for (std::size_t q = 0; q < instance.buyers[l].unit_agents.size(); ++q)
            for (const auto& [s, v] : instance.buyers[l].unit_agents[q])
                if (inc->graph.has_node(s))
                    enc.xvars.push_back({s, static_cast<int>(q), static_cast<int>(l)});
    for (Package s : nodes) {
        auto it = inc->schedule.steps.find(s);
        int len = it == inc->schedule.steps.end() ? 0
                                                  : static_cast<int>(it->second.size());
        for (int r = 1; r <= len; ++r) enc.yvars.push_back({s, r});
    }

    const std::size_t nx = enc.xvars.size(), ny = enc.yvars.size();
    enc.lp.c.assign(nx + ny, Rat(0));
    for (std::size_t i = 0; i < nx; ++i) {
        const auto& xv = enc.xvars[i];
        enc.lp.c[i] =
            to_rat(instance.buyers[xv.l].unit_agents[xv.q].at(xv.s));
    }
    for (std::size_t i = 0; i < ny; ++i)
        enc.lp.c[nx + i] = -to_rat(*inc->schedule.step(enc.yvars[i].s, enc.yvars[i].r));

    // SWLP1: per unit-demand agent, at most one package
    for (std::size_t l = 0; l < instance.buyers.size(); ++l)
        for (std::size_t q = 0; q < instance.buyers[l].unit_agents.size(); ++q) {
            std::vector<Rat> row(nx + ny, Rat(0));
            for (std::size_t i = 0; i < nx; ++i)
                if (enc.xvars[i].l == static_cast<int>(l) &&
                    enc.xvars[i].q == static_cast<int>(q))
                    row[i] = 1;
            enc.lp.add_row(std::move(row), RowRelation::LE, Rat(1));
            enc.rows_swlp1.emplace_back(static_cast<int>(l), static_cast<int>(q));
        }
    // SWLP2: allocated quantity of S bounded by the partition's k_S = Phi_S.Y
    for (std::size_t si = 0; si < nodes.size(); ++si) {
        std::vector<Rat> row(nx + ny, Rat(0));
        for (std::size_t i = 0; i < nx; ++i)
            if (enc.xvars[i].s == nodes[si]) row[i] = 1;
        for (std::size_t i = 0; i < ny; ++i) {
            int spi = inc->graph.node_index(enc.yvars[i].s);
            if (phi[si][spi] != 0) row[nx + i] = -Rat(phi[si][spi]);
        }
        enc.lp.add_row(std::move(row), RowRelation::LE, Rat(0));
        enc.rows_swlp2.push_back(nodes[si]);
    }
    // SWLP3: each incremental step used at most once
    for (std::size_t i = 0; i < ny; ++i) {
        std::vector<Rat> row(nx + ny, Rat(0));
        row[nx + i] = 1;
        enc.lp.add_row(std::move(row), RowRelation::LE, Rat(1));
        enc.rows_swlp3.push_back(enc.yvars[i]);
    }
    return enc;
}

WelfareResult solve_welfare(const MarketInstance& instance) {
    MarketInstance work = as_incremental(instance);
    const auto& inc = std::get<IncrementalCfg>(work.seller);
    SwlpEncoding enc = build_swlp(work);
    LpSolution relax = solve_lp(enc.lp);
    if (relax.status != LpStatus::Optimal)
        throw AlgorithmError("solve_welfare: SWLP not optimal");
    LpSolution ip = solve_ip(enc.lp);
    if (ip.status != LpStatus::Optimal)
        throw AlgorithmError("solve_welfare: SWP not optimal");

    WelfareResult out;
    out.swlp_value = relax.value;
    out.swp_value = ip.value;
    out.integral = (relax.value == ip.value);
    if (!out.integral) return out;

    EquilibriumCertificate cert;
    const std::size_t nx = enc.xvars.size();
    cert.allocation.assign(instance.buyers.size(), PackageMultiset());
    cert.agent_assignment.resize(instance.buyers.size());
    for (std::size_t l = 0; l < instance.buyers.size(); ++l)
        cert.agent_assignment[l].assign(instance.buyers[l].unit_agents.size(),
                                        Package());
    for (std::size_t i = 0; i < nx; ++i)
        if (ip.x[i] == 1) {
            const auto& xv = enc.xvars[i];
            cert.allocation[xv.l].add(xv.s);
            cert.agent_assignment[xv.l][xv.q] = xv.s;
        }
    std::vector<int> y_totals(inc.graph.nodes().size(), 0);
    for (std::size_t i = 0; i < enc.yvars.size(); ++i) {
        const auto& yv = enc.yvars[i];
        cert.y[{yv.s.bits, yv.r}] = ip.x[nx + i];
        if (ip.x[nx + i] == 1) ++y_totals[inc.graph.node_index(yv.s)];
    }
    cert.seller_partition = characteristic(inc.graph, y_totals);
    // copies the seller supplies but no agent is matched to go to buyer 1;
    // they carry zero value and keep the allocation summing to the partition
    PackageMultiset assigned;
    for (const auto& pi : cert.allocation) assigned += pi;
    for (const auto& [s, c] : cert.seller_partition.counts()) {
        int extra = c - assigned.count(s);
        if (extra > 0 && !cert.allocation.empty()) cert.allocation[0].add(s, extra);
    }
    auto used = unpack(cert.seller_partition, work.supply.varieties());
    cert.unsold.resize(work.supply.varieties());
    for (int j = 0; j < work.supply.varieties(); ++j)
        cert.unsold[j] = work.supply.units[j] - used[j];
    for (std::size_t i = 0; i < enc.rows_swlp1.size(); ++i)
        cert.b[{enc.rows_swlp1[i].first, enc.rows_swlp1[i].second}] = relax.y[i];
    for (std::size_t i = 0; i < enc.rows_swlp2.size(); ++i)
        cert.prices[enc.rows_swlp2[i]] = relax.y[enc.rows_swlp1.size() + i];
    for (std::size_t i = 0; i < enc.rows_swlp3.size(); ++i)
        cert.d[{enc.rows_swlp3[i].s.bits, enc.rows_swlp3[i].r}] =
            relax.y[enc.rows_swlp1.size() + enc.rows_swlp2.size() + i];
    cert.welfare = ip.value;
    out.certificate = std::move(cert);
    out.has_certificate = true;
    return out;
}

EfficientAllocation efficient_allocation(const MarketInstance& instance) {
    std::vector<std::pair<int, int>> owner;
    BuyerValuation pooled = pooled_buyer(instance, owner);
    auto candidates = seller_candidates(instance);
    if (candidates.empty()) throw DomainError("no feasible partition");
    bool first = true;
    Rat best(0);
    const SellerCandidate* best_cand = nullptr;
    for (const auto& cand : candidates) {
        Rat w = to_rat(aggregate_value(pooled, cand.k).value) + to_rat(cand.offset);
        if (first || w > best) {
            best = w;
            best_cand = &cand;
            first = false;
        }
    }
    EfficientAllocation out;
    out.welfare = best;
    out.partition = best_cand->k;
    out.allocation.assign(instance.buyers.size(), PackageMultiset());
    MatchResult match = aggregate_value(pooled, best_cand->k);
    PackageMultiset assigned;
    for (std::size_t a = 0; a < match.matching.size(); ++a)
        if (!match.matching[a].empty()) {
            out.allocation[owner[a].first].add(match.matching[a]);
            assigned.add(match.matching[a]);
        }
    for (const auto& [s, c] : best_cand->k.counts()) {
        int extra = c - assigned.count(s);
        if (extra > 0 && !out.allocation.empty()) out.allocation[0].add(s, extra);
    }
    return out;
}

VerifyResult verify_equilibrium(const MarketInstance& instance, const PackagePrices& p,
                                const std::vector<PackageMultiset>& allocation) {
    if (allocation.size() != instance.buyers.size())
        throw DomainError("verify_equilibrium: one multiset per buyer required");
    PackageMultiset k;
    for (const auto& pi : allocation) k += pi;
    if (!is_feasible(k, instance.supply))
        throw DomainError("verify_equilibrium: allocation infeasible");

    auto pkgs = trade_packages(instance);
    auto price_of = [&](const PackageMultiset& m) {
        Rat total(0);
        for (const auto& [s, c] : m.counts()) {
            auto it = p.find(s);
            if (it == p.end()) throw DomainError("verify_equilibrium: missing price");
            total += it->second * to_rat(c);
        }
        return total;
    };

    VerifyResult out;
    for (std::size_t l = 0; l < instance.buyers.size(); ++l) {
        DemandResult dem = buyer_demand(instance.buyers[l], p, instance.supply, pkgs);
        Rat util =
            to_rat(aggregate_value(instance.buyers[l], allocation[l]).value) -
            price_of(allocation[l]);
        if (util != dem.utility)
            out.violations.push_back(
                "buyer " + std::to_string(l + 1) + " not in demand (utility gap " +
                rat_to_string(dem.utility - util) + ")");
    }
    DemandResult sup = seller_supply(instance.seller, p, instance.supply, pkgs);
    Rat seller_util;
    if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
        Package sold;
        for (const auto& [s, c] : k.counts()) sold = sold | s;
        seller_util =
            price_of(k) + to_rat(lookup0(rm->v0, complement(sold, instance.supply.varieties())));
    } else {
        seller_util = price_of(k) - to_rat(total_cost(instance.seller, k, instance.supply));
    }
    if (seller_util != sup.utility)
        out.violations.push_back("seller not in supply (utility gap " +
                                 rat_to_string(sup.utility - seller_util) + ")");

    if (out.violations.empty()) {
        // first welfare theorem: a supported allocation must be efficient
        Rat welfare(0);
        for (std::size_t l = 0; l < instance.buyers.size(); ++l)
            welfare += to_rat(aggregate_value(instance.buyers[l], allocation[l]).value);
        if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
            Package sold;
            for (const auto& [s, c] : k.counts()) sold = sold | s;
            welfare += to_rat(lookup0(rm->v0, complement(sold, instance.supply.varieties())));
        } else {
            welfare -= to_rat(total_cost(instance.seller, k, instance.supply));
        }
        Rat opt = efficient_allocation(instance).welfare;
        if (welfare != opt)
            out.violations.push_back("allocation not efficient (welfare " +
                                     rat_to_string(welfare) + " vs optimum " +
                                     rat_to_string(opt) + ")");
    }
    out.ok = out.violations.empty();
    return out;
}

DecompositionReport check_pricing_decomposition(const MarketInstance& instance,
                                                const EquilibriumCertificate& cert) {
    DecompositionReport rep;
    MarketInstance work = as_incremental(instance);
    const auto& inc = std::get<IncrementalCfg>(work.seller);
    const auto& nodes = inc.graph.nodes();
    const int rbar = inc.schedule.max_steps();

    auto price = [&](Package s) {
        auto it = cert.prices.find(s);
        if (it == cert.prices.end()) throw DomainError("certificate misses a price");
        return it->second;
    };
    auto dval = [&](Package s, int r) {
        auto it = cert.d.find({s.bits, r});
        return it == cert.d.end() ? Rat(0) : it->second;
    };
    auto yval = [&](Package s, int r) {
        auto it = cert.y.find({s.bits, r});
        return it == cert.y.end() ? Rat(0) : it->second;
    };
    auto fail = [&](const std::string& what) { rep.failures.push_back(what); };

    std::vector<Rat> pvec(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) pvec[i] = price(nodes[i]);
    std::vector<Rat> psi = dual_psi(inc.graph, pvec);

    // last positive step per node
    std::map<Package, int> rtilde;
    for (Package s : nodes) {
        int rt = 0;
        for (int r = 1; r <= rbar; ++r)
            if (yval(s, r) > 0) rt = r;
        rtilde[s] = rt;
    }

    // x(S,[Q],[L]) totals from the agent assignment
    std::map<Package, int> xtotal;
    for (const auto& agents : cert.agent_assignment)
        for (Package s : agents)
            if (!s.empty()) ++xtotal[s];

    // reachable-set pricing: p(S) <= sum over R+0(S) of (dc + d) at step r,
    // with equality up to the last allocated step
    for (Package s : nodes) {
        auto reach = inc.graph.reachability(s);
        for (int r = 1; r <= rbar; ++r) {
            Rat rhs(0);
            bool finite = true;
            for (Package t : reach.succ0) {
                auto dc = inc.schedule.step(t, r);
                if (!dc) {
                    finite = false;
                    break;
                }
                rhs += to_rat(*dc) + dval(t, r);
            }
            if (!finite) continue;
            if (price(s) > rhs)
                fail("pricing bound violated at node/step r=" + std::to_string(r));
            if (r <= rtilde[s] && price(s) != rhs)
                fail("pricing equality violated at allocated step r=" +
                     std::to_string(r));
        }
        // price-gain decomposition and the step bound on psi
        for (int r = 1; r <= rtilde[s]; ++r) {
            Rat tail(0);
            bool finite = true;
            for (Package t : reach.succ) {
                auto dc = inc.schedule.step(t, r);
                if (!dc) {
                    finite = false;
                    break;
                }
                tail += to_rat(*dc) + dval(t, r);
            }
            if (finite && psi[inc.graph.node_index(s)] != price(s) - tail)
                fail("psi decomposition violated at step r=" + std::to_string(r));
        }
        int rt = rtilde[s];
        if (rt >= 1) {
            auto next = inc.schedule.step(s, rt + 1);
            auto cur = inc.schedule.step(s, rt);
            if (next && cur && dval(s, rt) + to_rat(*cur) > to_rat(*next))
                fail("step bound d+dc <= dc(next) violated");
        }
    }

    // facts F1-F6
    for (Package s : nodes) {
        auto reach = inc.graph.reachability(s);
        int xsum = 0;
        for (Package t : reach.pred0) {
            auto it = xtotal.find(t);
            if (it != xtotal.end()) xsum += it->second;
        }
        Rat ysum(0);
        for (int r = 1; r <= rbar; ++r) ysum += yval(s, r);
        if (to_rat(xsum) > ysum) fail("F1 violated");
        if (price(s) > 0 && to_rat(xsum) != ysum) fail("F2 violated");
        int si = inc.graph.node_index(s);
        for (int r = 1; r <= rbar; ++r) {
            auto dc = inc.schedule.step(s, r);
            if (!dc) {
                if (yval(s, r) != 0) fail("infinite step allocated");
                continue;
            }
            if (to_rat(*dc) < psi[si] && yval(s, r) != 1) fail("F5 violated");
            if (to_rat(*dc) > psi[si] && yval(s, r) != 0) fail("F6 violated");
            // S3 / D2
            if (yval(s, r) < 1 && dval(s, r) != 0) fail("S3 violated");
            if (yval(s, r) != 0 && dval(s, r) + to_rat(*dc) != psi[si]) fail("D2 violated");
        }
        // S2: slack supply row forces a zero price
        Rat k_s(0);
        auto phi = characteristic_matrix(inc.graph);
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (phi[si][j] == 0) continue;
            Rat yj(0);
            for (int r = 1; r <= rbar; ++r) yj += yval(nodes[j], r);
            k_s += to_rat(phi[si][j]) * yj;
        }
        if (to_rat(xtotal.count(s) ? xtotal.at(s) : 0) < k_s && price(s) != 0)
            fail("S2 violated");
    }
    // F3, F4, S1, D1 per unit-demand agent
    for (std::size_t l = 0; l < work.buyers.size(); ++l) {
        for (std::size_t q = 0; q < work.buyers[l].unit_agents.size(); ++q) {
            const auto& tbl = work.buyers[l].unit_agents[q];
            Package got = cert.agent_assignment[l][q];
            auto bit = cert.b.find({static_cast<int>(l), static_cast<int>(q)});
            Rat bql = bit == cert.b.end() ? Rat(0) : bit->second;
            Rat best(0);
            for (const auto& [s, v] : tbl) {
                if (!inc.graph.has_node(s)) continue;
                Rat surplus = to_rat(v) - price(s);
                if (surplus > best) best = surplus;
            }
            for (const auto& [s, v] : tbl) {
                if (!inc.graph.has_node(s)) continue;
                Rat surplus = to_rat(v) - price(s);
                if (surplus < best && got == s) fail("F3 violated");
            }
            if (best > 0 && got.empty()) fail("F4 violated");
            if (got.empty() && bql != 0) fail("S1 violated");
            if (!got.empty()) {
                auto it = tbl.find(got);
                Rat v = it == tbl.end() ? Rat(0) : to_rat(it->second);
                if (bql != v - price(got)) fail("D1 violated");
            }
        }
    }
    return rep;
}

namespace {

struct Ineq {
    std::vector<long long> coef; // per package coordinate
    long long rhs;               // coef . p >= rhs
};

void add_ineq(std::map<std::vector<long long>, long long>& acc, std::vector<long long> c,
              long long rhs) {
    bool all_zero = std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
    if (all_zero) {
        if (rhs > 0) throw AlgorithmError("contradictory equilibrium inequality");
        return;
    }
    auto it = acc.find(c);
    if (it == acc.end())
        acc.emplace(std::move(c), rhs);
    else
        it->second = std::max(it->second, rhs);
}

} // namespace

PriceEnumeration enumerate_equilibrium_prices(const MarketInstance& instance,
                                              long long price_bound) {
    PriceEnumeration out;
    out.packages = trade_packages(instance);
    std::sort(out.packages.begin(), out.packages.end());
    const std::size_t np = out.packages.size();
    auto index_of = [&](Package s) {
        auto it = std::lower_bound(out.packages.begin(), out.packages.end(), s);
        if (it == out.packages.end() || *it != s)
            throw DomainError("allocation uses an untradeable package");
        return static_cast<std::size_t>(it - out.packages.begin());
    };

    EfficientAllocation eff = efficient_allocation(instance);
    auto counts_vec = [&](const PackageMultiset& k) {
        std::vector<long long> v(np, 0);
        for (const auto& [s, c] : k.counts()) v[index_of(s)] = c;
        return v;
    };

    std::map<std::vector<long long>, long long> acc;
    // buyers: pi(l) must maximize V - p.k over all feasible alternatives
    auto alternatives = enumerate_feasible(instance.supply, out.packages);
    for (std::size_t l = 0; l < instance.buyers.size(); ++l) {
        auto pi = counts_vec(eff.allocation[l]);
        long long vpi = aggregate_value(instance.buyers[l], eff.allocation[l]).value;
        for (const auto& kp : alternatives) {
            auto kv = counts_vec(kp);
            long long vk = aggregate_value(instance.buyers[l], kp).value;
            std::vector<long long> coef(np);
            for (std::size_t i = 0; i < np; ++i) coef[i] = kv[i] - pi[i];
            add_ineq(acc, std::move(coef), vk - vpi);
        }
    }
    // seller: the supplied partition must maximize the seller objective
    auto k_star = counts_vec(eff.partition);
    long long star_offset = 0;
    {
        auto cands = seller_candidates(instance);
        for (const auto& c : cands)
            if (c.k == eff.partition) star_offset = c.offset;
        for (const auto& c : cands) {
            auto kv = counts_vec(c.k);
            std::vector<long long> coef(np);
            for (std::size_t i = 0; i < np; ++i) coef[i] = k_star[i] - kv[i];
            add_ineq(acc, std::move(coef), c.offset - star_offset);
        }
    }
    std::vector<Ineq> ineqs;
    for (auto& [c, rhs] : acc) ineqs.push_back({c, rhs});

    // suffix of the best-case remaining contribution per inequality
    std::vector<std::vector<long long>> max_tail(ineqs.size(),
                                                 std::vector<long long>(np + 1, 0));
    for (std::size_t i = 0; i < ineqs.size(); ++i)
        for (std::size_t j = np; j-- > 0;)
            max_tail[i][j] =
                max_tail[i][j + 1] + std::max(0LL, ineqs[i].coef[j]) * price_bound;

    long long guard = price_search_guard();
    long long nodes = 0;
    std::vector<long long> partial(ineqs.size(), 0), p(np, 0);

    auto feasible_at = [&](std::size_t depth) {
        for (std::size_t i = 0; i < ineqs.size(); ++i)
            if (partial[i] + max_tail[i][depth] < ineqs[i].rhs) return false;
        return true;
    };

    std::vector<PackageMultiset> no_alloc;
    auto dfs = [&](auto&& self, std::size_t depth) -> void {
        if (++nodes > guard)
            throw ResourceError("enumerate_equilibrium_prices: search guard exceeded");
        if (!feasible_at(depth)) return;
        if (depth == np) {
            PackagePrices prices;
            for (std::size_t i = 0; i < np; ++i) prices[out.packages[i]] = to_rat(p[i]);
            if (verify_equilibrium(instance, prices, eff.allocation).ok)
                out.prices.insert(p);
            return;
        }
        for (long long v = 0; v <= price_bound; ++v) {
            p[depth] = v;
            for (std::size_t i = 0; i < ineqs.size(); ++i)
                partial[i] += ineqs[i].coef[depth] * v;
            self(self, depth + 1);
            for (std::size_t i = 0; i < ineqs.size(); ++i)
                partial[i] -= ineqs[i].coef[depth] * v;
        }
        p[depth] = 0;
    };
    dfs(dfs, 0);
    return out;
}

std::vector<long long> lexicographic_min_prices(const PriceEnumeration& e) {
    if (e.prices.empty()) throw DomainError("no equilibrium prices to select from");
    return *e.prices.begin();
}

} // namespace pakmarket
