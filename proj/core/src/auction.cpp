#include "pakmarket/auction.hpp"

#include <algorithm>
#include <limits>

namespace pakmarket {

namespace {

std::map<Package, long long> reserve_prices(const SellerModel& seller) {
    if (const auto* add = std::get_if<AdditiveMarginal>(&seller)) return add->c0;
    if (const auto* su = std::get_if<SetUnion>(&seller)) return su->c0;
    if (const auto* rm = std::get_if<RevenueMax>(&seller)) return rm->v0;
    throw UnsupportedError("ascending auction requires a table-based seller model");
}

long long buyer_value(const BuyerValuation& buyer, Package s) {
    const auto& tbl = buyer.unit_agents[0];
    auto it = tbl.find(s);
    return it == tbl.end() ? 0 : it->second;
}

/// Straightforward bid of a single unit-demand agent: empty when optimal,
/// else the smallest canonical package among the surplus maximizers.
Package straightforward_bid(const BuyerValuation& buyer,
                            const std::map<Package, long long>& p,
                            const std::vector<Package>& packages) {
    long long best = 0;
    Package pick;
    for (Package s : packages) {
        long long surplus = buyer_value(buyer, s) - p.at(s);
        if (surplus > best) {
            best = surplus;
            pick = s;
        }
    }
    return pick; // empty when no strictly positive surplus exists
}

/// Seller's partition at current prices: an argmax of the supply
/// correspondence, tie-broken by most units sold, fewest packages,
/// lexicographically smallest sorted package list.
PackageMultiset pick_supply(const SellerModel& seller,
                            const std::map<Package, long long>& p, const Supply& supply,
                            const std::vector<Package>& packages) {
    PackagePrices rp;
    for (const auto& [s, v] : p) rp[s] = to_rat(v);
    DemandResult res = seller_supply(seller, rp, supply, packages);
    auto key = [](const PackageMultiset& k) {
        int units = 0, count = 0;
        std::vector<Mask> sorted;
        for (const auto& [s, c] : k.counts()) {
            units += s.size() * c;
            count += c;
            for (int i = 0; i < c; ++i) sorted.push_back(s.bits);
        }
        std::sort(sorted.begin(), sorted.end());
        return std::tuple<int, int, std::vector<Mask>>(-units, count, sorted);
    };
    const PackageMultiset* best = nullptr;
    for (const auto& k : res.argmax)
        if (!best || key(k) < key(*best)) best = &k;
    if (!best) throw AlgorithmError("seller supply correspondence empty");
    return *best;
}

struct EngineConfig {
    std::vector<BuyerValuation> buyers; // dummies first when present
    int n_dummies = 0;
    std::vector<Package> dummy_bids;    // round -1 bid per dummy
    SellerModel seller;                 // supply-side objective
    std::map<Package, long long> start_prices;
    int t_start = 0;
    std::map<Package, long long> reserve; // squeeze-out comparison level
};

AuctionOutcome run_engine(const EngineConfig& cfg, const Supply& supply,
                          const std::vector<Package>& packages,
                          std::vector<std::string> warnings) {
    AuctionOutcome out;
    out.warnings = std::move(warnings);
    std::map<Package, long long> p = cfg.start_prices;

    long long guard = 1;
    for (Package s : packages) {
        long long vmax = 0;
        for (const auto& b : cfg.buyers) vmax = std::max(vmax, buyer_value(b, s));
        guard += std::max(0LL, vmax - cfg.start_prices.at(s));
    }

    const int nb = static_cast<int>(cfg.buyers.size());
    // last round in which each buyer demanded each package
    std::map<Package, std::vector<int>> last_demand_round;
    for (Package s : packages)
        last_demand_round[s].assign(nb, std::numeric_limits<int>::min());

    std::vector<Package> demands(nb);
    PackageMultiset k;
    int t = cfg.t_start;
    for (;; ++t) {
        if (t - cfg.t_start > guard)
            throw AlgorithmError("ascending auction exceeded its termination bound");
        for (int l = 0; l < nb; ++l) {
            if (l < cfg.n_dummies)
                demands[l] = (t == -1) ? cfg.dummy_bids[l] : Package();
            else if (t == -1)
                demands[l] = Package(); // only dummies bid in the lifted round
            else
                demands[l] = straightforward_bid(cfg.buyers[l], p, packages);
            if (!demands[l].empty()) last_demand_round[demands[l]][l] = t;
        }
        k = pick_supply(cfg.seller, p, supply, packages);

        std::map<Package, int> kd;
        for (Package s : demands)
            if (!s.empty()) ++kd[s];
        std::vector<Package> over;
        for (const auto& [s, c] : kd)
            if (c > k.count(s)) over.push_back(s);

        out.trace.push_back({t, p, demands, k, over});
        if (over.empty()) break;
        for (Package s : over) ++p[s];
    }
    out.rounds = static_cast<int>(out.trace.size());
    out.prices = p;

    // terminal assignment: every demander is served, then resolve the
    // squeezed-out remainder of the supply
    const int n_real = nb - cfg.n_dummies;
    out.allocation.assign(n_real, PackageMultiset());
    std::vector<Package> bundle(nb); // union package per buyer (incl. dummies)
    PackageMultiset leftovers = k;
    for (int l = 0; l < nb; ++l)
        if (!demands[l].empty()) {
            bundle[l] = demands[l];
            if (leftovers.count(demands[l]) > 0) leftovers.add(demands[l], -1);
        }
    for (const auto& [s, c] : leftovers.counts()) {
        for (int copy = 0; copy < c; ++copy) {
            if (p.at(s) == cfg.reserve.at(s)) {
                out.retained.add(s);
                continue;
            }
            int who = -1;
            const auto& rounds = last_demand_round[s];
            for (int l = 0; l < nb; ++l)
                if (rounds[l] > std::numeric_limits<int>::min() &&
                    (who < 0 || rounds[l] > rounds[who]))
                    who = l;
            if (who < 0) {
                out.warnings.push_back("squeezed-out package above reserve was never "
                                       "demanded; returned to seller");
                out.retained.add(s);
                continue;
            }
            if (who < cfg.n_dummies) {
                out.retained.add(s); // a dummy buy-back keeps it with the seller
                continue;
            }
            Package merged = bundle[who] | s;
            auto it = p.find(merged);
            long long lin = p.at(s) + (bundle[who].empty() ? 0 : p.at(bundle[who]));
            if (it == p.end()) {
                p[merged] = lin;
                out.prices[merged] = lin;
            } else if (it->second != lin) {
                out.warnings.push_back(
                    "price of a merged squeezed-out package is not the sum of its "
                    "parts");
            }
            bundle[who] = merged;
        }
    }
    for (int l = cfg.n_dummies; l < nb; ++l)
        if (!bundle[l].empty()) out.allocation[l - cfg.n_dummies].add(bundle[l]);
    for (const auto& pi : out.allocation) out.sold += pi;
    return out;
}

std::vector<std::string> precondition_warnings(const MarketInstance& instance) {
    std::vector<std::string> warnings;
    const int n = instance.supply.varieties();
    for (int u : instance.supply.units)
        if (u != 1) throw UnsupportedError("ascending auction needs one unit per variety");
    for (const auto& b : instance.buyers) {
        if (b.unit_agents.size() != 1)
            throw UnsupportedError(
                "ascending auction needs a single unit-demand agent per buyer");
        if (!check_superadditive(b.unit_agents[0], n))
            warnings.push_back("buyer " + b.name +
                               " values are not superadditive; equilibrium "
                               "termination is not guaranteed");
    }
    if (const auto* add = std::get_if<AdditiveMarginal>(&instance.seller)) {
        if (!check_subadditive(add->c0, n))
            warnings.push_back("marginal costs are not subadditive; equilibrium "
                               "termination is not guaranteed");
    } else if (const auto* su = std::get_if<SetUnion>(&instance.seller)) {
        if (!check_subadditive(su->c0, n))
            warnings.push_back("set-union costs are not subadditive; equilibrium "
                               "termination is not guaranteed");
    } else if (const auto* rm = std::get_if<RevenueMax>(&instance.seller)) {
        if (!check_superadditive(rm->v0, n))
            warnings.push_back("reserve values are not superadditive; equilibrium "
                               "termination is not guaranteed");
    }
    return warnings;
}

} // namespace

AuctionOutcome run_ascending_auction(const MarketInstance& instance) {
    auto warnings = precondition_warnings(instance);
    EngineConfig cfg;
    cfg.buyers = instance.buyers;
    cfg.seller = instance.seller;
    cfg.start_prices = reserve_prices(instance.seller);
    cfg.reserve = cfg.start_prices;
    cfg.t_start = 0;
    std::vector<Package> packages;
    for (const auto& [s, v] : cfg.start_prices) packages.push_back(s);
    return run_engine(cfg, instance.supply, packages, std::move(warnings));
}

long long SetFunction::at(Package s) const {
    if (s.empty()) return 0;
    auto it = table.find(s);
    if (it == table.end()) throw DomainError("set function table is incomplete");
    return it->second;
}

SetFunction set_function_dual(const SetFunction& f) {
    SetFunction g;
    g.n = f.n;
    Package full = full_package(f.n);
    for (Package s : all_packages(f.n))
        g.table[s] = f.at(full) - f.at(complement(s, f.n));
    return g;
}

namespace {

bool set_cover_check(const SetFunction& f, bool submodular) {
    Package full = full_package(f.n);
    Mask lim = Mask{1} << f.n;
    for (Mask a = 0; a < lim; ++a)
        for (Mask b = 0; b < lim; ++b) {
            if ((a | b) != full.bits) continue;
            long long lhs = f.at(Package(a)) + f.at(Package(b));
            long long rhs = f.at(full) + f.at(Package(a & b));
            if (submodular ? lhs < rhs : lhs > rhs) return false;
        }
    return true;
}

} // namespace

bool is_set_cover_submodular(const SetFunction& f) { return set_cover_check(f, true); }
bool is_set_cover_supermodular(const SetFunction& f) { return set_cover_check(f, false); }

SetUnion revenue_to_cost(const SetFunction& v0) {
    return SetUnion{set_function_dual(v0).table};
}

AuctionOutcome run_extended_ascending_auction(const MarketInstance& instance,
                                              const std::map<Package, long long>& c_aux) {
    const auto* rm = std::get_if<RevenueMax>(&instance.seller);
    if (!rm)
        throw UnsupportedError("extended auction requires a RevenueMax seller");
    auto warnings = precondition_warnings(instance);

    EngineConfig cfg;
    cfg.t_start = -1;
    for (const auto& [s, v] : rm->v0) {
        // two instances of each dummy; any B containing S is worth v0(S)
        BuyerValuation dummy;
        std::map<Package, long long> tbl;
        for (const auto& [b, x] : c_aux)
            if (s.subset_of(b)) tbl[b] = v;
        dummy.unit_agents.push_back(tbl);
        for (int copy = 1; copy <= 2; ++copy) {
            dummy.name = "dummy-" + std::to_string(s.bits) + "-" + std::to_string(copy);
            cfg.buyers.push_back(dummy);
            cfg.dummy_bids.push_back(s);
        }
    }
    cfg.n_dummies = static_cast<int>(cfg.buyers.size());
    for (const auto& b : instance.buyers) cfg.buyers.push_back(b);

    cfg.seller = AdditiveMarginal{c_aux};
    std::vector<Package> packages;
    for (const auto& [s, c] : c_aux) packages.push_back(s);
    for (Package s : packages) {
        auto it = rm->v0.find(s);
        long long v = it == rm->v0.end() ? 0 : it->second;
        cfg.start_prices[s] = v - 1;
        cfg.reserve[s] = v; // the lifted round brings every price to v0
    }
    return run_engine(cfg, instance.supply, packages, std::move(warnings));
}

} // namespace pakmarket
