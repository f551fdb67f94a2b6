#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pakmarket/cfg.hpp"
#include "pakmarket/market.hpp"
#include "pakmarket/rational.hpp"

namespace pakmarket {

/// Nondecreasing incremental cost steps per package node; steps beyond the
/// list are infeasible (+inf). Singleton schedules are truncated at supply.
struct IncrementalCostSchedule {
    std::map<Package, std::vector<long long>> steps;

    int max_steps() const; // R-bar over all packages
    /// Step r (1-based). nullopt past the end of the list (= +inf).
    std::optional<long long> step(Package s, int r) const;
};

struct IncrementalCfg {
    CostFunctionGraph graph;
    IncrementalCostSchedule schedule;
};

struct AdditiveMarginal {
    std::map<Package, long long> c0; // c0(empty)=0 implied
};

struct SetUnion {
    std::map<Package, long long> c0;
};

struct RevenueMax {
    std::map<Package, long long> v0; // reserve value of keeping S unsold
};

using SellerModel = std::variant<AdditiveMarginal, SetUnion, RevenueMax, IncrementalCfg>;

/// Unit-demand agents of one buyer; agent q values package S at
/// unit_agents[q][S] (absent = 0).
struct BuyerValuation {
    std::string name;
    std::vector<std::map<Package, long long>> unit_agents;
};

struct MarketInstance {
    Supply supply;
    std::vector<std::string> variety_names;
    SellerModel seller;
    std::vector<BuyerValuation> buyers;
    /// Packages the market trades (price grid / auction universe). Defaults to
    /// every package referenced by a valuation or cost schedule.
    std::vector<Package> packages;
};

long long lookup0(const std::map<Package, long long>& table, Package s);

/// Seller's cost of a partition. RevenueMax has no cost semantics
/// (UnsupportedError); SetUnion requires disjoint packages; an IncrementalCfg
/// step past the schedule end is an infeasible partition (DomainError).
long long total_cost(const SellerModel& seller, const PackageMultiset& k,
                     const Supply& supply);

struct MatchResult {
    long long value = 0;
    /// matching[q] = package assigned to agent q (empty package = unmatched).
    std::vector<Package> matching;
};

/// Max-weight matching of the copies in k to the buyer's unit-demand agents.
MatchResult aggregate_value(const BuyerValuation& buyer, const PackageMultiset& k);

using PackagePrices = std::map<Package, Rat>;

struct DemandResult {
    std::vector<PackageMultiset> argmax;
    Rat utility; // indirect utility at p
};

/// All feasible multisets over instance.packages maximizing V^l(k) - p.k.
DemandResult buyer_demand(const BuyerValuation& buyer, const PackagePrices& p,
                          const Supply& supply, const std::vector<Package>& packages);

/// All feasible multisets maximizing p.k - C0(k); for RevenueMax, all
/// partitions of N maximizing sold revenue plus reserve value of the rest.
DemandResult seller_supply(const SellerModel& seller, const PackagePrices& p,
                           const Supply& supply, const std::vector<Package>& packages);

/// Full-table super/subadditivity over disjoint pairs.
bool check_superadditive(const std::map<Package, long long>& v, int n);
bool check_subadditive(const std::map<Package, long long>& c, int n);

/// Packages referenced anywhere in the instance, canonical order.
std::vector<Package> referenced_packages(const MarketInstance& instance);

/// Load-time validation: Assumption 1 monotonicity and exhaustive C0 >= 0.
void validate_instance(const MarketInstance& instance);

/// Splits one variety with supply >= 2 into distinct labels (Appendix-style
/// relabeling); buyer values copied symmetrically, incremental costs split
/// step-by-step, unmapped label combinations left infeasible.
MarketInstance relabel_identical(const MarketInstance& instance, int variety);

} // namespace pakmarket
