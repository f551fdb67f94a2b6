#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pakmarket/lp.hpp"
#include "pakmarket/preferences.hpp"

namespace pakmarket {

/// SWLP in solver form plus the index maps back to (S,q,l) / (S,r) variables
/// and the three row families.
struct SwlpEncoding {
    LinearProgram lp;
    struct XVar {
        Package s;
        int q; // agent index within buyer, 0-based
        int l; // buyer index, 0-based
    };
    struct YVar {
        Package s;
        int r; // step, 1-based
    };
    std::vector<XVar> xvars;
    std::vector<YVar> yvars;
    std::vector<std::pair<int, int>> rows_swlp1; // (l, q) per row
    std::vector<Package> rows_swlp2;             // S per row
    std::vector<YVar> rows_swlp3;                // (S, r) per row
    int rbar = 0;
};

struct EquilibriumCertificate {
    PackagePrices prices;                          // per graph node
    std::vector<PackageMultiset> allocation;       // pi(l) per buyer
    std::vector<std::vector<Package>> agent_assignment; // [l][q], empty = none
    PackageMultiset seller_partition;              // sum over buyers
    std::vector<int> unsold;                       // pi(0), per-variety units
    std::map<std::pair<int, int>, Rat> b;          // (l, q) -> buyer surplus
    std::map<std::pair<Mask, int>, Rat> d;         // (S.bits, r) -> seller surplus
    std::map<std::pair<Mask, int>, Rat> y;         // primal y(S,r)
    Rat welfare;
};

/// Builds the SWLP for an IncrementalCfg seller (UnsupportedError otherwise).
SwlpEncoding build_swlp(const MarketInstance& instance);

/// Converts an AdditiveMarginal seller into an equivalent IncrementalCfg:
/// singleton schedules carry c0({j}) for Omega_j steps; package nodes arc to
/// their member singletons and carry the bundling delta for min_j Omega_j steps.
IncrementalCfg additive_to_cfg(const AdditiveMarginal& seller, const Supply& supply,
                               const std::vector<Package>& packages);

/// Instance with the seller rewritten as an IncrementalCfg (identity when it
/// already is one; UnsupportedError for SetUnion/RevenueMax sellers).
MarketInstance as_incremental(const MarketInstance& instance);

struct WelfareResult {
    Rat swp_value;
    Rat swlp_value;
    bool integral = false;
    bool has_certificate = false;
    EquilibriumCertificate certificate;
};

/// Solves SWP and SWLP exactly; builds a certificate from an integral optimum
/// and the LP duals when the values coincide (Thm: equilibrium existence).
WelfareResult solve_welfare(const MarketInstance& instance);

struct VerifyResult {
    bool ok = false;
    std::vector<std::string> violations;
};

/// Independent brute-force equilibrium check: every buyer's assignment lies in
/// their demand correspondence and the combined partition in the seller's
/// supply correspondence; when ok, also asserts the allocation is efficient.
VerifyResult verify_equilibrium(const MarketInstance& instance, const PackagePrices& p,
                                const std::vector<PackageMultiset>& allocation);

struct EfficientAllocation {
    Rat welfare;
    std::vector<PackageMultiset> allocation; // per buyer
    PackageMultiset partition;               // what the seller sells
};

/// Brute-force welfare maximum over the feasible universe (pooled matching of
/// the partition's copies against all unit-demand agents); deterministic
/// representative allocation.
EfficientAllocation efficient_allocation(const MarketInstance& instance);

struct DecompositionReport {
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Exact checks of the dual price structure on an integral certificate:
/// the reachable-set pricing identity, the psi price-gain decomposition and
/// step bound, facts F1-F6, and complementary slackness S1-S3 / D1-D2.
DecompositionReport check_pricing_decomposition(const MarketInstance& instance,
                                                const EquilibriumCertificate& cert);

struct PriceEnumeration {
    std::vector<Package> packages;          // coordinate order
    std::set<std::vector<long long>> prices; // all integer equilibrium vectors
};

/// All integer price vectors in [0, bound]^packages supporting an efficient
/// allocation as an equilibrium. DFS with interval pruning over the exact
/// equilibrium inequalities; every candidate re-verified by brute force.
PriceEnumeration enumerate_equilibrium_prices(const MarketInstance& instance,
                                              long long price_bound);

/// Lexicographically smallest enumerated vector (DomainError when empty).
std::vector<long long> lexicographic_min_prices(const PriceEnumeration& e);

} // namespace pakmarket
