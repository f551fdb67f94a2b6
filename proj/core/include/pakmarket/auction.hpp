#pragma once

#include <map>
#include <string>
#include <vector>

#include "pakmarket/preferences.hpp"
#include "pakmarket/welfare.hpp"

namespace pakmarket {

struct AuctionRound {
    int t = 0;
    std::map<Package, long long> prices;  // p(t, S) at the start of the round
    std::vector<Package> demands;         // per buyer; empty package = no demand
    PackageMultiset supply;               // seller's chosen partition
    std::vector<Package> overdemanded;
};

struct AuctionOutcome {
    std::vector<AuctionRound> trace;
    std::map<Package, long long> prices;     // final p*
    std::vector<PackageMultiset> allocation; // per (real) buyer
    PackageMultiset sold;
    PackageMultiset retained;                // squeezed-out kept by the seller
    std::vector<std::string> warnings;
    int rounds = 0;
};

/// Ascending auction: single unit per variety, one unit-demand agent per
/// buyer. Reserve prices come from the seller model (costs, or reserve values
/// for the revenue seller). Precondition violations (superadditive values,
/// subadditive costs) are reported as warnings, not errors; the run proceeds
/// but need not end in an equilibrium.
///
/// Tie-breaks, fixed for reproducible traces: a buyer demands the empty set
/// whenever it is optimal, otherwise the smallest canonical package among the
/// optima; the seller picks, among optimal partitions, the one selling the
/// most units, then with the fewest packages, then lexicographically smallest.
/// A squeezed-out package at reserve price stays with the seller; otherwise it
/// goes to the buyer who demanded it last (highest round, then lowest index),
/// merged into that buyer's package by set union.
AuctionOutcome run_ascending_auction(const MarketInstance& instance);

/// Full table over 2^N with f(empty)=0 implied.
struct SetFunction {
    int n = 0;
    std::map<Package, long long> table;

    long long at(Package s) const;
};

/// g(f, S) = f(N) - f(complement of S); an involution.
SetFunction set_function_dual(const SetFunction& f);

/// Submodularity restricted to pairs whose union covers N.
bool is_set_cover_submodular(const SetFunction& f);
bool is_set_cover_supermodular(const SetFunction& f);

/// Converts a revenue maximizer's reserve values into a utility maximizer's
/// set-union costs (the set function dual); the argmax correspondences of the
/// two seller objectives coincide at every price vector.
SetUnion revenue_to_cost(const SetFunction& v0);

/// Extended ascending auction: the RevenueMax seller surrenders supply; each
/// package S is represented by two dummy buyers valuing any B containing S at
/// v0(S). The clock starts one round early at p(-1,S) = v0(S) - 1 with only
/// the dummies bidding, which lifts every price to v0 by round 0. The
/// auctioneer supplies against the marginal costs c_aux. Squeezed-out packages
/// whose last demand came from a dummy return to the seller.
AuctionOutcome run_extended_ascending_auction(const MarketInstance& instance,
                                              const std::map<Package, long long>& c_aux);

} // namespace pakmarket
