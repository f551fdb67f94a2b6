#pragma once

#include <string>
#include <vector>

#include "pakmarket/auction.hpp"
#include "pakmarket/preferences.hpp"
#include "pakmarket/welfare.hpp"

namespace pakmarket {

/// Parses a JSON market document into a validated instance. Floats are
/// rejected; schema errors carry the JSON path, validation errors the violated
/// clause.
MarketInstance parse_market(const std::string& text);

/// Inverse of parse_market; parse(serialize(x)) == x.
std::string serialize_market(const MarketInstance& instance);

/// "A", "AB" (single-character names) or "A+B"; "{}" is the empty package.
Package parse_package_name(const std::string& text,
                           const std::vector<std::string>& names);

std::string certificate_to_json(const MarketInstance& instance,
                                const WelfareResult& result);
std::string auction_to_json(const MarketInstance& instance, const AuctionOutcome& out,
                            bool include_trace);

/// Inline JSON object {"A": 4, "AB": 9, ...} -> price map.
PackagePrices parse_prices_json(const std::string& text,
                                const std::vector<std::string>& names);

/// Inline JSON object {"buyer name": ["A", "AB"], ...} -> one multiset per
/// buyer of the instance (missing buyers receive nothing).
std::vector<PackageMultiset> parse_allocation_json(const MarketInstance& instance,
                                                   const std::string& text);

} // namespace pakmarket
