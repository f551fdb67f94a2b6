#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pakmarket/errors.hpp"

namespace pakmarket {

/// Bitmask over the variety ground set N = {0, ..., n-1}.
using Mask = std::uint32_t;

constexpr int kMaxVarieties = 24;

/// A package: a subset of N, at most one unit of each variety. The canonical
/// order of packages is the unsigned integer order of the mask.
struct Package {
    Mask bits = 0;

    constexpr Package() = default;
    constexpr explicit Package(Mask m) : bits(m) {}

    constexpr bool empty() const { return bits == 0; }
    constexpr int size() const { return std::popcount(bits); }
    constexpr bool contains(int variety) const { return (bits >> variety) & 1u; }
    constexpr bool subset_of(Package o) const { return (bits & ~o.bits) == 0; }
    constexpr bool strict_subset_of(Package o) const {
        return subset_of(o) && bits != o.bits;
    }
    constexpr bool disjoint_with(Package o) const { return (bits & o.bits) == 0; }

    friend constexpr Package operator|(Package a, Package b) {
        return Package(a.bits | b.bits);
    }
    friend constexpr Package operator&(Package a, Package b) {
        return Package(a.bits & b.bits);
    }
    auto operator<=>(const Package&) const = default;
};

constexpr Package singleton(int variety) { return Package(Mask{1} << variety); }
constexpr Package full_package(int n) { return Package((Mask{1} << n) - 1); }

/// Members of a package as ascending variety indices.
std::vector<int> members(Package s);

/// Complement within an n-variety ground set.
constexpr Package complement(Package s, int n) {
    return Package(~s.bits & full_package(n).bits);
}

/// Render a package with the given variety names ("AB", "x+y", "{}").
std::string package_name(Package s, const std::vector<std::string>& names);

/// Units available per variety.
struct Supply {
    std::vector<int> units;

    int varieties() const { return static_cast<int>(units.size()); }
    int total() const;
    Package ground_set() const { return full_package(varieties()); }
};

/// Multiplicity vector over packages (an anonymous partition of supply, or a
/// buyer's received collection). Zero counts are never stored.
class PackageMultiset {
public:
    PackageMultiset() = default;

    void add(Package s, int copies = 1);
    int count(Package s) const;
    /// Total number of packages, |k|.
    int size() const;
    bool empty() const { return counts_.empty(); }

    const std::map<Package, int>& counts() const { return counts_; }

    PackageMultiset& operator+=(const PackageMultiset& o);
    friend PackageMultiset operator+(PackageMultiset a, const PackageMultiset& b) {
        a += b;
        return a;
    }
    bool operator==(const PackageMultiset& o) const = default;
    bool operator<(const PackageMultiset& o) const { return counts_ < o.counts_; }

private:
    std::map<Package, int> counts_;
};

/// Multiset literal, e.g. pkgs({{0b11, 1}, {0b01, 2}}).
PackageMultiset make_multiset(std::initializer_list<std::pair<Mask, int>> items);

/// Unpacking: per-variety unit counts of a package multiset.
std::vector<int> unpack(const PackageMultiset& k, int n);

/// True iff unpack(k) <= supply componentwise. Throws DomainError when k
/// references a variety outside the supply's ground set.
bool is_feasible(const PackageMultiset& k, const Supply& supply);

/// Exhaustive list of all feasible multisets over the given package set, in a
/// deterministic order. Guarded by the total-unit limit (ResourceError).
std::vector<PackageMultiset> enumerate_feasible(const Supply& supply,
                                                const std::vector<Package>& packages);

/// Canonical list of all nonempty subsets of an n-variety ground set.
std::vector<Package> all_packages(int n);

} // namespace pakmarket
