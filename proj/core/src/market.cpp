#include "pakmarket/market.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace pakmarket {

int unit_guard() {
    if (const char* env = std::getenv("PAKMARKET_GUARD")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
    }
    return 12;
}

long long price_search_guard() {
    return static_cast<long long>(unit_guard()) * 1'000'000LL;
}

std::vector<int> members(Package s) {
    std::vector<int> out;
    for (Mask m = s.bits; m; m &= m - 1)
        out.push_back(std::countr_zero(m));
    return out;
}

std::string package_name(Package s, const std::vector<std::string>& names) {
    if (s.empty()) return "{}";
    bool single_char = true;
    for (const auto& nm : names)
        if (nm.size() != 1) single_char = false;
    std::string out;
    for (int j : members(s)) {
        if (j >= static_cast<int>(names.size()))
            throw DomainError("package_name: variety index out of range");
        if (!out.empty() && !single_char) out += "+";
        out += names[j];
    }
    return out;
}

int Supply::total() const { return std::accumulate(units.begin(), units.end(), 0); }

void PackageMultiset::add(Package s, int copies) {
    if (copies == 0) return;
    if (s.empty()) throw DomainError("PackageMultiset: empty package not storable");
    auto it = counts_.find(s);
    int next = (it == counts_.end() ? 0 : it->second) + copies;
    if (next < 0) throw DomainError("PackageMultiset: negative multiplicity");
    if (next == 0) {
        if (it != counts_.end()) counts_.erase(it);
    } else if (it == counts_.end()) {
        counts_.emplace(s, next);
    } else {
        it->second = next;
    }
}

int PackageMultiset::count(Package s) const {
    auto it = counts_.find(s);
    return it == counts_.end() ? 0 : it->second;
}

int PackageMultiset::size() const {
    int total = 0;
    for (const auto& [s, c] : counts_) total += c;
    return total;
}

PackageMultiset& PackageMultiset::operator+=(const PackageMultiset& o) {
    for (const auto& [s, c] : o.counts_) add(s, c);
    return *this;
}

PackageMultiset make_multiset(std::initializer_list<std::pair<Mask, int>> items) {
    PackageMultiset k;
    for (const auto& [m, c] : items) k.add(Package(m), c);
    return k;
}

std::vector<int> unpack(const PackageMultiset& k, int n) {
    std::vector<int> m(n, 0);
    for (const auto& [s, c] : k.counts()) {
        for (int j : members(s)) {
            if (j >= n) throw DomainError("unpack: variety outside ground set");
            m[j] += c;
        }
    }
    return m;
}

bool is_feasible(const PackageMultiset& k, const Supply& supply) {
    auto m = unpack(k, supply.varieties());
    for (int j = 0; j < supply.varieties(); ++j)
        if (m[j] > supply.units[j]) return false;
    return true;
}

namespace {

void enumerate_rec(const Supply& supply, const std::vector<Package>& packages,
                   std::size_t idx, PackageMultiset& cur, std::vector<int>& used,
                   std::vector<PackageMultiset>& out) {
    if (idx == packages.size()) {
        out.push_back(cur);
        return;
    }
    Package s = packages[idx];
    // max copies of s that still fit
    int cap = supply.total();
    for (int j : members(s))
        cap = std::min(cap, supply.units[j] - used[j]);
    for (int c = 0; c <= cap; ++c) {
        if (c > 0) {
            cur.add(s, 1);
            for (int j : members(s)) ++used[j];
        }
        enumerate_rec(supply, packages, idx + 1, cur, used, out);
    }
    if (cap > 0) {
        cur.add(s, -cap);
        for (int j : members(s)) used[j] -= cap;
    }
}

} // namespace

std::vector<PackageMultiset> enumerate_feasible(const Supply& supply,
                                                const std::vector<Package>& packages) {
    if (supply.total() > unit_guard())
        throw ResourceError("enumerate_feasible: total supply exceeds guard");
    for (Package s : packages)
        if (!s.subset_of(supply.ground_set()))
            throw DomainError("enumerate_feasible: package outside ground set");
    std::vector<Package> sorted = packages;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<PackageMultiset> out;
    PackageMultiset cur;
    std::vector<int> used(supply.varieties(), 0);
    enumerate_rec(supply, sorted, 0, cur, used, out);
    return out;
}

std::vector<Package> all_packages(int n) {
    if (n < 1 || n > kMaxVarieties) throw DomainError("all_packages: n out of range");
    std::vector<Package> out;
    out.reserve((std::size_t{1} << n) - 1);
    for (Mask m = 1; m < (Mask{1} << n); ++m) out.push_back(Package(m));
    return out;
}

} // namespace pakmarket
