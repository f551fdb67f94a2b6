#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace pakmarket;
using namespace pakmarket::testing;

namespace {

const Package A(0b01), B(0b10), AB(0b11);

std::map<Package, long long> price_row(long long a, long long b, long long ab) {
    return {{A, a}, {B, b}, {AB, ab}};
}

std::vector<Package> demand_row(std::initializer_list<Mask> masks) {
    std::vector<Package> out;
    for (Mask m : masks) out.emplace_back(m);
    return out;
}

void check_round(const AuctionRound& round, int t,
                 const std::map<Package, long long>& prices,
                 const std::vector<Package>& demands, const PackageMultiset& supply,
                 const std::vector<Package>& overdemanded) {
    CHECK(round.t == t);
    CHECK(round.prices == prices);
    CHECK(round.demands == demands);
    CHECK(round.supply == supply);
    CHECK(round.overdemanded == overdemanded);
}

PackagePrices to_prices(const std::map<Package, long long>& p) {
    PackagePrices out;
    for (const auto& [s, v] : p) out[s] = to_rat(v);
    return out;
}

long long outcome_buyer_value(const MarketInstance& inst, const AuctionOutcome& out) {
    long long total = 0;
    for (std::size_t l = 0; l < inst.buyers.size(); ++l)
        total += aggregate_value(inst.buyers[l], out.allocation[l]).value;
    return total;
}

} // namespace

TEST_CASE("golden trace: revenue seller sells the items separately") {
    auto inst = six_buyers_revenue();
    auto out = run_ascending_auction(inst);
    REQUIRE(out.rounds == 4);
    check_round(out.trace[0], 0, price_row(2, 4, 8),
                demand_row({0b01, 0b01, 0b10, 0b10, 0b11, 0b11}),
                make_multiset({{0b11, 1}}), {A, B, AB});
    check_round(out.trace[1], 1, price_row(3, 5, 9),
                demand_row({0b01, 0b01, 0b10, 0b10, 0b11, 0b11}),
                make_multiset({{0b11, 1}}), {A, B, AB});
    check_round(out.trace[2], 2, price_row(4, 6, 10),
                demand_row({0b01, 0b01, 0b10, 0b10, 0b11, 0b11}),
                make_multiset({{0b11, 1}}), {A, B, AB});
    check_round(out.trace[3], 3, price_row(5, 7, 11),
                demand_row({0, 0, 0, 0, 0, 0}),
                make_multiset({{0b01, 1}, {0b10, 1}}), {});
    CHECK(out.prices == price_row(5, 7, 11));
    // squeezed-out A and B go to the buyers who demanded them last
    CHECK(out.allocation[0] == make_multiset({{0b01, 1}})); // L1 gets A
    CHECK(out.allocation[2] == make_multiset({{0b10, 1}})); // L3 gets B
    CHECK(out.retained.empty());
    CHECK(out.sold == make_multiset({{0b01, 1}, {0b10, 1}}));
    CHECK(out.warnings.empty());
}

TEST_CASE("golden trace: marginal-cost seller sells the bundle") {
    auto inst = six_buyers_costs();
    auto out = run_ascending_auction(inst);
    REQUIRE(out.rounds == 4);
    check_round(out.trace[0], 0, price_row(4, 6, 8),
                demand_row({0b01, 0b01, 0b10, 0b10, 0b11, 0b11}),
                make_multiset({{0b11, 1}}), {A, B, AB});
    check_round(out.trace[1], 1, price_row(5, 7, 9),
                demand_row({0, 0, 0, 0, 0b11, 0b11}),
                make_multiset({{0b01, 1}, {0b10, 1}}), {AB});
    check_round(out.trace[2], 2, price_row(5, 7, 10),
                demand_row({0, 0, 0, 0, 0b11, 0b11}),
                make_multiset({{0b11, 1}}), {AB});
    check_round(out.trace[3], 3, price_row(5, 7, 11),
                demand_row({0, 0, 0, 0, 0, 0}),
                make_multiset({{0b11, 1}}), {});
    CHECK(out.prices == price_row(5, 7, 11));
    CHECK(out.allocation[4] == make_multiset({{0b11, 1}})); // L5 gets AB
    CHECK(out.retained.empty());
    CHECK(out.warnings.empty());
}

TEST_CASE("both golden outcomes are equilibria of their instances") {
    for (auto inst : {six_buyers_revenue(), six_buyers_costs()}) {
        auto out = run_ascending_auction(inst);
        auto v = verify_equilibrium(inst, to_prices(out.prices), out.allocation);
        for (const auto& msg : v.violations) MESSAGE(msg);
        CHECK(v.ok);
    }
}

TEST_CASE("set-function dual: three-good table and its involution") {
    SetFunction v;
    v.n = 3;
    v.table = {{Package(0b001), 1}, {Package(0b010), 2}, {Package(0b100), 0},
               {Package(0b011), 4}, {Package(0b101), 2}, {Package(0b110), 2},
               {Package(0b111), 4}};
    SetFunction c = set_function_dual(v);
    std::map<Package, long long> expected{
        {Package(0b001), 2}, {Package(0b010), 2}, {Package(0b100), 0},
        {Package(0b011), 4}, {Package(0b101), 2}, {Package(0b110), 3},
        {Package(0b111), 4}};
    CHECK(c.table == expected);
    CHECK(set_function_dual(c).table == v.table); // involution
    // the dual is set-cover submodular even though it is not subadditive
    // (c(B) + c(C) = 2 < c(BC) = 3) -- the notions are incomparable
    CHECK(is_set_cover_submodular(c));
    CHECK_FALSE(check_subadditive(c.table, 3));
    // and the primal need not be set-cover supermodular despite being
    // superadditive: v(AB) + v(AC) = 6 > v(ABC) + v(A) = 5
    CHECK_FALSE(is_set_cover_supermodular(v));
}

TEST_CASE("set-function dual: reserve values of the six-buyer market") {
    SetFunction v0;
    v0.n = 2;
    v0.table = {{A, 2}, {B, 4}, {AB, 8}};
    SetUnion dual = revenue_to_cost(v0);
    CHECK(dual.c0 == std::map<Package, long long>{{A, 4}, {B, 6}, {AB, 8}});
}

TEST_CASE("dual of a superadditive function is set-cover submodular") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 120; ++trial) {
        SetFunction f;
        f.n = 3;
        f.table = random_superadditive(rng, 3);
        auto g = set_function_dual(f);
        CHECK(is_set_cover_submodular(g));
        CHECK(set_function_dual(g).table == f.table);

        // mirror: the dual of a subadditive function is set-cover supermodular
        SetFunction sub;
        sub.n = 3;
        sub.table = random_subadditive(rng, 3);
        CHECK(is_set_cover_supermodular(set_function_dual(sub)));
    }
}

TEST_CASE("revenue seller and its dual cost seller supply the same partitions") {
    auto rev = six_buyers_revenue();
    SetFunction v0;
    v0.n = 2;
    v0.table = std::get<RevenueMax>(rev.seller).v0;
    SellerModel dual{revenue_to_cost(v0)};
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> dist(0, 12);
    for (int trial = 0; trial < 60; ++trial) {
        PackagePrices p{{A, Rat(dist(rng))}, {B, Rat(dist(rng))}, {AB, Rat(dist(rng))}};
        auto a = seller_supply(rev.seller, p, rev.supply, rev.packages);
        auto b = seller_supply(dual, p, rev.supply, rev.packages);
        std::set<PackageMultiset> sa(a.argmax.begin(), a.argmax.end());
        std::set<PackageMultiset> sb(b.argmax.begin(), b.argmax.end());
        CHECK(sa == sb);
        CHECK(a.utility - b.utility == Rat(8)); // constant offset v0(N)
    }
}

TEST_CASE("extended auction matches the dual-cost ascending auction") {
    auto inst = six_buyers_revenue();
    auto out = run_extended_ascending_auction(
        inst, {{A, 4}, {B, 6}, {AB, 8}});
    CHECK(out.prices == price_row(5, 7, 11));
    CHECK(out.allocation[4] == make_multiset({{0b11, 1}})); // L5 gets AB
    CHECK(out.sold == make_multiset({{0b11, 1}}));
    // first trace row is the dummy lift at t = -1
    REQUIRE(!out.trace.empty());
    CHECK(out.trace.front().t == -1);
}

TEST_CASE("extended auction with zero costs maximizes buyer welfare") {
    auto inst = six_buyers_revenue();
    auto out = run_extended_ascending_auction(inst, {{A, 0}, {B, 0}, {AB, 0}});
    // Sun-Yang style welfare: best assignment of the goods to buyers
    MarketInstance zero = inst;
    std::map<Package, long long> zc{{A, 0}, {B, 0}, {AB, 0}};
    zero.seller = AdditiveMarginal{zc};
    auto eff = efficient_allocation(zero);
    CHECK(to_rat(outcome_buyer_value(inst, out)) == eff.welfare);
}

TEST_CASE("extended auction zero-cost welfare property on random instances") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2;
        MarketInstance inst;
        inst.supply.units.assign(n, 1);
        inst.variety_names = {"A", "B"};
        // zero reserve values: the setting in which the zero-cost extended
        // auction reduces to the classic buyer-side ascending auction
        std::map<Package, long long> v0;
        for (Package s : all_packages(n)) v0[s] = 0;
        inst.seller = RevenueMax{v0};
        for (int l = 0; l < 3; ++l) {
            BuyerValuation b;
            b.name = "B" + std::to_string(l + 1);
            b.unit_agents.push_back(random_superadditive(rng, n, 0, 10));
            inst.buyers.push_back(std::move(b));
        }
        inst.packages = all_packages(n);
        std::map<Package, long long> zc;
        for (Package s : inst.packages) zc[s] = 0;
        auto out = run_extended_ascending_auction(inst, zc);
        MarketInstance zero = inst;
        zero.seller = AdditiveMarginal{zc};
        auto eff = efficient_allocation(zero);
        CHECK(to_rat(outcome_buyer_value(inst, out)) == eff.welfare);
    }
}

TEST_CASE("terminate-and-verify on random precondition-satisfying instances") {
    std::mt19937_64 rng(4242);
    int passes = 0;
    for (int trial = 0; trial < 110; ++trial) {
        auto inst = random_auction_instance(rng, 2 + static_cast<int>(rng() % 2),
                                            2 + static_cast<int>(rng() % 4));
        auto out = run_ascending_auction(inst); // guard throws on non-termination
        CHECK(out.warnings.empty());
        auto v = verify_equilibrium(inst, to_prices(out.prices), out.allocation);
        for (const auto& msg : v.violations) MESSAGE(msg);
        CHECK(v.ok);
        if (v.ok) ++passes;
    }
    CHECK(passes >= 110);
}

TEST_CASE("precondition violations warn but do not stop the run") {
    auto inst = six_buyers_costs();
    // make L1's values fail superadditivity: v(A) + v(B) > v(AB)
    inst.buyers[0].unit_agents[0] = {{A, 5}, {B, 5}, {AB, 5}};
    auto out = run_ascending_auction(inst);
    CHECK_FALSE(out.warnings.empty());
}

TEST_CASE("unsupported auction shapes are rejected") {
    auto multi_unit = running_example();
    CHECK_THROWS_AS(run_ascending_auction(multi_unit), UnsupportedError);

    auto inst = six_buyers_costs();
    inst.buyers[0].unit_agents.push_back({{A, 1}});
    CHECK_THROWS_AS(run_ascending_auction(inst), UnsupportedError);

    auto not_revenue = six_buyers_costs();
    CHECK_THROWS_AS(
        run_extended_ascending_auction(not_revenue, {{A, 0}, {B, 0}, {AB, 0}}),
        UnsupportedError);
}
