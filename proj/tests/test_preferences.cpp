#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"

using namespace pakmarket;
using namespace pakmarket::testing;

namespace {

long long value_of(const MarketInstance& inst, std::initializer_list<Mask> masks) {
    PackageMultiset k;
    for (Mask m : masks) k.add(Package(m));
    return aggregate_value(inst.buyers[0], k).value;
}

long long cost_of(const MarketInstance& inst, std::initializer_list<Mask> masks) {
    PackageMultiset k;
    for (Mask m : masks) k.add(Package(m));
    return total_cost(inst.seller, k, inst.supply);
}

} // namespace

TEST_CASE("value aggregation on the two-agent buyer") {
    auto inst = running_example();
    CHECK(value_of(inst, {0b01}) == 3);
    CHECK(value_of(inst, {0b10}) == 5);
    CHECK(value_of(inst, {0b01, 0b10}) == 6);          // max(3+2, 5+1)
    CHECK(value_of(inst, {0b01, 0b11}) == 12);         // 3 + 9
    CHECK(value_of(inst, {0b10, 0b11}) == 14);         // 5 + 9
    CHECK(value_of(inst, {0b01, 0b10, 0b11}) == 14);   // third package is worthless
    CHECK(value_of(inst, {}) == 0);
}

TEST_CASE("matching branches agree (exhaustive vs assignment solver)") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> dist(0, 9);
    for (int trial = 0; trial < 50; ++trial) {
        BuyerValuation b;
        b.name = "r";
        for (int q = 0; q < 3; ++q) {
            std::map<Package, long long> tbl;
            for (Package s : all_packages(2)) tbl[s] = dist(rng);
            b.unit_agents.push_back(std::move(tbl));
        }
        PackageMultiset k;
        for (Package s : all_packages(2)) k.add(s, static_cast<int>(rng() % 3));

        // exhaustive path (small) against the assignment solver, forced by a
        // padded copy of the same buyer with extra no-value agents
        auto small = aggregate_value(b, k);
        BuyerValuation padded = b;
        for (int q = 0; q < 5; ++q) padded.unit_agents.push_back({});
        auto big = aggregate_value(padded, k);
        CHECK(small.value == big.value);
    }
}

TEST_CASE("incremental cost table of the running example") {
    auto inst = running_example();
    CHECK(cost_of(inst, {0b01}) == 1);
    CHECK(cost_of(inst, {0b11}) == 1);             // 1 + 1 - 1
    CHECK(cost_of(inst, {0b01, 0b01}) == 3);       // 1 + 2
    CHECK(cost_of(inst, {0b01, 0b10}) == 2);
    CHECK(cost_of(inst, {0b01, 0b11}) == 3);       // 1 + 2 + 1 - 1
    CHECK(cost_of(inst, {0b01, 0b10, 0b11}) == 5); // 1 + 2 + 1 + 2 - 1
    CHECK(cost_of(inst, {0b11, 0b11}) == 5);       // 1 + 2 + 1 + 2 - 1 + 0
    CHECK(cost_of(inst, {}) == 0);
    CHECK_THROWS_AS(cost_of(inst, {0b01, 0b01, 0b01}), DomainError);
}

TEST_CASE("table seller cost models") {
    Supply omega{{1, 1}};
    AdditiveMarginal add{{{Package(0b01), 4}, {Package(0b10), 6}, {Package(0b11), 8}}};
    CHECK(total_cost(SellerModel{add}, make_multiset({{0b01, 1}, {0b10, 1}}), omega) == 10);
    CHECK(total_cost(SellerModel{add}, make_multiset({{0b11, 1}}), omega) == 8);

    SetUnion su{{{Package(0b01), 4}, {Package(0b10), 6}, {Package(0b11), 8}}};
    CHECK(total_cost(SellerModel{su}, make_multiset({{0b01, 1}, {0b10, 1}}), omega) == 8);
    CHECK(total_cost(SellerModel{su}, make_multiset({{0b01, 1}}), omega) == 4);

    RevenueMax rm{{{Package(0b01), 2}, {Package(0b10), 4}, {Package(0b11), 8}}};
    CHECK_THROWS_AS(total_cost(SellerModel{rm}, make_multiset({{0b01, 1}}), omega),
                    UnsupportedError);
}

TEST_CASE("buyer demand at the running-example equilibrium prices") {
    PackagePrices p{{Package(0b01), Rat(4)}, {Package(0b10), Rat(5)},
                    {Package(0b11), Rat(9)}};
    Supply omega{{1, 1}};
    auto pkgs = all_packages(2);

    // the lone agent with values (3, 5, 9): utilities -1, 0, 0
    BuyerValuation agent1;
    agent1.name = "1";
    agent1.unit_agents.push_back(
        {{Package(0b01), 3}, {Package(0b10), 5}, {Package(0b11), 9}});
    auto d = buyer_demand(agent1, p, omega, pkgs);
    CHECK(d.utility == Rat(0));
    CHECK(d.argmax.size() == 3); // {}, {B}, {AB}
    CHECK(std::find(d.argmax.begin(), d.argmax.end(), PackageMultiset()) !=
          d.argmax.end());
    CHECK(std::find(d.argmax.begin(), d.argmax.end(), make_multiset({{0b10, 1}})) !=
          d.argmax.end());
    CHECK(std::find(d.argmax.begin(), d.argmax.end(), make_multiset({{0b11, 1}})) !=
          d.argmax.end());

    // agent 4 with values (6, 2, 11) at p = (5, 5, 10): utilities 1, -3, 1
    BuyerValuation agent4;
    agent4.name = "4";
    agent4.unit_agents.push_back(
        {{Package(0b01), 6}, {Package(0b10), 2}, {Package(0b11), 11}});
    PackagePrices p2{{Package(0b01), Rat(5)}, {Package(0b10), Rat(5)},
                     {Package(0b11), Rat(10)}};
    auto d4 = buyer_demand(agent4, p2, omega, pkgs);
    CHECK(d4.utility == Rat(1));
    CHECK(d4.argmax.size() == 2);
}

TEST_CASE("seller supply for the revenue maximizer") {
    auto inst = six_buyers_revenue();
    PackagePrices p{{Package(0b01), Rat(5)}, {Package(0b10), Rat(7)},
                    {Package(0b11), Rat(11)}};
    auto sup = seller_supply(inst.seller, p, inst.supply, inst.packages);
    CHECK(sup.utility == Rat(12));
    REQUIRE(sup.argmax.size() == 1);
    CHECK(sup.argmax[0] == make_multiset({{0b01, 1}, {0b10, 1}}));

    // at the reserve everything ties at utility v0(N) = 8
    PackagePrices reserve{{Package(0b01), Rat(2)}, {Package(0b10), Rat(4)},
                          {Package(0b11), Rat(8)}};
    auto tied = seller_supply(inst.seller, reserve, inst.supply, inst.packages);
    CHECK(tied.utility == Rat(8));
    CHECK(tied.argmax.size() == 2); // sell {AB} or keep everything
}

TEST_CASE("super/subadditivity checks on the three-good tables") {
    std::map<Package, long long> v{{Package(0b001), 1}, {Package(0b010), 2},
                                   {Package(0b100), 0}, {Package(0b011), 4},
                                   {Package(0b101), 2}, {Package(0b110), 2},
                                   {Package(0b111), 4}};
    std::map<Package, long long> c{{Package(0b001), 2}, {Package(0b010), 2},
                                   {Package(0b100), 0}, {Package(0b011), 4},
                                   {Package(0b101), 2}, {Package(0b110), 3},
                                   {Package(0b111), 4}};
    CHECK(check_superadditive(v, 3));
    CHECK_FALSE(check_subadditive(c, 3)); // c(B) + c(C) = 2 < c(BC) = 3
    CHECK_FALSE(check_superadditive(c, 3));
}

TEST_CASE("closures produce the advertised shape") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        CHECK(check_superadditive(random_superadditive(rng, 3), 3));
        CHECK(check_subadditive(random_subadditive(rng, 3), 3));
    }
}

TEST_CASE("instance validation rejects a violated Assumption 1") {
    auto inst = running_example();
    auto& inc = std::get<IncrementalCfg>(inst.seller);
    inc.schedule.steps[Package(0b01)] = {3, 1}; // decreasing steps
    CHECK_THROWS_AS(validate_instance(inst), ValidationError);
}

TEST_CASE("instance validation rejects a negative total cost") {
    auto inst = running_example();
    auto& inc = std::get<IncrementalCfg>(inst.seller);
    inc.schedule.steps[Package(0b11)] = {-5, 0}; // C0({AB}) = 1 + 1 - 5 < 0
    CHECK_THROWS_AS(validate_instance(inst), ValidationError);
}

TEST_CASE("relabeling splits identical units without changing welfare") {
    auto inst = running_example();
    auto split = relabel_identical(inst, 0); // A becomes A_1, A_2
    CHECK(split.supply.varieties() == 3);
    for (int u : split.supply.units) CHECK(u <= 2);
    auto before = efficient_allocation(inst);
    auto after = efficient_allocation(split);
    CHECK(before.welfare == after.welfare);
}
