#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spdalloc/flow.hpp>
#include <spdalloc/layers.hpp>
#include <spdalloc/oracle.hpp>

using namespace spd;

TEST_CASE("three-layer instance separates rich, middle and empty agents") {
    Instance inst = validate_instance(3, 4, {{1, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}});
    Allocation stable = solve_stable_ind(inst);
    LayerPartition partition = compute_layers(inst, stable);

    REQUIRE(partition.exact().count(3) == 1);
    CHECK(partition.exact().at(3).agents == std::vector<int>{0});
    CHECK(partition.exact().at(3).items == std::vector<int>{0, 1, 2});
    REQUIRE(partition.exact().count(1) == 1);
    CHECK(partition.exact().at(1).agents == std::vector<int>{1});
    CHECK(partition.exact().at(1).items == std::vector<int>{3});
    REQUIRE(partition.exact().count(0) == 1);
    CHECK(partition.exact().at(0).agents == std::vector<int>{2});
    CHECK(partition.exact().at(0).items.empty());
    CHECK(partition.minus().empty());
}

TEST_CASE("fully shared items put every agent into one minus layer") {
    Instance inst = validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}});
    Allocation stable = solve_stable_ind(inst);
    LayerPartition partition = compute_layers(inst, stable);

    CHECK(partition.exact().empty());
    REQUIRE(partition.minus().count(1) == 1);
    CHECK(partition.minus().at(1).agents == std::vector<int>{0, 1, 2});
    CHECK(partition.minus().at(1).items == std::vector<int>{0, 1});
}

TEST_CASE("a lone agent owns the top layer") {
    Instance inst = validate_instance(1, 3, {{1, 1, 1}});
    Allocation stable = solve_stable_ind(inst);
    LayerPartition partition = compute_layers(inst, stable);
    REQUIRE(partition.exact().count(3) == 1);
    CHECK(partition.exact().at(3).agents == std::vector<int>{0});
    CHECK(partition.exact().at(3).items == std::vector<int>{0, 1, 2});
    CHECK(partition.income_range(0) == std::make_pair(int64_t{3}, int64_t{3}));
}

TEST_CASE("income ranges read off the partition") {
    Instance inst = validate_instance(3, 4, {{1, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}});
    LayerPartition pinned = compute_layers(inst, solve_stable_ind(inst));
    CHECK(pinned.income_range(0) == std::make_pair(int64_t{3}, int64_t{3}));
    CHECK(pinned.income_range(1) == std::make_pair(int64_t{1}, int64_t{1}));
    CHECK(pinned.income_range(2) == std::make_pair(int64_t{0}, int64_t{0}));
    CHECK_THROWS_AS(pinned.income_range(3), ValidationError);

    Instance shared = validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}});
    LayerPartition swing = compute_layers(shared, solve_stable_ind(shared));
    CHECK(swing.income_range(0) == std::make_pair(int64_t{0}, int64_t{1}));
    CHECK(swing.income_range(2) == std::make_pair(int64_t{0}, int64_t{1}));
}

TEST_CASE("layer computation rejects nonstable input") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    Allocation lopsided = Allocation::from_bundles(2, 2, {{0, 1}, {}});
    CHECK_THROWS_AS(compute_layers(inst, lopsided), ValidationError);
}

TEST_CASE("partition is independent of the seeding stable allocation") {
    std::vector<Instance> instances;
    instances.push_back(validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}}));
    instances.push_back(validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}}));
    instances.push_back(validate_instance(3, 4, {{1, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}}));
    Xorshift64Star rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        instances.push_back(random_instance(rng, 2 + rng.next_below(3),
                                            1 + rng.next_below(6), 50));
    }
    for (const Instance &inst : instances) {
        EnumerationResult ground = enumerate_and_classify(inst);
        REQUIRE_FALSE(ground.stable_set().empty());
        LayerPartition reference =
            compute_layers(inst, ground.materialize(inst, ground.stable_set().front()));
        for (int32_t idx : ground.stable_set()) {
            LayerPartition other = compute_layers(inst, ground.materialize(inst, idx));
            REQUIRE(other.exact().size() == reference.exact().size());
            REQUIRE(other.minus().size() == reference.minus().size());
            for (const auto &[d, group] : reference.exact()) {
                REQUIRE(other.exact().count(d) == 1);
                CHECK(other.exact().at(d).agents == group.agents);
            }
            for (const auto &[d, group] : reference.minus()) {
                REQUIRE(other.minus().count(d) == 1);
                CHECK(other.minus().at(d).agents == group.agents);
            }
        }
    }
}

TEST_CASE("layer sizes add up") {
    Xorshift64Star rng(57);
    for (int trial = 0; trial < 40; ++trial) {
        Instance inst = random_instance(rng, 2 + rng.next_below(3),
                                        1 + rng.next_below(6), 60);
        Allocation stable = solve_stable_ind(inst);
        LayerPartition partition = compute_layers(inst, stable);
        size_t items = 0;
        for (const auto &[d, group] : partition.exact()) {
            // |R_d| = d * |r_d|
            CHECK(group.items.size() == static_cast<size_t>(d) * group.agents.size());
            items += group.items.size();
        }
        for (const auto &[d, group] : partition.minus()) {
            (void)d;
            items += group.items.size();
        }
        CHECK(items == static_cast<size_t>(inst.max_usw()));
    }
}

TEST_CASE("stable allocation counting on tiny instances") {
    CHECK(count_stable_tiny(validate_instance(2, 2, {{1, 1}, {1, 1}}), 1000).count == 2);
    CHECK(count_stable_tiny(validate_instance(1, 2, {{1, 1}}), 1000).count == 1);
    CHECK(count_stable_tiny(validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}}), 1000).count == 6);
}

TEST_CASE("counting signals overflow beyond the limit") {
    Instance inst = validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}});
    CountResult result = count_stable_tiny(inst, 4);
    CHECK(result.overflowed);
    CHECK_THROWS_AS(count_stable_tiny(validate_instance(1, 11, {std::vector<int>(11, 1)}), 10),
                    ScaleError);
}

TEST_CASE("counting agrees with the oracle's stable set size") {
    Xorshift64Star rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        Instance inst = random_instance(rng, 2 + rng.next_below(3),
                                        1 + rng.next_below(5), 50);
        EnumerationResult ground = enumerate_and_classify(inst);
        CountResult counted = count_stable_tiny(inst, 1u << 20);
        CHECK_FALSE(counted.overflowed);
        CHECK(counted.count == ground.stable_set().size());
    }
}
