#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <spdalloc/transfers.hpp>

using namespace spd;

TEST_CASE("no edges when nobody likes another agent's items") {
    Instance inst = validate_instance(2, 2, {{1, 0}, {0, 1}});
    Allocation alloc = Allocation::from_bundles(2, 2, {{0}, {1}});
    TransferGraph graph = build_transfer_graph(inst, alloc);
    CHECK(graph.num_edges() == 0);
}

TEST_CASE("a single shared item gives a single edge") {
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = Allocation::from_bundles(2, 3, {{0, 1, 2}, {}});
    TransferGraph graph = build_transfer_graph(inst, alloc);
    CHECK(graph.num_edges() == 1);
    CHECK(graph.has_edge(0, 1));
    CHECK(graph.witness(0, 1) == 2);
    CHECK_FALSE(graph.has_edge(1, 0));
}

TEST_CASE("shared divisible items give edges in both directions") {
    // the two jointly liked items of the mixed fixture, agents 2..4 only
    Instance inst = validate_instance(3, 2, {{1, 1}, {1, 1}, {1, 1}});
    FractionalAllocation alloc(3, 2);
    alloc.add_share(0, 0, make_rat(1, 3));
    alloc.add_share(0, 2, make_rat(2, 3));
    alloc.add_share(1, 1, make_rat(1, 3));
    alloc.add_share(1, 2, make_rat(2, 3));
    TransferGraph graph = build_transfer_graph(inst, alloc);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            if (a != b) {
                CHECK(graph.has_edge(a, b));
            }
        }
    }
    CHECK(graph.num_edges() == 6);
}

TEST_CASE("unclean allocations are rejected") {
    Instance inst = validate_instance(2, 1, {{1}, {0}});
    Allocation alloc = Allocation::from_bundles(2, 1, {{}, {0}});
    CHECK_THROWS_AS(build_transfer_graph(inst, alloc), ValidationError);
}

TEST_CASE("no narrowing transfer on a balanced profile") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    Allocation alloc = Allocation::from_bundles(2, 2, {{0}, {1}});
    CHECK_FALSE(find_narrowing_transfer(inst, alloc).has_value());
    CHECK(is_stable(inst, alloc));
}

TEST_CASE("a reachable gap of two yields the one-hop path") {
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = Allocation::from_bundles(2, 3, {{0, 1, 2}, {}});
    auto path = find_narrowing_transfer(inst, alloc);
    REQUIRE(path.has_value());
    CHECK(path->agents == std::vector<int>{0, 1});
    CHECK(path->witness_items == std::vector<int>{2});
    CHECK(path->kind == TransferKind::kNarrowing);
    CHECK(path->to_string() == "1 -[item 3]-> 2 (narrowing)");
    CHECK_FALSE(is_stable(inst, alloc));
}

TEST_CASE("multi-hop narrowing paths are found and applied conservatively") {
    // agent 1 (income 3) can only reach agent 3 (income 0) through agent 2,
    // whose income 2 keeps it off the target list
    Instance inst = validate_instance(3, 5,
                                      {{1, 1, 1, 0, 0}, {0, 0, 1, 1, 1}, {0, 0, 0, 0, 1}});
    Allocation alloc = Allocation::from_bundles(3, 5, {{0, 1, 2}, {3, 4}, {}});
    auto path = find_narrowing_transfer(inst, alloc);
    REQUIRE(path.has_value());
    CHECK(path->agents == std::vector<int>{0, 1, 2});
    CHECK(path->witness_items == std::vector<int>{2, 4});

    Allocation moved = apply_transfer(inst, alloc, *path);
    CHECK(moved.income(0) == 2);
    CHECK(moved.income(1) == 2); // relay unchanged
    CHECK(moved.income(2) == 1);
    CHECK(is_clean(inst, moved));
    CHECK(is_max_usw(inst, moved));
    CHECK(is_stable(inst, moved));
}

TEST_CASE("single-hop application moves exactly the witness item") {
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = Allocation::from_bundles(2, 3, {{0, 1, 2}, {}});
    TransferPath path{{0, 1}, {2}, TransferKind::kNarrowing, std::nullopt};
    Allocation moved = apply_transfer(inst, alloc, path);
    CHECK(moved.owner_of(2) == 1);
    CHECK(moved.bundle(0) == std::vector<int>{0, 1});
}

TEST_CASE("stale paths are rejected") {
    Instance inst = validate_instance(2, 3, {{1, 1, 1}, {0, 0, 1}});
    Allocation alloc = Allocation::from_bundles(2, 3, {{0, 1}, {2}});
    TransferPath stale{{0, 1}, {2}, TransferKind::kNarrowing, std::nullopt};
    CHECK_THROWS_AS(apply_transfer(inst, alloc, stale), ValidationError);
    TransferPath not_liked{{0, 1}, {0}, TransferKind::kNarrowing, std::nullopt};
    CHECK_THROWS_AS(apply_transfer(inst, alloc, not_liked), ValidationError);
    TransferPath repeat{{0, 1, 0}, {0, 0}, TransferKind::kNarrowing, std::nullopt};
    CHECK_THROWS_AS(apply_transfer(inst, alloc, repeat), ValidationError);
}

TEST_CASE("fractional narrowing meets at the midpoint when shares allow") {
    Instance inst = validate_instance(2, 1, {{1}, {1}});
    FractionalAllocation alloc(2, 1);
    alloc.add_share(0, 0, Rat(1));
    auto path = find_narrowing_transfer(inst, alloc);
    REQUIRE(path.has_value());
    CHECK(path->agents == std::vector<int>{0, 1});
    REQUIRE(path->amount.has_value());
    CHECK(*path->amount == make_rat(1, 2));
    FractionalAllocation moved = apply_transfer(inst, alloc, *path);
    CHECK(moved.income(0) == make_rat(1, 2));
    CHECK(moved.income(1) == make_rat(1, 2));
    CHECK_FALSE(find_narrowing_transfer(inst, moved).has_value());
}

TEST_CASE("fractional amount is capped by the smallest witness share") {
    Instance inst = validate_instance(2, 2, {{1, 1}, {1, 1}});
    FractionalAllocation alloc(2, 2);
    alloc.add_share(0, 0, Rat(1));
    alloc.add_share(1, 0, make_rat(1, 4));
    alloc.add_share(1, 1, make_rat(3, 4));
    auto path = find_narrowing_transfer(inst, alloc);
    REQUIRE(path.has_value());
    CHECK(*path->amount <= alloc.share(path->witness_items.front(), path->agents.front()));
    FractionalAllocation moved = apply_transfer(inst, alloc, *path);
    Rat total = moved.item_total(0) + moved.item_total(1);
    CHECK(total == 2);
    CHECK(moved.income(0) + moved.income(1) == 2);
}

TEST_CASE("transfer kinds classify by endpoint incomes") {
    CHECK(classify_transfer(Rat(3), Rat(1), true) == TransferKind::kNarrowing);
    CHECK(classify_transfer(Rat(2), Rat(1), true) == TransferKind::kSwapping);
    CHECK(classify_transfer(Rat(1), Rat(1), true) == TransferKind::kWidening);
    CHECK(classify_transfer(Rat(1), Rat(3), true) == TransferKind::kWidening);
    CHECK(classify_transfer(make_rat(3, 2), make_rat(4, 3), false) ==
          TransferKind::kNarrowing);
    CHECK(classify_transfer(Rat(1), Rat(1), false) == TransferKind::kWidening);
}

TEST_CASE("narrowing search starts from the highest income class") {
    // both agent 1 (income 3) and agent 2 (income 2) can shed to agent 3
    Instance inst = validate_instance(3, 5,
                                      {{1, 1, 1, 0, 0}, {0, 0, 0, 1, 1}, {1, 0, 0, 1, 0}});
    Allocation alloc = Allocation::from_bundles(3, 5, {{0, 1, 2}, {3, 4}, {}});
    auto path = find_narrowing_transfer(inst, alloc);
    REQUIRE(path.has_value());
    CHECK(path->agents.front() == 0);
    CHECK(path->agents.back() == 2);
}
